import math

import numpy as np
import pytest

import helpers as H
import oracle
from qasm_forge import fixtures
from qasm_forge.driver import compile_source, execute
from qasm_forge.runtime import (
    ExecutionConfig, GateRecord, QuantumRuntimeError, Runtime, adjoint, controlled, decompose_ccx, power,
)
from qasm_forge.runtime.backends import StatevectorBackend
from qasm_forge.runtime.matrices import gate_matrix

_PARAMS = {"rx": (0.37,), "ry": (-1.1,), "rz": (2.3,), "phase": (0.9,), "crz": (0.4,),
           "cphase": (-0.6,), "u": (0.3, 1.2, -0.7)}


@pytest.mark.parametrize("name", sorted((set(H.REGION_GATES) | {"cnot"}) - {"cx"}))
def test_gate_matrices_match_reference(name):
    params = _PARAMS.get(name, ())
    assert np.allclose(gate_matrix(name, params), oracle.matrix(name, params), atol=1e-12)


def _records_unitary(records, n):
    return oracle.unitary([(r.gate, r.qubits, r.params) for r in records], n)


def _rec(gate, qubits, params=()):
    return GateRecord(gate, tuple(qubits), tuple(params))


def test_adjoint_inverts():
    recs = [_rec("h", [0]), _rec("t", [1]), _rec("cnot", [0, 1]), _rec("u", [1], (0.3, 0.2, 0.1))]
    u = _records_unitary(recs + adjoint(recs), 2)
    assert oracle.equal_up_to_phase(u, np.eye(4))


@pytest.mark.parametrize("k", [-2, -1, 0, 1, 2, 3])
def test_power_repeats(k):
    recs = [_rec("rx", [0], (0.4,)), _rec("cnot", [0, 1])]
    one = _records_unitary(recs, 2)
    want = np.linalg.matrix_power(one if k >= 0 else one.conj().T, abs(k))
    assert oracle.equal_up_to_phase(_records_unitary(power(recs, k), 2), want)


@pytest.mark.parametrize("gate", ["x", "y", "z", "h", "s", "t", "rx", "ry", "rz", "phase", "u",
                                  "cnot", "cz", "crz", "swap", "ccx"])
def test_controlled_single_gate_is_exact(gate):
    arity = {"cnot": 2, "cz": 2, "crz": 2, "swap": 2, "ccx": 3}.get(gate, 1)
    rec = _rec(gate, range(1, arity + 1), _PARAMS.get(gate, ()))
    n = arity + 1
    got = _records_unitary(controlled([rec], 0, 0), n)
    body = oracle.unitary([(rec.gate, tuple(q - 1 for q in rec.qubits), rec.params)], arity)
    want = np.block([[np.eye(1 << arity), np.zeros((1 << arity,) * 2)], [np.zeros((1 << arity,) * 2), body]])
    # controlled phase is physical, so no global phase slack here
    assert np.allclose(got, want, atol=1e-9)


def test_ccx_decomposition_is_exact():
    recs = decompose_ccx(0, 1, 2, _rec("x", [2]))
    assert np.allclose(_records_unitary(recs, 3), oracle.matrix("ccx"), atol=1e-9)
    assert sum(r.gate in ("cnot", "crz") for r in recs) == 5


def test_compute_segment_passes_through_ctrl():
    # a flagged compute block inside a controlled subroutine keeps its compute and uncompute
    # gates uncontrolled; only the action is controlled
    src = ("def R qubit[2]:r {\n  compute {\n    h r[0];\n  } action {\n    cx r[0], r[1];\n  }\n}\n"
           "qubit c;\nqubit q[2];\nctrl @ R c, q;\n")
    native = H.estimator_stats(src, opt_level=0, ccx_cost=7)
    assert dict(native.per_gate) == {"h": 2, "ccx": 1}
    assert native.controlled_ops == 7
    # default: the ccx is expanded into five two-qubit gates
    assert H.estimator_stats(src, opt_level=0).controlled_ops == 5


def test_estimator_measures_zero_and_counts():
    stats = H.estimator_stats("qubit q[1];\nbit b;\nh q[0];\nb = measure q[0];\nreset q[0];\n")
    assert stats.per_gate["mz"] == 1 and stats.per_gate["reset"] == 1
    assert stats.total_gates == 1


def test_statevector_bell_correlations():
    src = "qubit q[2];\nbit a;\nbit b;\nh q[0];\ncx q[0], q[1];\na = measure q[0];\nb = measure q[1];\nprint(a == b);\n"
    for seed in range(8):
        rt = H.run_statevector(src, seed=seed)
        assert rt.output == ["true"]


def test_reset_returns_to_zero():
    rng = np.random.default_rng(1)
    sv = StatevectorBackend(rng)
    sv.allocate(0)
    sv.apply("h", [0], ())
    sv.reset(0)
    assert np.allclose(sv.amplitudes([0]), [1, 0])


def test_statevector_cap_error():
    rt = Runtime(ExecutionConfig(backend="statevector", qubit_cap=3))
    with pytest.raises(QuantumRuntimeError, match="--backend=estimator"):
        rt.qubit_allocate_array(4)


def test_measure_inside_region_is_an_error():
    src = "def R qubit[1]:r {\n  bit b;\n  b = measure r[0];\n}\nqubit q[1];\ninv @ R q;\n"
    with pytest.raises(QuantumRuntimeError, match="measurement inside"):
        execute(compile_source(src, opt_level=0).lir, ExecutionConfig())


def test_out_of_range_index_is_a_runtime_error():
    src = "qubit q[2];\nint k = 1;\nk = k + 5;\nh q[k];\n"
    with pytest.raises(QuantumRuntimeError, match="out of range"):
        execute(compile_source(src, opt_level=0).lir, ExecutionConfig())


def test_print_formats_values():
    rt = Runtime(ExecutionConfig())
    rt.print(["x = ", 0.5, " ", True, " ", 3])
    assert rt.output == ["x = 0.5 true 3"]


def test_shots_accumulate_stats():
    comp = compile_source(fixtures.ghz())
    stats = execute(comp.lir, ExecutionConfig(shots=4)).stats
    assert stats.shots == 4
    assert stats.total_gates == 12


def test_stats_json_is_sorted():
    stats = H.estimator_stats(fixtures.ghz())
    text = stats.to_json()
    assert text.index('"per_gate"') < text.index('"seed"') < text.index('"shots"')
    assert math.isclose(stats.as_dict()["total_gates"], 3)
