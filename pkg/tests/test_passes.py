import random

import pytest

import helpers as H
import oracle
from qasm_forge import fixtures
from qasm_forge.driver import compile_source
from qasm_forge.ir import clone_module, print_ir
from qasm_forge.passes import PASSES, PassConfig, run_pass, run_passes, run_pipeline


def _gates(module):
    stream, _ = H.ir_gate_stream(module)
    return stream


def _optimized(source, names):
    module = H.build(source)
    run_passes(module, names)
    return module


def test_inline_removes_calls():
    module = _optimized(fixtures.inline_cancel(), ["inline"])
    assert "func.call" not in print_ir(module).split("func @main")[1]


def test_unroll_expands_constant_loops():
    src = "qubit q[2];\nfor i in [0:3] {\n  h q[0];\n}\n"
    module = _optimized(src, ["unroll"])
    assert "affine.for" not in print_ir(module)
    assert [g[0] for g in _gates(module)] == ["h"] * 3


def test_unroll_respects_threshold():
    module = H.build("qubit q[1];\nfor i in [0:50] {\n  h q[0];\n}\n")
    run_pass(module, "unroll", PassConfig(unroll_threshold=10))
    assert "affine.for" in print_ir(module)


def test_constprop_folds_arithmetic():
    module = _optimized("qubit q[1];\nfloat[64] a = 0.5;\nrx(a * 2) q[0];\n", ["constprop"])
    (gate,) = _gates(module)
    assert gate == ("rx", (0,), (1.0,))


@pytest.mark.parametrize(
    "source, expected",
    [
        ("qubit q[1];\nx q[0];\nx q[0];\n", []),
        ("qubit q[1];\ns q[0];\nsdg q[0];\n", []),
        ("qubit q[2];\ncx q[0], q[1];\ncx q[0], q[1];\n", []),
        ("qubit q[2];\ncx q[0], q[1];\ncx q[1], q[0];\n", ["cnot", "cnot"]),
    ],
)
def test_identity_pairs(source, expected):
    module = _optimized(source, ["identity-pairs"])
    assert [g[0] for g in _gates(module)] == expected


def test_merge_rotations_sums_angles():
    module = _optimized("qubit q[1];\nrz(0.1) q[0];\nrz(0.2) q[0];\nrz(-0.3) q[0];\n", ["merge-rotations"])
    gates = _gates(module)
    assert len(gates) <= 1
    if gates:
        assert gates[0][0] == "rz" and abs(gates[0][2][0]) < 1e-12


def test_simplify_conjugated_t():
    module = _optimized("qubit q[1];\nh q[0];\nt q[0];\nh q[0];\n", ["simplify"])
    assert [g[0] for g in _gates(module)] == ["rx"]


def test_passes_leave_modifier_bodies_alone():
    src = "def R qubit[1]:r {\n  x r[0];\n  x r[0];\n}\nqubit q[1];\ninv @ R q;\n"
    module = _optimized(src, ["inline", "identity-pairs", "merge-rotations"])
    main = print_ir(module).split("func @main")[1]
    assert "q.adj_region" in main
    assert main.count("qvs.x") == 2


def test_pipeline_is_idempotent():
    module = H.build(fixtures.ghz())
    run_pipeline(module)
    once = print_ir(module)
    run_pipeline(module)
    assert print_ir(module) == once


def test_dce_drops_unused_classical_values():
    module = _optimized("int a = 3;\nint b = a + 4;\nqubit q[1];\nh q[0];\n", ["constprop", "dce"])
    assert "arith.addi" not in print_ir(module)


def test_unknown_pass_name():
    with pytest.raises(ValueError, match="unknown pass"):
        run_pass(H.build("qubit q[1];\n"), "nope", PassConfig())


@pytest.mark.parametrize("name", sorted(PASSES))
def test_each_pass_preserves_semantics_on_random_programs(name):
    rng = random.Random(hash(name) & 0xFFFF)
    for _ in range(30):
        source, circuit, n = H.random_program(rng)
        module = H.build(source)
        run_passes(module, [name])
        got = oracle.unitary(_gates(module), n)
        assert oracle.equal_up_to_phase(got, oracle.unitary(circuit, n)), source


def test_opt_levels_differ_only_in_gate_count():
    src = fixtures.inline_cancel()
    o0 = H.ir_gate_stream(compile_source(src, opt_level=0).module)[0]
    o1 = H.ir_gate_stream(compile_source(src, opt_level=1).module)[0]
    assert len(o0) == 2 and o1 == []
