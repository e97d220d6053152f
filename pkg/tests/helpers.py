"""Shared test utilities: random program generators and gate-stream capture."""
from __future__ import annotations

import math
import random

import numpy as np

from qasm_forge.driver import compile_source, execute
from qasm_forge.frontend import parse
from qasm_forge.ir import build_module
from qasm_forge.runtime import ExecutionConfig, Runtime, run_ir
from qasm_forge.runtime.lir_exec import run_lir

import oracle

ONE_QUBIT = ["x", "z", "h", "s", "t", "sdg", "tdg", "rx", "ry", "rz"]
ROTATIONS = {"rx", "ry", "rz", "phase", "crz", "cphase"}
_INVERSE = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t"}


def _angle(rng: random.Random) -> float:
    if rng.random() < 0.3:
        return rng.choice([1, -1, 2, -2, 3, 4]) * math.pi / 4
    return round(rng.uniform(-math.pi, math.pi), 6)


def _gate_text(name, qubits, params, reg="q") -> str:
    p = f"({', '.join(repr(float(x)) for x in params)})" if params else ""
    args = ", ".join(f"{reg}[{q}]" for q in qubits)
    return f"{name}{p} {args};"


def _random_gate(rng: random.Random, n: int, names=None):
    names = names or ONE_QUBIT + (["cx"] if n > 1 else [])
    name = rng.choice(names)
    if name == "cx":
        a, b = rng.sample(range(n), 2)
        return ("cnot", (a, b), ()), "cx"
    q = rng.randrange(n)
    params = (_angle(rng),) if name in ROTATIONS else ()
    return (name, (q,), params), name


def _followup(rng: random.Random, gate):
    """A gate likely to interact with ``gate`` under the rewrites."""
    name, qs, ps = gate
    r = rng.random()
    if name in _INVERSE and r < 0.5:
        return (_INVERSE[name], qs, ())
    if name in ROTATIONS and r < 0.6:
        return (name, qs, (_angle(rng) if r < 0.3 else -ps[0],))
    return gate


def random_program(rng: random.Random, max_qubits: int = 5, max_gates: int = 40):
    """Source text, executed gate list and qubit count.

    Programs mix straight-line gates with a small loop and a subroutine so
    inlining and unrolling get exercised; at most ``max_gates`` gates run.
    """
    n = rng.randint(1, max_qubits)
    budget = rng.randint(1, max_gates)
    lines = [f"qubit q[{n}];"]
    circuit = []
    defs = []

    def emit_gate(g, spelled, out_lines, out_circ, reg="q"):
        name, qs, ps = g
        out_lines.append(_gate_text(spelled if name == "cnot" else name, qs, ps, reg))
        out_circ.append(g)

    while len(circuit) < budget:
        kind = rng.random()
        room = budget - len(circuit)
        if kind < 0.12 and room >= 4:
            # loop body repeated a few times
            reps = rng.randint(2, 3)
            body_lines, body = [], []
            for _ in range(rng.randint(1, max(1, min(3, room // reps)))):
                g, spelled = _random_gate(rng, n)
                emit_gate(g, spelled, body_lines, body)
            lines.append(f"for i in [0:{reps}] {{")
            lines += ["  " + b for b in body_lines]
            lines.append("}")
            circuit += body * reps
        elif kind < 0.22 and room >= 2 and not defs:
            body_lines, body = [], []
            for _ in range(rng.randint(1, min(4, room))):
                g, spelled = _random_gate(rng, n)
                emit_gate(g, spelled, body_lines, body, reg="qq")
            defs.append("def sub qubit[%d]:qq {\n%s\n}" % (n, "\n".join("  " + b for b in body_lines)))
            lines.append("sub q;")
            circuit += body
        else:
            g, spelled = _random_gate(rng, n)
            emit_gate(g, spelled, lines, circuit)
            if len(circuit) < budget and rng.random() < 0.4:
                f = _followup(rng, g)
                emit_gate(f, "cx", lines, circuit)
            if len(circuit) + 2 <= budget and g[0] == "h" and rng.random() < 0.3:
                mid = rng.choice(["t", "tdg", "s", "sdg", "z", "x"])
                emit_gate((mid, g[1], ()), mid, lines, circuit)
                emit_gate(("h", g[1], ()), "h", lines, circuit)
    source = "\n".join(defs + lines) + "\n"
    return source, circuit, n


REGION_GATES = ["x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "phase", "u",
                "cx", "cy", "cz", "ch", "crz", "cphase", "swap", "ccx"]
_ARITY = {"cx": 2, "cy": 2, "cz": 2, "ch": 2, "crz": 2, "cphase": 2, "swap": 2, "ccx": 3}
_NPARAMS = {"rx": 1, "ry": 1, "rz": 1, "phase": 1, "crz": 1, "cphase": 1, "u": 3}
_CANON = {"cx": "cnot"}


def _region_gate(rng: random.Random, m: int):
    while True:
        name = rng.choice(REGION_GATES)
        k = _ARITY.get(name, 1)
        if k <= m:
            break
    qs = tuple(rng.sample(range(m), k))
    ps = tuple(_angle(rng) for _ in range(_NPARAMS.get(name, 0)))
    return name, qs, ps


def random_region(rng: random.Random, m: int, max_gates: int = 12):
    """Body text of a subroutine on ``qubit[m]:r`` and its gate list.

    Sometimes part of the body is a compute/action block, whose meaning
    is compute, action, then the inverse of compute.
    """
    lines, circuit = [], []

    def gates(count):
        out_lines, out = [], []
        for _ in range(count):
            name, qs, ps = _region_gate(rng, m)
            out_lines.append(_gate_text(name, qs, ps, "r"))
            out.append((_CANON.get(name, name), qs, ps))
        return out_lines, out

    ln, c = gates(rng.randint(0, max_gates // 2))
    lines += ln
    circuit += c
    if rng.random() < 0.4:
        cl, cc = gates(rng.randint(1, 3))
        al, ac = gates(rng.randint(1, 3))
        lines.append("compute {")
        lines += ["  " + x for x in cl]
        lines.append("} action {")
        lines += ["  " + x for x in al]
        lines.append("}")
        circuit += cc + ac + oracle.dagger_circuit(cc)
    ln, c = gates(rng.randint(1, max_gates // 2))
    lines += ln
    circuit += c
    return "\n".join("  " + x for x in lines), circuit


# -- running compiled code -----------------------------------------------------------


def _recording_runtime(config=None):
    rt = Runtime(config or ExecutionConfig())
    stream = []
    rt.backend.apply = lambda gate, qubits, params: stream.append((gate, tuple(qubits), tuple(params)))
    return rt, stream


def ir_gate_stream(module):
    rt, stream = _recording_runtime()
    run_ir(module, rt)
    return stream, rt.next_qid


def lir_gate_stream(lir, config=None):
    rt, stream = _recording_runtime(config)
    run_lir(lir, rt)
    return stream, rt.next_qid


def build(source: str):
    return build_module(parse(source))


def compiled_unitary(stream, n: int) -> np.ndarray:
    return oracle.unitary(stream, n)


def run_statevector(source: str, seed: int = 0, opt_level: int = 1):
    comp = compile_source(source, opt_level=opt_level)
    return execute(comp.lir, ExecutionConfig(backend="statevector", seed=seed))


def estimator_stats(source: str, opt_level: int = 1, ccx_cost=None):
    comp = compile_source(source, opt_level=opt_level, keep_ir_text=False)
    return execute(comp.lir, ExecutionConfig(ccx_cost=ccx_cost)).stats
