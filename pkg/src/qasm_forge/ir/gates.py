"""Built-in gate set: arity, parameter count and adjoint algebra."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class GateInfo:
    name: str
    num_qubits: int
    num_params: int
    self_inverse: bool = False
    diagonal: bool = False


GATES: dict[str, GateInfo] = {
    g.name: g
    for g in [
        GateInfo("x", 1, 0, self_inverse=True),
        GateInfo("y", 1, 0, self_inverse=True),
        GateInfo("z", 1, 0, self_inverse=True, diagonal=True),
        GateInfo("h", 1, 0, self_inverse=True),
        GateInfo("s", 1, 0, diagonal=True),
        GateInfo("sdg", 1, 0, diagonal=True),
        GateInfo("t", 1, 0, diagonal=True),
        GateInfo("tdg", 1, 0, diagonal=True),
        GateInfo("rx", 1, 1),
        GateInfo("ry", 1, 1),
        GateInfo("rz", 1, 1, diagonal=True),
        GateInfo("phase", 1, 1, diagonal=True),
        GateInfo("u", 1, 3),
        GateInfo("cnot", 2, 0, self_inverse=True),
        GateInfo("cy", 2, 0, self_inverse=True),
        GateInfo("cz", 2, 0, self_inverse=True, diagonal=True),
        GateInfo("ch", 2, 0, self_inverse=True),
        GateInfo("crz", 2, 1, diagonal=True),
        GateInfo("cphase", 2, 1, diagonal=True),
        GateInfo("swap", 2, 0, self_inverse=True),
        GateInfo("ccx", 3, 0, self_inverse=True),
    ]
}

ALIASES = {
    "cx": "cnot", "CX": "cnot", "CNOT": "cnot",
    "p": "phase",
    "u3": "u", "U": "u",
    "cp": "cphase", "cu1": "cphase",
    "toffoli": "ccx",
    "id": None,
}

_NAMED_INVERSE = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t"}
_ROTATIONS = frozenset({"rx", "ry", "rz", "phase", "crz", "cphase"})

# single-qubit gates that are phase(angle) exactly
PHASE_FAMILY = {"z": math.pi, "s": math.pi / 2, "sdg": -math.pi / 2, "t": math.pi / 4, "tdg": -math.pi / 4}


def canonical_name(name: str) -> str | None:
    """Resolve an alias; returns None for names that are not built-in gates."""
    if name in GATES:
        return name
    resolved = ALIASES.get(name, "")
    return resolved if resolved else None


def is_gate(name: str) -> bool:
    return canonical_name(name) is not None


def dagger(name: str, params: list) -> tuple[str, list]:
    """Adjoint of ``name(params)``.  Params may be floats or symbolic
    placeholders, in which case only negation is applied via ``neg``."""
    info = GATES[name]
    if info.self_inverse:
        return name, list(params)
    if name in _NAMED_INVERSE:
        return _NAMED_INVERSE[name], []
    if name in _ROTATIONS:
        return name, [-params[0]]
    if name == "u":
        theta, phi, lam = params
        return "u", [-theta, -lam, -phi]
    raise KeyError(f"no adjoint rule for gate {name}")


def is_adjoint_pair(a: str, pa: list, b: str, pb: list, tol: float = 1e-12) -> bool:
    """True when ``b(pb)`` is exactly the adjoint of ``a(pa)`` (all params static)."""
    name, params = dagger(a, pa)
    if name != b or len(params) != len(pb):
        return False
    return all(abs(_wrap(p - q, a)) <= tol for p, q in zip(params, pb))


def _wrap(delta: float, gate: str) -> float:
    # phase-like angles are 2*pi periodic exactly; rotations only up to sign
    if gate in ("phase", "cphase"):
        return math.remainder(delta, 2 * math.pi)
    return delta


def phase_gate_for(angle: float, tol: float = 1e-12) -> tuple[str, list]:
    """Canonical single gate for phase(angle): a named gate at multiples of pi/4."""
    a = math.remainder(angle, 2 * math.pi)
    if abs(a) <= tol:
        return "id", []
    for name, ref in PHASE_FAMILY.items():
        if abs(math.remainder(a - ref, 2 * math.pi)) <= tol:
            return name, []
    return "phase", [a]
