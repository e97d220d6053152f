"""Reference semantics for tests, written without the package.

Gate matrices come from matrix exponentials of Pauli operators, and gates
act by scattering basis amplitudes, so nothing here shares code with the
simulator under test.  Qubit 0 is the most significant bit.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _rot(pauli, theta):
    return expm(-0.5j * theta * pauli)


def _phase(lam):
    return np.diag([1, np.exp(1j * lam)])


def _controlled(u):
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out


def _u3(theta, phi, lam):
    # rz(phi) ry(theta) rz(lam) with the global phase that makes [0,0] real
    return np.exp(0.5j * (phi + lam)) * (_rot(PZ, phi) @ _rot(PY, theta) @ _rot(PZ, lam))


def matrix(name: str, params=()) -> np.ndarray:
    p = list(params)
    table = {
        "x": lambda: PX, "y": lambda: PY, "z": lambda: PZ,
        "h": lambda: (PX + PZ) / math.sqrt(2),
        "s": lambda: _phase(math.pi / 2), "sdg": lambda: _phase(-math.pi / 2),
        "t": lambda: _phase(math.pi / 4), "tdg": lambda: _phase(-math.pi / 4),
        "rx": lambda: _rot(PX, p[0]), "ry": lambda: _rot(PY, p[0]), "rz": lambda: _rot(PZ, p[0]),
        "phase": lambda: _phase(p[0]), "u": lambda: _u3(*p),
        "cnot": lambda: _controlled(PX), "cx": lambda: _controlled(PX),
        "cy": lambda: _controlled(PY), "cz": lambda: _controlled(PZ),
        "ch": lambda: _controlled((PX + PZ) / math.sqrt(2)),
        "crz": lambda: _controlled(_rot(PZ, p[0])), "cphase": lambda: _controlled(_phase(p[0])),
        "swap": lambda: np.eye(4, dtype=complex)[[0, 2, 1, 3]],
        "ccx": lambda: _controlled(_controlled(PX)),
    }
    return np.asarray(table[name](), dtype=complex)


def apply(state: np.ndarray, name: str, qubits, params, n: int) -> np.ndarray:
    """Apply a gate to every column of ``state`` (shape 2**n x cols)."""
    m = matrix(name, params)
    k = len(qubits)
    idx = np.arange(1 << n)
    sub = np.zeros_like(idx)
    rest = idx.copy()
    for j, q in enumerate(qubits):
        bit = (idx >> (n - 1 - q)) & 1
        sub |= bit << (k - 1 - j)
        rest &= ~(1 << (n - 1 - q))
    out = np.zeros_like(state)
    for j in range(1 << k):
        target = rest.copy()
        for pos, q in enumerate(qubits):
            if (j >> (k - 1 - pos)) & 1:
                target |= 1 << (n - 1 - q)
        np.add.at(out, target, m[j, sub][:, None] * state)
    return out


def unitary(circuit, n: int) -> np.ndarray:
    u = np.eye(1 << n, dtype=complex)
    for name, qubits, params in circuit:
        u = apply(u, name, qubits, params, n)
    return u


def dagger_circuit(circuit):
    """Gate list of the inverse, using matrix inverses via explicit forms."""
    inverse = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t"}
    out = []
    for name, qubits, params in reversed(circuit):
        if name in inverse:
            out.append((inverse[name], qubits, ()))
        elif name in ("rx", "ry", "rz", "phase", "crz", "cphase"):
            out.append((name, qubits, (-params[0],)))
        elif name == "u":
            th, phi, lam = params
            out.append(("u", qubits, (-th, -lam, -phi)))
        else:
            out.append((name, qubits, tuple(params)))
    return out


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """``a == e^{i phi} b`` entrywise within ``tol`` for one global phi."""
    if a.shape != b.shape:
        return False
    i = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[i]) < tol:
        return bool(np.max(np.abs(a)) <= tol)
    ph = a[i] / b[i]
    if abs(abs(ph) - 1) > tol:
        return False
    ph /= abs(ph)
    return bool(np.max(np.abs(a - ph * b)) <= tol)
