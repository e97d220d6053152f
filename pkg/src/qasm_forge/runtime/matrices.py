"""Unitaries of the built-in gates.

For multi-qubit gates the first listed qubit is the most significant bit
of the matrix index, so controls come first.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

_I2 = np.eye(2, dtype=complex)


def _ctrl(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    out = np.eye(2 * n, dtype=complex)
    out[n:, n:] = u
    return out


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def phase(lam: float) -> np.ndarray:
    return np.diag([1.0, cmath.exp(1j * lam)]).astype(complex)


def u(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -cmath.exp(1j * lam) * s], [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]

_FIXED = {
    "x": X, "y": Y, "z": Z, "h": H,
    "s": phase(math.pi / 2), "sdg": phase(-math.pi / 2),
    "t": phase(math.pi / 4), "tdg": phase(-math.pi / 4),
    "cnot": _ctrl(X), "cy": _ctrl(Y), "cz": _ctrl(Z), "ch": _ctrl(H),
    "swap": SWAP, "ccx": _ctrl(_ctrl(X)),
}

_PARAMETRIC = {
    "rx": rx, "ry": ry, "rz": rz, "phase": phase, "u": u,
    "crz": lambda t: _ctrl(rz(t)), "cphase": lambda t: _ctrl(phase(t)),
}


def gate_matrix(name: str, params=()) -> np.ndarray:
    if name in _FIXED:
        return _FIXED[name]
    try:
        return _PARAMETRIC[name](*params)
    except KeyError:
        raise KeyError(f"no matrix for gate '{name}'") from None


def identity(n: int) -> np.ndarray:
    return np.eye(1 << n, dtype=complex)
