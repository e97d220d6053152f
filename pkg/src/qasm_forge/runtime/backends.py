"""Execution backends: a gate-counting estimator and a dense statevector."""
from __future__ import annotations

import numpy as np

from .matrices import gate_matrix
from .synthesis import QuantumRuntimeError

DEFAULT_QUBIT_CAP = 22


class EstimatorBackend:
    """Tracks nothing but qubit liveness; counting happens in the runtime."""

    kind = "estimator"

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def allocate(self, qid: int) -> None:
        pass

    def release(self, qid: int) -> None:
        pass

    def apply(self, gate: str, qubits, params) -> None:
        pass

    def measure(self, qid: int) -> bool:
        return False

    def reset(self, qid: int) -> None:
        pass


class StatevectorBackend:
    """Dense simulation; the state is an n-axis tensor of shape (2,)*n and
    ``axis`` maps a live qubit id to its tensor axis."""

    kind = "statevector"

    def __init__(self, rng: np.random.Generator, qubit_cap: int = DEFAULT_QUBIT_CAP):
        self.rng = rng
        self.cap = qubit_cap
        self.state = np.ones((), dtype=complex)
        self.axis: dict[int, int] = {}

    @property
    def num_qubits(self) -> int:
        return self.state.ndim

    def allocate(self, qid: int) -> None:
        if self.state.ndim >= self.cap:
            raise QuantumRuntimeError(
                f"the statevector backend is limited to {self.cap} qubits; use --backend=estimator for larger programs"
            )
        self.state = np.stack([self.state, np.zeros_like(self.state)], axis=-1)
        self.axis[qid] = self.state.ndim - 1

    def release(self, qid: int) -> None:
        bit = self.measure(qid)
        ax = self.axis.pop(qid)
        self.state = np.take(self.state, int(bit), axis=ax)
        for q, a in self.axis.items():
            if a > ax:
                self.axis[q] = a - 1

    def apply(self, gate: str, qubits, params) -> None:
        m = gate_matrix(gate, params)
        self.apply_matrix(m, qubits)

    def apply_matrix(self, m: np.ndarray, qubits) -> None:
        k = len(qubits)
        axes = [self.axis[q] for q in qubits]
        t = m.reshape((2,) * (2 * k))
        out = np.tensordot(t, self.state, axes=(list(range(k, 2 * k)), axes))
        self.state = np.moveaxis(out, list(range(k)), axes)

    def probability_one(self, qid: int) -> float:
        one = np.take(self.state, 1, axis=self.axis[qid])
        return float(np.vdot(one, one).real)

    def measure(self, qid: int) -> bool:
        p1 = min(max(self.probability_one(qid), 0.0), 1.0)
        bit = bool(self.rng.random() < p1)
        ax = self.axis[qid]
        idx = [slice(None)] * self.state.ndim
        idx[ax] = 0 if bit else 1
        self.state[tuple(idx)] = 0
        norm = np.sqrt(p1 if bit else 1.0 - p1)
        if norm > 0:
            self.state /= norm
        return bit

    def reset(self, qid: int) -> None:
        if self.measure(qid):
            self.apply_matrix(gate_matrix("x"), [qid])

    def amplitudes(self, order) -> np.ndarray:
        """State vector with ``order[0]`` as the most significant bit."""
        axes = [self.axis[q] for q in order]
        return np.transpose(self.state, axes).reshape(-1)


def make_backend(kind: str, rng: np.random.Generator, qubit_cap: int = DEFAULT_QUBIT_CAP):
    if kind == "estimator":
        return EstimatorBackend(rng)
    if kind == "statevector":
        return StatevectorBackend(rng, qubit_cap)
    raise ValueError(f"unknown backend '{kind}'")
