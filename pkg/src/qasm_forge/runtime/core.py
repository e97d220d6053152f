"""The runtime behind the lowered call interface.

Qubits are small integers, arrays are tuples of them.  Gates stream to
the backend as they are called, except while a ctrl/adj/pow region is
open: then they are collected and rewritten when the region ends.

Compute/uncompute bookkeeping: flagged calls and flagged regions push a
segment context.  A gate records ``depth = contexts`` when flagged
and one less otherwise; a ctrl region remembers ``base = contexts``
when it starts.  Records with ``depth >= base`` were produced by a
compute or uncompute segment opened inside the region and are left
uncontrolled.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..ir import gates as G
from .backends import DEFAULT_QUBIT_CAP, make_backend
from .synthesis import CCX_DEFAULT_COST, GateRecord, QuantumRuntimeError, adjoint, controlled, power

REGION_KINDS = ("ctrl", "adj", "pow")


@dataclass
class ExecutionConfig:
    backend: str = "estimator"
    shots: int = 1
    seed: int = 0
    qubit_cap: int = DEFAULT_QUBIT_CAP
    # None: ccx produced by ctrl synthesis is decomposed (cost 5 each);
    # an int k keeps it native and counts it as k controlled ops
    ccx_cost: int | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be at least 1")


@dataclass
class Stats:
    per_gate: Counter = field(default_factory=Counter)
    shots: int = 0
    seed: int = 0
    ccx_cost: int | None = None

    @property
    def total_gates(self) -> int:
        return sum(n for g, n in self.per_gate.items() if g not in ("mz", "reset"))

    @property
    def controlled_ops(self) -> int:
        ccx = self.per_gate.get("ccx", 0)
        cost = CCX_DEFAULT_COST if self.ccx_cost is None else self.ccx_cost
        return self.per_gate.get("cnot", 0) + self.per_gate.get("crz", 0) + cost * ccx

    def as_dict(self) -> dict:
        return {
            "controlled_ops_cx_crz": self.controlled_ops,
            "per_gate": dict(sorted(self.per_gate.items())),
            "seed": self.seed,
            "shots": self.shots,
            "total_gates": self.total_gates,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


@dataclass
class _Frame:
    kind: str
    base: int
    flagged: bool
    records: list[GateRecord] = field(default_factory=list)


class Runtime:
    def __init__(self, config: ExecutionConfig | None = None, out=None):
        self.config = config or ExecutionConfig()
        self.rng = np.random.default_rng(self.config.seed)
        self.stats = Stats(seed=self.config.seed, ccx_cost=self.config.ccx_cost)
        self.out = out
        self.output: list[str] = []
        self.new_shot()

    def new_shot(self) -> None:
        """Fresh qubit state for one more run of the program; the random
        stream and the stats carry over."""
        self.backend = make_backend(self.config.backend, self.rng, self.config.qubit_cap)
        self.live: set[int] = set()
        self.next_qid = 0
        self.frames: list[_Frame] = []
        self.contexts = 0
        self.stats.shots += 1

    # -- qubits and arrays --------------------------------------------------

    def qubit_allocate_array(self, n: int) -> tuple[int, ...]:
        if n < 1:
            raise QuantumRuntimeError(f"cannot allocate a register of {n} qubits")
        qs = tuple(range(self.next_qid, self.next_qid + n))
        self.next_qid += n
        for q in qs:
            self.backend.allocate(q)
            self.live.add(q)
        return qs

    def qubit_release_array(self, arr) -> None:
        for q in arr:
            self._check(q)
            self.backend.release(q)
            self.live.discard(q)

    def array_get_element_ptr_1d(self, arr, k: int) -> int:
        if not 0 <= k < len(arr):
            raise QuantumRuntimeError(f"index {k} out of range for a register of {len(arr)} qubits")
        return arr[k]

    def array_slice(self, arr, start: int, step: int, stop: int) -> tuple[int, ...]:
        if step == 0:
            raise QuantumRuntimeError("slice step must be non-zero")
        idx = range(start, stop + (1 if step > 0 else -1), step)
        for k in idx:
            if not 0 <= k < len(arr):
                raise QuantumRuntimeError(f"slice index {k} out of range for a register of {len(arr)} qubits")
        return tuple(arr[k] for k in idx)

    def array_concatenate(self, a, b) -> tuple[int, ...]:
        return tuple(a) + tuple(b)

    def _check(self, q: int) -> None:
        if q not in self.live:
            raise QuantumRuntimeError(f"qubit {q} is not live")

    # -- gates ----------------------------------------------------------------

    def qis(self, gate: str, params, qubits, segment: str | None = None) -> None:
        if gate not in G.GATES:
            raise QuantumRuntimeError(f"unknown gate '{gate}'")
        qubits = tuple(qubits)
        for q in qubits:
            self._check(q)
        if len(set(qubits)) != len(qubits):
            raise QuantumRuntimeError(f"gate '{gate}' applied to repeated qubits {list(qubits)}")
        depth = self.contexts if segment else self.contexts - 1
        rec = GateRecord(gate, qubits, tuple(float(p) for p in params), segment, depth)
        self._emit([rec])

    def _emit(self, records) -> None:
        if self.frames:
            self.frames[-1].records.extend(records)
            return
        for r in records:
            self.backend.apply(r.gate, r.qubits, r.params)
            self.stats.per_gate[r.gate] += 1

    def mz(self, q: int, segment: str | None = None) -> bool:
        self._check(q)
        if self.frames:
            raise QuantumRuntimeError("measurement inside a ctrl/adj/pow region is not supported")
        self.stats.per_gate["mz"] += 1
        return self.backend.measure(q)

    def reset(self, q: int, segment: str | None = None) -> None:
        self._check(q)
        if self.frames:
            raise QuantumRuntimeError("reset inside a ctrl/adj/pow region is not supported")
        self.stats.per_gate["reset"] += 1
        self.backend.reset(q)

    # -- segments and regions -----------------------------------------------------

    def push_segment(self) -> None:
        self.contexts += 1

    def pop_segment(self) -> None:
        if self.contexts == 0:
            raise QuantumRuntimeError("unbalanced compute/uncompute segment")
        self.contexts -= 1

    def start_region(self, kind: str, segment: str | None = None) -> None:
        if kind not in REGION_KINDS:
            raise QuantumRuntimeError(f"unknown region kind '{kind}'")
        if segment:
            self.push_segment()
        self.frames.append(_Frame(kind, self.contexts, bool(segment)))

    def end_region(self, kind: str, operand=None) -> None:
        if not self.frames:
            raise QuantumRuntimeError(f"end of {kind} region without a matching start")
        frame = self.frames.pop()
        if frame.kind != kind:
            raise QuantumRuntimeError(f"end of {kind} region closes an open {frame.kind} region")
        if kind == "adj":
            out = adjoint(frame.records)
        elif kind == "pow":
            if isinstance(operand, float) and not operand.is_integer():
                raise QuantumRuntimeError(f"non-integer power {operand}")
            out = power(frame.records, int(operand))
        else:
            self._check(operand)
            out = controlled(frame.records, operand, frame.base, self.config.ccx_cost)
        if frame.flagged:
            self.pop_segment()
        self._emit(out)

    # -- misc ---------------------------------------------------------------

    def print(self, parts) -> None:
        line = "".join(_fmt(p) for p in parts)
        self.output.append(line)
        if self.out is not None:
            print(line, file=self.out)

    def finalize(self) -> None:
        if self.frames:
            raise QuantumRuntimeError(f"program ended inside an open {self.frames[-1].kind} region")
        if self.contexts:
            raise QuantumRuntimeError("program ended inside a compute/uncompute segment")


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)
