"""Helpers shared by the rewrite passes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..ir import types as T
from ..ir.core import Block, FunctionDef, IrModule, Operation, Value

MODIFIER_REGIONS = frozenset({"q.ctrl_region", "q.adj_region", "q.pow_region"})
LOOPS = frozenset({"affine.for", "scf.while"})

DEFAULT_PEEPHOLE_REPEAT = 8
DEFAULT_UNROLL_THRESHOLD = 1 << 20


@dataclass
class PassConfig:
    enabled: set[str] | None = None  # None: every pass
    peephole_repeat: int = DEFAULT_PEEPHOLE_REPEAT
    unroll_threshold: int = DEFAULT_UNROLL_THRESHOLD
    stats: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.peephole_repeat < 1:
            raise ValueError("peephole_repeat must be at least 1")

    def is_enabled(self, name: str) -> bool:
        return self.enabled is None or name in self.enabled


def blocks_of(fn: FunctionDef, skip_modifiers: bool = False) -> Iterator[Block]:
    """Every block of ``fn``, outer before inner.  With ``skip_modifiers``
    the bodies of ctrl/adj/pow regions (and everything inside them) are
    left out."""
    if fn.is_extern:
        return
    stack = [fn.entry]
    while stack:
        block = stack.pop(0)
        yield block
        for op in block.ops:
            if skip_modifiers and op.name in MODIFIER_REGIONS:
                continue
            for region in op.regions:
                stack.extend(region.blocks)


def single_user(v: Value) -> Operation | None:
    return v.uses[0] if len(v.uses) == 1 else None


def const_value(v: Value):
    """Python value of ``v`` if it is defined by ``arith.constant``, else None."""
    op = v.defining_op
    if op is not None and op.name == "arith.constant":
        return op.attrs["value"]
    return None


def is_scalar_gate(op: Operation) -> bool:
    """An unflagged gate on individual qubits with only static parameters."""
    if not op.is_gate() or op.segment is not None:
        return False
    if any(p is None for p in op.attrs.get("params", [])):
        return False
    return all(v.type == T.QUBIT for v in op.operands)


def next_on_lines(op: Operation) -> Operation | None:
    """The op that follows ``op`` on every one of its qubit lines, when the
    same op consumes each result in the same operand position."""
    nxt = None
    for i, r in enumerate(op.results):
        u = single_user(r)
        if u is None or (nxt is not None and u is not nxt):
            return None
        nxt = u
        if i >= len(u.operands) or u.operands[i] is not r:
            return None
    if nxt is None or len(nxt.results) != len(op.results):
        return None
    return nxt


def ctrl_reachable(module: IrModule) -> set[str]:
    """Functions that may run inside a ctrl region, where a global phase
    becomes a relative one."""
    direct: set[str] = set()
    calls: dict[str, set[str]] = {}
    for fn in module.functions.values():
        callees = calls.setdefault(fn.name, set())
        for op in fn.walk():
            if op.name == "func.call":
                callees.add(op.attrs["callee"])
                if any(a.name == "q.ctrl_region" for a in op.ancestors()):
                    direct.add(op.attrs["callee"])
    out: set[str] = set()
    work = list(direct)
    while work:
        name = work.pop()
        if name in out:
            continue
        out.add(name)
        work.extend(calls.get(name, ()))
    return out


def insert_gate(anchor: Operation, gate: str, qubits: list[Value], params: list[float]) -> Operation:
    op = Operation(f"qvs.{gate}", qubits, [T.QUBIT] * len(qubits), {"params": list(params)})
    anchor.parent.insert_before(anchor, op)
    return op


def erase_chain_pair(a: Operation, b: Operation, replacement: list[Value]) -> None:
    """Reroute the users of ``b``'s results to ``replacement`` and delete
    ``b`` then ``a`` (``a``'s results feed only ``b``)."""
    for r, v in zip(b.results, replacement):
        r.replace_all_uses_with(v)
    b.erase()
    a.erase()
