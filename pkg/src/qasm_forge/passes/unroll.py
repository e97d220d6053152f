"""Full unrolling of small counted loops.

Only loops with literal bounds, no enclosing loop and a straight-line body
(no nested loop, if or while) are unrolled, so a time-step loop wrapping
per-qubit loops keeps its structure and the IR stays the same size
whatever the qubit count.
"""
from __future__ import annotations

from ..ir import types as T
from ..ir.core import IrModule, Operation, clone_op
from .common import LOOPS, PassConfig

_BLOCKING = LOOPS | {"scf.if"}


def trip_range(op: Operation) -> range | None:
    a = op.attrs
    if op.operands or not all(isinstance(a.get(k), int) for k in ("lb", "ub", "step")) or a["step"] == 0:
        return None
    return range(a["lb"], a["ub"], a["step"])


def _eligible(op: Operation) -> bool:
    if op.name != "affine.for" or trip_range(op) is None:
        return False
    if any(anc.name in LOOPS for anc in op.ancestors()):
        return False
    body = op.regions[0].blocks[0]
    for inner in body.ops:
        for nested in inner.walk():
            if nested.name in _BLOCKING:
                return False
    return True


def unroll_loop(loop: Operation) -> None:
    body = loop.regions[0].blocks[0]
    block = loop.parent
    for v in trip_range(loop):
        c = Operation("arith.constant", [], [T.INDEX], {"value": v})
        block.insert_before(loop, c)
        mapping = {body.args[0]: c.result}
        for op in body.ops:
            block.insert_before(loop, clone_op(op, mapping))
    loop.erase()


def unroll_affine_loops(module: IrModule, config: PassConfig | None = None) -> bool:
    threshold = (config or PassConfig()).unroll_threshold
    changed = False
    for fn in module.functions.values():
        if fn.is_extern:
            continue
        budget = threshold
        for op in [op for op in fn.walk() if _eligible(op)]:
            n = len(trip_range(op))
            if n > budget:
                continue
            budget -= n
            unroll_loop(op)
            changed = True
    return changed
