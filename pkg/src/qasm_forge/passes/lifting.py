"""Qubit extract lifting.

A second static extract of a slot already extracted earlier in the same
block is replaced by the open end of the first chain, provided nothing in
between could touch the register.  This re-joins chains split by inlining
and unrolling, which is what lets the gate rewrites see across them.
"""
from __future__ import annotations

from ..ir.core import Block, IrModule, Operation, Value
from .common import PassConfig, blocks_of

_ARRAY_VIEWS = frozenset({"q.slice", "q.concat"})


def _family(root: Value) -> set[Value]:
    """``root`` plus every slice/concat derived from it, transitively."""
    out = {root}
    work = [root]
    while work:
        v = work.pop()
        for u in v.uses:
            if u.name in _ARRAY_VIEWS:
                for r in u.results:
                    if r not in out:
                        out.add(r)
                        work.append(r)
    return out


def chain_end(v: Value) -> Value:
    """Follow a qubit value forward through its consumers to the last one."""
    while v.uses:
        if len(v.uses) != 1:
            return v
        user = v.uses[0]
        try:
            pos = user.operands.index(v)
        except ValueError:
            return v
        if user.name == "qvs.mz":
            v = user.results[1]
        elif user.name == "q.ctrl_region" or user.name == "qvs.reset":
            v = user.results[0]
        elif user.name.startswith("qvs.") and pos < len(user.results):
            v = user.results[pos]
        else:
            return v
    return v


def _touches(op: Operation, family: set[Value]) -> bool:
    return any(v in family for inner in op.walk() for v in inner.operands)


def _lift_block(block: Block) -> bool:
    changed = False
    open_chains: dict[tuple[int, int], Operation] = {}
    for op in list(block.ops):
        if op.parent is not block:
            continue
        if op.name == "q.extract" and len(op.operands) == 1:
            arr = op.operands[0]
            if arr.defining_op is not None and arr.defining_op.name in _ARRAY_VIEWS:
                continue
            key = (arr.uid, op.attrs["index"])
            first = open_chains.get(key)
            if first is not None and first.parent is block:
                end = chain_end(first.result)
                if _can_join(block, first, op, end, arr):
                    op.result.replace_all_uses_with(end)
                    op.erase()
                    changed = True
                    continue
            open_chains[key] = op
    return changed


def _can_join(block: Block, first: Operation, second: Operation, end: Value, arr: Value) -> bool:
    if end.uses:
        return False
    end_op = end.defining_op
    if end_op is not None and end_op.parent is not block:
        return False
    ops = block.ops
    i0 = ops.index(first)
    i1 = ops.index(second)
    if end_op is not None and ops.index(end_op) > i1:
        return False
    family = _family(arr)
    index = first.attrs["index"]
    for op in ops[i0 + 1:i1]:
        if op.name == "q.extract":
            if len(op.operands) == 1 and op.operands[0] is arr and op.attrs["index"] != index:
                continue
            if op.operands[0] in family:
                return False
            continue
        if _touches(op, family):
            return False
    return True


def lift_qubit_extracts(module: IrModule, config: PassConfig | None = None) -> bool:
    changed = False
    for fn in module.functions.values():
        for block in list(blocks_of(fn, skip_modifiers=True)):
            if _lift_block(block):
                changed = True
    return changed
