"""Dead code elimination.

Removes pure ops whose results are unused, cells that are only written,
registers that are only allocated and released, structured ops with
empty bodies, and subroutines nothing calls.
"""
from __future__ import annotations

from ..ir.core import IrModule, Operation
from .common import PassConfig

PURE = frozenset({"global.load", "q.extract", "q.slice", "q.concat", "cell.load"})


def _is_pure(op: Operation) -> bool:
    return op.name.startswith(("arith.", "math.")) or op.name in PURE


def _empty(op: Operation) -> bool:
    return all(not b.ops for r in op.regions for b in r.blocks)


def _try_remove(op: Operation) -> bool:
    name = op.name
    if name == "cell.alloca" and all(u.name == "cell.store" and u.operands[1] is op.result for u in op.result.uses):
        for u in list(op.result.uses):
            u.erase()
        op.erase()
        return True
    if name == "q.qalloc" and all(u.name == "q.dealloc" for u in op.result.uses):
        for u in list(op.result.uses):
            u.erase()
        op.erase()
        return True
    if _is_pure(op) and not any(r.uses for r in op.results):
        op.erase()
        return True
    if name in ("affine.for", "scf.if", "q.adj_region", "q.pow_region") and _empty(op):
        op.erase()
        return True
    if name == "q.ctrl_region" and _empty(op):
        op.result.replace_all_uses_with(op.operands[0])
        op.erase()
        return True
    return False


def _sweep_block(block) -> bool:
    changed = False
    for op in reversed(list(block.ops)):
        if op.parent is not block:
            continue
        for region in op.regions:
            for b in region.blocks:
                if _sweep_block(b):
                    changed = True
        if _try_remove(op):
            changed = True
    return changed


def eliminate_dead_code(module: IrModule, config: PassConfig | None = None) -> bool:
    changed = False
    progress = True
    while progress:
        progress = False
        for fn in module.functions.values():
            if not fn.is_extern and _sweep_block(fn.entry):
                progress = changed = True
        called = {op.attrs["callee"] for op in module.walk() if op.name == "func.call"}
        for name in [n for n, f in module.functions.items()
                     if n != "main" and not f.is_extern and n not in called]:
            del module.functions[name]
            progress = changed = True
    return changed

