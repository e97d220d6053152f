"""Subroutine inlining."""
from __future__ import annotations

from ..frontend.diagnostics import CompileError, error
from ..ir.core import IrModule, Operation, clone_op
from .common import LOOPS, MODIFIER_REGIONS, PassConfig


def _call_graph(module: IrModule) -> dict[str, list[str]]:
    graph: dict[str, list[str]] = {}
    for fn in module.functions.values():
        if fn.is_extern:
            continue
        out = graph.setdefault(fn.name, [])
        for op in fn.walk():
            callee = op.attrs.get("callee") if op.name == "func.call" else None
            if callee is not None and not module.functions[callee].is_extern and callee not in out:
                out.append(callee)
    return graph


def callee_first_order(module: IrModule) -> list[str]:
    """Defined functions ordered so that callees precede callers; a cycle
    is a CompileError."""
    graph = _call_graph(module)
    order: list[str] = []
    state: dict[str, int] = {}

    def visit(name: str, path: list[str]) -> None:
        s = state.get(name, 0)
        if s == 2:
            return
        if s == 1:
            cycle = path[path.index(name):] + [name]
            raise CompileError([error("recursive subroutine calls are not supported: " + " -> ".join(cycle))])
        state[name] = 1
        for callee in graph[name]:
            visit(callee, path + [name])
        state[name] = 2
        order.append(name)

    for name in graph:
        visit(name, [])
    return order


def _apply_flag(op: Operation, flag: str) -> None:
    if op.name in LOOPS or op.name == "scf.if":
        for region in op.regions:
            for block in region.blocks:
                for inner in block.ops:
                    _apply_flag(inner, flag)
        return
    if op.name.startswith("qvs.") or op.name == "func.call" or op.name in MODIFIER_REGIONS:
        op.attrs["segment"] = flag


def inline_call(module: IrModule, call: Operation) -> None:
    callee = module.functions[call.attrs["callee"]]
    flag = call.attrs.get("segment")
    mapping = dict(zip(callee.args, call.operands))
    block = call.parent
    returned = []
    for op in callee.entry.ops:
        if op.name == "func.return":
            returned = [mapping.get(v, v) for v in op.operands]
            break
        new = clone_op(op, mapping)
        if flag:
            _apply_flag(new, flag)
        block.insert_before(call, new)
    for r, v in zip(call.results, returned):
        r.replace_all_uses_with(v)
    call.erase()


def inline_calls(module: IrModule, config: PassConfig | None = None) -> bool:
    changed = False
    for name in callee_first_order(module):
        fn = module.functions[name]
        calls = [op for op in fn.walk() if op.name == "func.call"
                 and not module.functions[op.attrs["callee"]].is_extern]
        for call in calls:
            inline_call(module, call)
            changed = True
    return changed
