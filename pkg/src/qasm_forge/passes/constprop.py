"""Constant propagation and folding.

Besides folding pure arithmetic this pass moves values that became literal
into op attributes (loop bounds, gate angles, extract indices, powers),
forwards single-store cells, resolves extracts through slices and
concatenations, and flattens ifs whose condition is known.
"""
from __future__ import annotations

from ..ir import types as T
from ..ir.core import Block, FunctionDef, IrModule, Operation, Value
from ..ir.semantics import ArithError, evaluate
from .common import PassConfig, const_value

_FOLDABLE_PREFIXES = ("arith.", "math.")


def _make_const(anchor: Operation, value, type_: str) -> Value:
    if T.is_float(type_):
        value = float(value)
    elif type_ == T.BOOL:
        value = bool(value)
    else:
        value = int(value)
    c = Operation("arith.constant", [], [type_], {"value": value})
    anchor.parent.insert_before(anchor, c)
    return c.result


class _ConstProp:
    def __init__(self, module: IrModule):
        self.module = module
        self.changed = False

    def run(self) -> bool:
        for fn in self.module.functions.values():
            if fn.is_extern:
                continue
            progress = True
            while progress:
                progress = False
                for op in list(fn.walk()):
                    if op.parent is None or not _attached(op):
                        continue
                    if self.visit(op):
                        progress = True
                        self.changed = True
                if self.forward_cells(fn):
                    progress = True
                    self.changed = True
        return self.changed

    def visit(self, op: Operation) -> bool:
        name = op.name
        if name == "global.load":
            g = self.module.globals[op.attrs["name"]]
            op.result.replace_all_uses_with(_make_const(op, g.value, g.type))
            op.erase()
            return True
        if name.startswith(_FOLDABLE_PREFIXES) and name != "arith.constant":
            args = [const_value(v) for v in op.operands]
            if any(a is None for a in args):
                return False
            try:
                value = evaluate(name, op.attrs, args, [v.type for v in op.operands], op.results[0].type)
            except ArithError:
                return False
            op.result.replace_all_uses_with(_make_const(op, value, op.result.type))
            op.erase()
            return True
        if name == "affine.for":
            return self.loop_bounds(op)
        if name.startswith("qvs.") and op.is_gate():
            return self.gate_params(op)
        if name == "q.extract":
            return self.extract(op)
        if name == "q.pow_region" and op.operands:
            k = const_value(op.operands[0])
            if k is None:
                return False
            op.drop_operands()
            op.attrs["power"] = int(k)
            return True
        if name == "scf.if":
            c = const_value(op.operands[0])
            if c is None:
                return False
            taken = op.regions[0 if c else 1].blocks[0]
            block = op.parent
            for inner in list(taken.ops):
                taken.ops.remove(inner)
                block.insert_before(op, inner)
            op.erase()
            return True
        return False

    def loop_bounds(self, op: Operation) -> bool:
        if not op.operands:
            a = op.attrs
            if all(isinstance(a[k], int) for k in ("lb", "ub", "step")) and len(range(a["lb"], a["ub"], a["step"])) == 0:
                op.erase()
                return True
            return False
        keys = [k for k in ("lb", "ub", "step") if op.attrs.get(k) is None]
        new_operands = []
        moved = False
        for key, v in zip(keys, op.operands):
            c = const_value(v)
            if c is None or (key == "step" and int(c) == 0):
                new_operands.append(v)
            else:
                op.attrs[key] = int(c)
                moved = True
        if moved:
            op.set_operands(new_operands)
        return moved

    def gate_params(self, op: Operation) -> bool:
        params = op.attrs.get("params", [])
        ndyn = sum(1 for p in params if p is None)
        if not ndyn:
            return False
        nq = len(op.operands) - ndyn
        dyn = op.operands[nq:]
        new_params = []
        kept = []
        it = iter(dyn)
        moved = False
        for p in params:
            if p is not None:
                new_params.append(p)
                continue
            v = next(it)
            c = const_value(v)
            if c is None:
                new_params.append(None)
                kept.append(v)
            else:
                new_params.append(float(c))
                moved = True
        if moved:
            op.set_operands(op.operands[:nq] + kept)
            op.attrs["params"] = new_params
        return moved

    def extract(self, op: Operation) -> bool:
        arr = op.operands[0]
        if len(op.operands) == 2:
            k = const_value(op.operands[1])
            size = T.qarray_size(arr.type)
            if k is None or not (0 <= int(k) and (size is None or int(k) < size)):
                return False
            op.set_operands([arr])
            op.attrs["index"] = int(k)
            return True
        src = arr.defining_op
        k = op.attrs["index"]
        if src is not None and src.name == "q.slice":
            a = src.attrs
            op.set_operand(0, src.operands[0])
            op.attrs["index"] = a["start"] + k * a["step"]
            return True
        if src is not None and src.name == "q.concat":
            left = T.qarray_size(src.operands[0].type)
            if left is None:
                return False
            if k < left:
                op.set_operand(0, src.operands[0])
            else:
                op.set_operand(0, src.operands[1])
                op.attrs["index"] = k - left
            return True
        return False

    def forward_cells(self, fn: FunctionDef) -> bool:
        """Replace loads of a scalar cell written exactly once, by a store in
        the cell's own block that precedes every load."""
        changed = False
        for op in list(fn.walk()):
            if op.name != "cell.alloca" or T.cell_length(op.result.type) is not None or not _attached(op):
                continue
            cell = op.result
            stores = [u for u in cell.uses if u.name == "cell.store"]
            loads = [u for u in cell.uses if u.name == "cell.load"]
            if len(stores) != 1 or not loads or len(stores) + len(loads) != len(cell.uses):
                continue
            store = stores[0]
            if store.parent is not op.parent:
                continue
            block = op.parent
            pos = block.ops.index(store)
            value = store.operands[0]
            ok = True
            for ld in loads:
                top = _top_level_in(ld, block)
                if top is None or block.ops.index(top) <= pos:
                    ok = False
                    break
            if not ok:
                continue
            for ld in loads:
                ld.result.replace_all_uses_with(value)
                ld.erase()
            changed = True
        return changed


def _attached(op: Operation) -> bool:
    node = op
    while node is not None:
        if node.parent is None:
            return False
        region = node.parent.parent
        if region is None:
            return True
        node = region.parent
        if node is None:
            return True
    return True


def _top_level_in(op: Operation, block: Block) -> Operation | None:
    node = op
    while node is not None and node.parent is not block:
        node = node.parent_op
    return node


def propagate_constants(module: IrModule, config: PassConfig | None = None) -> bool:
    return _ConstProp(module).run()
