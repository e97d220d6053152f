"""Textual form of the IR.

One op per line in the generic form

    %r0, %r1 = dialect.op(%a, %b) {key = value} : (T_a, T_b) -> (T_r0, T_r1)

followed, for ops with regions, by ``({ ... }, { ... })``.  Value numbers
are reassigned densely per function in definition order, so two modules
are structurally equal exactly when their printed forms are equal.
"""
from __future__ import annotations

import json
import math
from typing import Any

from .core import Block, FunctionDef, IrModule, Operation, Region, Value


def format_attr(value: Any) -> str:
    if value is None:
        return "none"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        text = repr(value)
        return text if any(c in text for c in ".e") else text + ".0"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_attr(v) for v in value) + "]"
    raise TypeError(f"unprintable attribute value {value!r}")


class _Namer:
    def __init__(self) -> None:
        self.names: dict[Value, str] = {}

    def define(self, v: Value) -> str:
        name = f"%{len(self.names)}"
        self.names[v] = name
        return name

    def __getitem__(self, v: Value) -> str:
        try:
            return self.names[v]
        except KeyError:
            return f"%<undef#{v.uid}>"


def print_op(op: Operation, namer: _Namer, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if op.name == "func.return":
        if op.operands:
            vals = ", ".join(namer[v] for v in op.operands)
            types = ", ".join(v.type for v in op.operands)
            out.append(f"{pad}return {vals} : {types}")
        else:
            out.append(f"{pad}return")
        return
    operands = ", ".join(namer[v] for v in op.operands)
    results = ", ".join(namer.define(r) for r in op.results)
    text = pad
    if results:
        text += results + " = "
    text += f"{op.name}({operands})"
    if op.attrs:
        text += " {" + ", ".join(f"{k} = {format_attr(op.attrs[k])}" for k in sorted(op.attrs)) + "}"
    text += " : (" + ", ".join(v.type for v in op.operands) + ") -> (" + ", ".join(r.type for r in op.results) + ")"
    if not op.regions:
        out.append(text)
        return
    out.append(text + " ({")
    for i, region in enumerate(op.regions):
        if i:
            out.append(pad + "}, {")
        _print_region(region, namer, indent + 1, out)
    out.append(pad + "})")


def _print_region(region: Region, namer: _Namer, indent: int, out: list[str]) -> None:
    for bi, block in enumerate(region.blocks):
        if block.args or bi:
            args = ", ".join(f"{namer.define(a)}: {a.type}" for a in block.args)
            out.append("  " * (indent - 1) + f"^bb{bi}({args}):")
        for op in block.ops:
            print_op(op, namer, indent, out)


def print_function(fn: FunctionDef) -> str:
    results = ""
    if fn.result_types:
        results = " -> (" + ", ".join(fn.result_types) + ")"
    if fn.is_extern:
        return f"func private @{fn.name}(" + ", ".join(fn.arg_types) + ")" + results
    namer = _Namer()
    args = ", ".join(f"{namer.define(a)}: {a.type}" for a in fn.args)
    out = [f"func @{fn.name}({args}){results} {{"]
    for block in fn.body.blocks:
        for op in block.ops:
            print_op(op, namer, 1, out)
    out.append("}")
    return "\n".join(out)


def print_ir(module: IrModule) -> str:
    parts = []
    for g in module.globals.values():
        parts.append(f"global @{g.name} : {g.type} = {format_attr(g.value)}")
    if parts:
        parts.append("")
    for fn in module.functions.values():
        parts.append(print_function(fn))
        parts.append("")
    return "\n".join(parts).rstrip("\n") + "\n"


def print_block(block: Block) -> str:
    out: list[str] = []
    namer = _Namer()
    for a in block.args:
        namer.define(a)
    for op in block.ops:
        print_op(op, namer, 0, out)
    return "\n".join(out)
