"""Evaluation rules for classical ops, shared by folding and execution.

Integers wrap to their declared width (two's complement) with C-style
truncating division; ``index`` is unbounded.  ``f32`` is computed in
double precision.
"""
from __future__ import annotations

import math
from typing import Any

from . import types as T
from ..symtab import c_div, c_rem


class ArithError(ArithmeticError):
    """An op whose operands have no defined result (e.g. division by zero)."""


def wrap(value: int, type_: str) -> Any:
    if type_ == T.BOOL:
        return bool(value & 1) if isinstance(value, int) and not isinstance(value, bool) else bool(value)
    if T.is_index(type_):
        return int(value)
    w = T.width(type_)
    value = int(value) & ((1 << w) - 1)
    return value - (1 << w) if value >= 1 << (w - 1) else value


def convert(value: Any, to: str) -> Any:
    """Numeric conversion performed by ``arith.cast``."""
    if T.is_float(to):
        return float(value)
    if to == T.BOOL:
        return bool(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise ArithError(f"cannot convert {value} to {to}")
        value = math.trunc(value)
    return wrap(int(value), to)


_CMP = {
    "eq": lambda a, b: a == b, "ne": lambda a, b: a != b,
    "slt": lambda a, b: a < b, "sle": lambda a, b: a <= b,
    "sgt": lambda a, b: a > b, "sge": lambda a, b: a >= b,
    "oeq": lambda a, b: a == b, "one": lambda a, b: a != b and not (math.isnan(a) or math.isnan(b)),
    "olt": lambda a, b: a < b, "ole": lambda a, b: a <= b,
    "ogt": lambda a, b: a > b, "oge": lambda a, b: a >= b,
}

MATH = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "arcsin": math.asin, "arccos": math.acos, "arctan": math.atan,
    "asin": math.asin, "acos": math.acos, "atan": math.atan,
    "exp": math.exp, "ln": math.log, "log": math.log, "sqrt": math.sqrt,
    "floor": lambda x: float(math.floor(x)), "ceil": lambda x: float(math.ceil(x)), "abs": abs,
}


def _int_binop(kind: str, a: int, b: int, ty: str) -> Any:
    if ty == T.BOOL:
        a, b = int(a), int(b)
    if kind == "addi":
        r = a + b
    elif kind == "subi":
        r = a - b
    elif kind == "muli":
        r = a * b
    elif kind in ("divsi", "remsi"):
        if b == 0:
            raise ArithError("integer division by zero")
        r = c_div(a, b) if kind == "divsi" else c_rem(a, b)
    elif kind == "andi":
        r = a & b
    elif kind == "ori":
        r = a | b
    elif kind == "xori":
        r = a ^ b
    elif kind in ("shli", "shrsi"):
        limit = 64 if T.is_index(ty) else T.width(ty)
        if not 0 <= b < limit:
            raise ArithError("shift amount out of range")
        r = a << b if kind == "shli" else a >> b
    elif kind == "maxsi":
        r = max(a, b)
    elif kind == "minsi":
        r = min(a, b)
    elif kind == "powi":
        if b < 0:
            raise ArithError("negative integer exponent")
        if b > 4096 and abs(a) > 1:
            raise ArithError("integer power too large")
        r = a ** b
    else:
        raise ArithError(f"unknown integer op {kind}")
    return wrap(r, ty)


def _float_binop(kind: str, a: float, b: float) -> float:
    try:
        if kind == "addf":
            return a + b
        if kind == "subf":
            return a - b
        if kind == "mulf":
            return a * b
        if kind == "divf":
            if b == 0.0:
                raise ArithError("float division by zero")
            return a / b
        if kind == "remf":
            if b == 0.0:
                raise ArithError("float remainder by zero")
            return math.fmod(a, b)
        if kind == "powf":
            r = a ** b
            if isinstance(r, complex):
                raise ArithError("complex result of powf")
            return float(r)
    except OverflowError as exc:
        raise ArithError(str(exc)) from None
    raise ArithError(f"unknown float op {kind}")


def evaluate(name: str, attrs: dict, args: list[Any], arg_types: list[str], result_type: str | None) -> Any:
    """Result of the pure classical op ``name`` applied to ``args``."""
    if name == "arith.constant":
        return attrs["value"]
    if name.startswith("math."):
        try:
            return float(MATH[name[5:]](float(args[0])))
        except (ValueError, OverflowError) as exc:
            raise ArithError(f"{name[5:]}: {exc}") from None
    kind = name[6:]
    if kind == "cast":
        return convert(args[0], result_type)
    if kind == "negf":
        return -float(args[0])
    if kind in ("cmpi", "cmpf"):
        return bool(_CMP[attrs["predicate"]](args[0], args[1]))
    if kind == "select":
        return args[1] if args[0] else args[2]
    if T.is_float(arg_types[0]):
        return _float_binop(kind, float(args[0]), float(args[1]))
    return _int_binop(kind, args[0], args[1], arg_types[0])


PURE_PREFIXES = ("arith.", "math.")
