"""Semantic types of IR values, kept as canonical strings.

A type string prints and parses as itself, so the textual IR needs no
separate type grammar:

    !qubit            single qubit value
    !qarray<N>        qubit array handle with static size N
    !qarray<?>        qubit array of unknown size
    i1 i8 i16 i32 i64 integers (i1 doubles as bool / bit)
    f32 f64           floats
    index             loop induction values
    !cell<T>          mutable scalar memory cell holding T
    !cell<T,N>        mutable array of N elements of T
    !result           measurement result (lowered form only)
"""
from __future__ import annotations

import re

QUBIT = "!qubit"
BOOL = "i1"
I64 = "i64"
F64 = "f64"
INDEX = "index"
RESULT = "!result"

INT_WIDTHS = (1, 8, 16, 32, 64)
FLOAT_WIDTHS = (32, 64)

_QARRAY = re.compile(r"!qarray<(\d+|\?)>$")
_CELL = re.compile(r"!cell<([^,>]+)(?:,(\d+))?>$")


def qarray(size: int | None) -> str:
    return f"!qarray<{'?' if size is None else int(size)}>"


def cell(elem: str, length: int | None = None) -> str:
    return f"!cell<{elem}>" if length is None else f"!cell<{elem},{int(length)}>"


def int_type(width: int) -> str:
    if width not in INT_WIDTHS:
        raise ValueError(f"unsupported integer width {width}")
    return f"i{width}"


def float_type(width: int) -> str:
    if width not in FLOAT_WIDTHS:
        raise ValueError(f"unsupported float width {width}")
    return f"f{width}"


def is_qubit(t: str) -> bool:
    return t == QUBIT


def is_qarray(t: str) -> bool:
    return t.startswith("!qarray<")


def is_quantum(t: str) -> bool:
    return t == QUBIT or is_qarray(t)


def qarray_size(t: str) -> int | None:
    m = _QARRAY.match(t)
    if not m:
        raise ValueError(f"not a qubit array type: {t}")
    return None if m.group(1) == "?" else int(m.group(1))


def is_int(t: str) -> bool:
    return len(t) > 1 and t[0] == "i" and t[1:].isdigit()


def is_float(t: str) -> bool:
    return t in ("f32", "f64")


def is_index(t: str) -> bool:
    return t == INDEX


def is_integral(t: str) -> bool:
    return is_int(t) or is_index(t)


def is_numeric(t: str) -> bool:
    return is_integral(t) or is_float(t)


def width(t: str) -> int:
    if is_index(t):
        return 64
    if is_int(t) or is_float(t):
        return int(t[1:])
    raise ValueError(f"type {t} has no width")


def is_cell(t: str) -> bool:
    return t.startswith("!cell<")


def cell_elem(t: str) -> str:
    m = _CELL.match(t)
    if not m:
        raise ValueError(f"not a cell type: {t}")
    return m.group(1)


def cell_length(t: str) -> int | None:
    m = _CELL.match(t)
    if not m:
        raise ValueError(f"not a cell type: {t}")
    return int(m.group(2)) if m.group(2) else None


def is_valid(t: str) -> bool:
    if t in (QUBIT, INDEX, RESULT) or is_int(t) and width(t) in INT_WIDTHS or t in ("f32", "f64"):
        return True
    if _QARRAY.match(t):
        return True
    m = _CELL.match(t)
    return bool(m) and is_valid(m.group(1)) and not is_cell(m.group(1))


def promote(a: str, b: str) -> str:
    """Result type of a binary arithmetic op on ``a`` and ``b``."""
    if is_float(a) or is_float(b):
        wa = width(a) if is_float(a) else 0
        wb = width(b) if is_float(b) else 0
        return float_type(max(wa, wb, 32) if (wa or wb) else 64)
    if a == BOOL and b == BOOL:
        return I64
    wa = 64 if is_index(a) else width(a)
    wb = 64 if is_index(b) else width(b)
    return int_type(max(wa, wb, 8) if max(wa, wb) > 1 else 64)
