"""Syntax tree for the extended OpenQASM 3 grammar.

Every node carries a ``loc``; locations are excluded from equality so two
parses of differently formatted but equivalent source compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Union

from .diagnostics import SourceLocation


def _loc() -> SourceLocation:
    return field(default_factory=SourceLocation, compare=False, repr=False)


@dataclass
class Node:
    @property
    def variant(self) -> str:
        return type(self).__name__

    def children(self) -> Iterator["Node"]:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Node):
                yield value
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, Node):
                        yield item

    def walk(self) -> Iterator["Node"]:
        yield self
        for child in self.children():
            yield from child.walk()


# -- expressions ------------------------------------------------------------


@dataclass
class IntLit(Node):
    value: int
    loc: SourceLocation = _loc()


@dataclass
class FloatLit(Node):
    value: float
    loc: SourceLocation = _loc()


@dataclass
class BoolLit(Node):
    value: bool
    loc: SourceLocation = _loc()


@dataclass
class StrLit(Node):
    value: str
    loc: SourceLocation = _loc()


@dataclass
class Ident(Node):
    name: str
    loc: SourceLocation = _loc()


@dataclass
class RangeExpr(Node):
    """``start:stop`` or ``start:step:stop``; any part may be omitted."""

    start: "Expr | None"
    step: "Expr | None"
    stop: "Expr | None"
    loc: SourceLocation = _loc()


@dataclass
class IndexExpr(Node):
    base: "Expr"
    index: "Expr | RangeExpr"
    loc: SourceLocation = _loc()


@dataclass
class Binary(Node):
    op: str
    lhs: "Expr"
    rhs: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class Unary(Node):
    op: str
    operand: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class CallExpr(Node):
    """Function call; ``qubits`` is non-empty for subroutine calls like ``f(x) q``."""

    name: str
    args: list["Expr"]
    qubits: list["Expr"] = field(default_factory=list)
    loc: SourceLocation = _loc()


@dataclass
class MeasureExpr(Node):
    qubit: "Expr"
    loc: SourceLocation = _loc()


Expr = Union[IntLit, FloatLit, BoolLit, StrLit, Ident, IndexExpr, Binary, Unary, CallExpr, MeasureExpr]


# -- types ------------------------------------------------------------------


@dataclass
class TypeSpec(Node):
    """Classical scalar type after typedef desugaring (``int`` -> int[32])."""

    kind: str  # int | uint | float | bool | bit
    width: "Expr | None" = None
    loc: SourceLocation = _loc()


# -- statements -------------------------------------------------------------


@dataclass
class Include(Node):
    path: str
    loc: SourceLocation = _loc()


@dataclass
class ConstDecl(Node):
    name: str
    type: TypeSpec | None
    value: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class QubitDecl(Node):
    name: str
    size: "Expr | None"
    loc: SourceLocation = _loc()


@dataclass
class BitDecl(Node):
    name: str
    size: "Expr | None"
    init: "Expr | None" = None
    loc: SourceLocation = _loc()


@dataclass
class ClassicalDecl(Node):
    type: TypeSpec
    name: str
    init: "Expr | None" = None
    loc: SourceLocation = _loc()


@dataclass
class AliasDecl(Node):
    name: str
    value: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class Param(Node):
    name: str
    type: TypeSpec
    loc: SourceLocation = _loc()


@dataclass
class QubitParam(Node):
    name: str
    size: "Expr | None"
    loc: SourceLocation = _loc()


@dataclass
class SubroutineDef(Node):
    name: str
    params: list[Param]
    qubit_params: list[QubitParam]
    return_type: TypeSpec | None
    body: list["Stmt"]
    loc: SourceLocation = _loc()


@dataclass
class ExternDecl(Node):
    name: str
    param_types: list[TypeSpec]
    return_type: TypeSpec | None
    loc: SourceLocation = _loc()


@dataclass
class Modifier(Node):
    kind: str  # ctrl | negctrl | inv | pow
    arg: "Expr | None" = None
    loc: SourceLocation = _loc()


@dataclass
class GateCall(Node):
    name: str
    params: list["Expr"]
    qubits: list["Expr"]
    modifiers: list[Modifier] = field(default_factory=list)
    loc: SourceLocation = _loc()


@dataclass
class Measure(Node):
    qubit: "Expr"
    target: "Expr | None" = None
    loc: SourceLocation = _loc()


@dataclass
class Reset(Node):
    qubit: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class Assignment(Node):
    target: "Expr"
    value: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class CompoundAssignment(Node):
    target: "Expr"
    op: str  # the arithmetic operator, e.g. "+" for "+="
    value: "Expr"
    loc: SourceLocation = _loc()


@dataclass
class If(Node):
    cond: "Expr"
    then_body: list["Stmt"]
    else_body: list["Stmt"] | None = None
    loc: SourceLocation = _loc()


@dataclass
class ForRange(Node):
    var: str
    start: "Expr"
    step: "Expr | None"
    stop: "Expr"
    body: list["Stmt"]
    loc: SourceLocation = _loc()


@dataclass
class ForCStyle(Node):
    init: "Stmt | None"
    cond: "Expr | None"
    update: "Stmt | None"
    body: list["Stmt"]
    loc: SourceLocation = _loc()


@dataclass
class While(Node):
    cond: "Expr"
    body: list["Stmt"]
    loc: SourceLocation = _loc()


@dataclass
class ComputeAction(Node):
    compute: list["Stmt"]
    action: list["Stmt"]
    loc: SourceLocation = _loc()


@dataclass
class Return(Node):
    value: "Expr | None" = None
    loc: SourceLocation = _loc()


@dataclass
class Print(Node):
    args: list["Expr"]
    loc: SourceLocation = _loc()


@dataclass
class ExpressionStatement(Node):
    expr: "Expr"
    loc: SourceLocation = _loc()


Stmt = Union[
    Include, ConstDecl, QubitDecl, BitDecl, ClassicalDecl, AliasDecl, SubroutineDef,
    ExternDecl, GateCall, Measure, Reset, Assignment, CompoundAssignment, If, ForRange,
    ForCStyle, While, ComputeAction, Return, Print, ExpressionStatement,
]


@dataclass
class Program(Node):
    statements: list["Stmt"]
    version: str | None = None
    loc: SourceLocation = _loc()


def dump(node: Node, indent: int = 0) -> str:
    """Indented, location-annotated rendering used by ``--emit=ast``."""
    pad = "  " * indent
    scalars = []
    nested: list[tuple[str, object]] = []
    for f in fields(node):
        if f.name == "loc":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node) or (isinstance(value, list) and value and isinstance(value[0], Node)):
            nested.append((f.name, value))
        elif isinstance(value, list) and not value:
            continue
        elif value is not None:
            scalars.append(f"{f.name}={value!r}")
    loc = getattr(node, "loc", None)
    head = f"{pad}{node.variant}"
    if scalars:
        head += " " + " ".join(scalars)
    if loc is not None:
        head += f" @{loc.line}:{loc.column}"
    lines = [head]
    for name, value in nested:
        lines.append(f"{pad}  .{name}")
        items = value if isinstance(value, list) else [value]
        for item in items:
            lines.append(dump(item, indent + 2))
    return "\n".join(lines)
