"""Scoped symbol table, constant folding and qubit use-define tracking.

Qubit tracking is keyed by physical slot ``(root array, absolute index)``,
so an element reached through an alias (``let s = q[1:3]; s[0]``) and the
same element reached through its root (``q[1]``) share one SSA chain.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable

from .frontend import ast
from .frontend.diagnostics import CompileError, InternalCompilerError, SourceLocation, error

if TYPE_CHECKING:
    from .ir.core import Value

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class _NotConst:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NOT_CONST"

    def __bool__(self) -> bool:
        return False


NOT_CONST = _NotConst()


@dataclass
class SymbolInfo:
    name: str
    kind: str  # qreg | cell | ssa | global_const | local_const | func | extern | loopvar
    value: Value | None = None
    declared_type: str | None = None
    is_const: bool = False
    const_value: Any = None
    size: int | None = None  # qreg length
    scalar: bool = False  # qreg declared as a single qubit
    view: list[tuple[Value, int]] | None = None  # qreg element -> physical slot
    loc: SourceLocation = field(default_factory=SourceLocation)
    extra: dict = field(default_factory=dict)


_VISIBLE_ACROSS_FUNCTIONS = frozenset({"global_const", "func", "extern"})


class SymbolTable:
    def __init__(self) -> None:
        self.scopes: list[dict[str, SymbolInfo]] = [{}]
        self._barriers: list[int] = []  # scope depths where a function body starts
        self._current: dict[tuple[int, int], Value] = {}
        self._slot_of: dict[Value, tuple[int, int]] = {}
        self._retired: set[int] = set()
        self._roots: dict[int, Value] = {}

    # -- scopes -----------------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self.scopes)

    def enter_scope(self, function_boundary: bool = False) -> None:
        if function_boundary:
            self._barriers.append(len(self.scopes))
        self.scopes.append({})

    def exit_scope(self) -> None:
        if len(self.scopes) <= 1:
            raise InternalCompilerError([error("exit_scope called at global scope")])
        self.scopes.pop()
        if self._barriers and self._barriers[-1] >= len(self.scopes):
            self._barriers.pop()

    def declare(self, info: SymbolInfo) -> SymbolInfo:
        scope = self.scopes[-1]
        if info.name in scope:
            prev = scope[info.name]
            raise CompileError([error(f"redeclaration of '{info.name}' (previously declared at {prev.loc})", info.loc)])
        scope[info.name] = info
        return info

    def lookup(self, name: str) -> SymbolInfo | None:
        barrier = self._barriers[-1] if self._barriers else 0
        for depth in range(len(self.scopes) - 1, -1, -1):
            info = self.scopes[depth].get(name)
            if info is None:
                continue
            if depth < barrier and info.kind not in _VISIBLE_ACROSS_FUNCTIONS:
                return None
            return info
        return None

    def in_function(self) -> bool:
        return bool(self._barriers)

    # -- constant evaluation ------------------------------------------------

    def eval_const_expr(self, expr: ast.Node) -> Any:
        """Fold ``expr`` to a Python number/bool, or return :data:`NOT_CONST`.

        Integers follow 64-bit C semantics (truncating division, remainder
        with the sign of the dividend); overflow and division by zero raise
        a CompileError.
        """
        return _ConstEvaluator(self.lookup).eval(expr)

    # -- qubit SSA tracking -----------------------------------------------

    def register_root(self, array: Value) -> None:
        self._roots[array.uid] = array

    def current_qubit(self, root: Value, index: int) -> Value | None:
        return self._current.get((root.uid, index))

    def bind_qubit(self, root: Value, index: int, value: Value) -> None:
        """Start tracking ``value`` (typically a fresh extract) for a slot."""
        key = (root.uid, index)
        old = self._current.get(key)
        if old is not None:
            self._slot_of.pop(old, None)
            self._retired.add(old.uid)
        if value.uid in self._retired:
            raise InternalCompilerError([error(f"qubit value #{value.uid} was already consumed")])
        self._current[key] = value
        self._slot_of[value] = key

    def update_qubit_value(self, old: Value, new: Value) -> None:
        key = self._slot_of.pop(old, None)
        if key is None:
            raise InternalCompilerError([error(f"qubit value #{old.uid} is not tracked")])
        self._retired.add(old.uid)
        self._current[key] = new
        self._slot_of[new] = key

    def is_tracked(self, value: Value) -> bool:
        return value in self._slot_of

    def lookup_qubit(self, root: Value, index: int) -> Value | None:
        return self.current_qubit(root, index)

    def invalidate_root(self, root: Value) -> None:
        for key in [k for k in self._current if k[0] == root.uid]:
            v = self._current.pop(key)
            self._slot_of.pop(v, None)
            self._retired.add(v.uid)

    def invalidate_all(self) -> None:
        for v in self._current.values():
            self._retired.add(v.uid)
        self._current.clear()
        self._slot_of.clear()

    def snapshot(self) -> dict:
        return dict(self._current)


# -- constant evaluator -------------------------------------------------------


def _check_int(v: int, loc: SourceLocation) -> int:
    if not INT64_MIN <= v <= INT64_MAX:
        raise CompileError([error("integer overflow in constant expression", loc)])
    return v


def c_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def c_rem(a: int, b: int) -> int:
    return a - b * c_div(a, b)


MATH_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "arcsin": math.asin, "arccos": math.acos, "arctan": math.atan,
    "asin": math.asin, "acos": math.acos, "atan": math.atan,
    "exp": math.exp, "ln": math.log, "log": math.log, "sqrt": math.sqrt,
    "floor": math.floor, "ceil": math.ceil, "abs": abs,
}

CONSTANTS = {"pi": math.pi, "tau": 2 * math.pi, "euler": math.e}


class _ConstEvaluator:
    def __init__(self, lookup: Callable[[str], SymbolInfo | None]):
        self.lookup = lookup

    def eval(self, e: ast.Node) -> Any:
        if isinstance(e, ast.IntLit):
            return _check_int(e.value, e.loc)
        if isinstance(e, ast.FloatLit):
            return float(e.value)
        if isinstance(e, ast.BoolLit):
            return bool(e.value)
        if isinstance(e, ast.Ident):
            info = self.lookup(e.name)
            if info is not None:
                return info.const_value if info.is_const else NOT_CONST
            if e.name in CONSTANTS:
                return CONSTANTS[e.name]
            return NOT_CONST
        if isinstance(e, ast.Unary):
            v = self.eval(e.operand)
            if v is NOT_CONST:
                return NOT_CONST
            if e.op == "-":
                return _check_int(-v, e.loc) if isinstance(v, int) and not isinstance(v, bool) else -v
            if e.op == "!":
                return not v
            if e.op == "~":
                if isinstance(v, float):
                    raise CompileError([error("bitwise '~' on a float constant", e.loc)])
                return ~int(v)
            return NOT_CONST
        if isinstance(e, ast.Binary):
            a = self.eval(e.lhs)
            b = self.eval(e.rhs)
            if a is NOT_CONST or b is NOT_CONST:
                return NOT_CONST
            return self.binary(e.op, a, b, e.loc)
        if isinstance(e, ast.CallExpr) and not e.qubits and e.name in MATH_FUNCTIONS and len(e.args) == 1:
            v = self.eval(e.args[0])
            if v is NOT_CONST:
                return NOT_CONST
            try:
                out = MATH_FUNCTIONS[e.name](float(v))
            except ValueError:
                raise CompileError([error(f"math domain error in constant {e.name}()", e.loc)]) from None
            return int(out) if e.name in ("floor", "ceil") else float(out)
        return NOT_CONST

    def binary(self, op: str, a: Any, b: Any, loc: SourceLocation) -> Any:
        is_float = isinstance(a, float) or isinstance(b, float)
        if op in ("&&", "||"):
            return (bool(a) and bool(b)) if op == "&&" else (bool(a) or bool(b))
        if op in _COMPARE:
            return _COMPARE[op](a, b)
        if is_float:
            a, b = float(a), float(b)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                if b == 0.0:
                    raise CompileError([error("division by zero in constant expression", loc)])
                return a / b
            if op == "%":
                if b == 0.0:
                    raise CompileError([error("division by zero in constant expression", loc)])
                return math.fmod(a, b)
            if op == "**":
                return a ** b
            raise CompileError([error(f"operator '{op}' is not defined for floats", loc)])
        a, b = int(a), int(b)
        if op == "+":
            return _check_int(a + b, loc)
        if op == "-":
            return _check_int(a - b, loc)
        if op == "*":
            return _check_int(a * b, loc)
        if op in ("/", "%"):
            if b == 0:
                raise CompileError([error("division by zero in constant expression", loc)])
            return _check_int(c_div(a, b) if op == "/" else c_rem(a, b), loc)
        if op == "**":
            if b < 0:
                return float(a) ** b
            return _check_int(a ** b, loc)
        if op == "&":
            return a & b
        if op == "|":
            return a | b
        if op == "^":
            return a ^ b
        if op == "<<":
            if not 0 <= b < 64:
                raise CompileError([error("shift amount out of range in constant expression", loc)])
            return _check_int(a << b, loc)
        if op == ">>":
            if not 0 <= b < 64:
                raise CompileError([error("shift amount out of range in constant expression", loc)])
            return a >> b
        raise CompileError([error(f"unsupported operator '{op}' in constant expression", loc)])


_COMPARE = {
    "==": operator.eq, "!=": operator.ne, "<": operator.lt,
    "<=": operator.le, ">": operator.gt, ">=": operator.ge,
}
