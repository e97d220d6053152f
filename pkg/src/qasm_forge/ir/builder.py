"""AST to IR translation.

Mutable classical variables live in memory cells (``cell.*``); qubits are
threaded as SSA values through value-semantics ``qvs.*`` ops with the
symbol table tracking the current value of each physical slot.  Qubit
values never cross a region boundary: tracking is reset on entry to and
exit from every region, and bodies re-extract what they use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from ..frontend import ast
from ..frontend.diagnostics import CompileError, Diagnostic, SourceLocation, error
from ..symtab import CONSTANTS, MATH_FUNCTIONS, NOT_CONST, SymbolInfo, SymbolTable
from . import gates as G
from . import types as T
from .core import Block, FunctionDef, Global, IrModule, Operation, Region, Value

BUILTIN_INCLUDES = frozenset({"stdgates.inc", "qelib1.inc"})

_INT_BINOPS = {"+": "addi", "-": "subi", "*": "muli", "/": "divsi", "%": "remsi",
               "&": "andi", "|": "ori", "^": "xori", "<<": "shli", ">>": "shrsi", "**": "powi"}
_FLOAT_BINOPS = {"+": "addf", "-": "subf", "*": "mulf", "/": "divf", "%": "remf", "**": "powf"}
_INT_PRED = {"==": "eq", "!=": "ne", "<": "slt", "<=": "sle", ">": "sgt", ">=": "sge"}
_FLOAT_PRED = {"==": "oeq", "!=": "one", "<": "olt", "<=": "ole", ">": "ogt", ">=": "oge"}

_FORBIDDEN_IN_COMPUTE = (
    ast.Measure, ast.Reset, ast.Assignment, ast.CompoundAssignment, ast.ClassicalDecl,
    ast.BitDecl, ast.While, ast.Print, ast.Return, ast.QubitDecl, ast.SubroutineDef,
    ast.ExternDecl, ast.Include,
)


@dataclass
class QRef:
    """A resolved quantum operand."""

    kind: str  # "slot" | "dynamic" | "array"
    root: Value | None = None  # slot: physical root array
    index: int = 0  # slot: absolute index
    array: Value | None = None  # dynamic / array: the array value used
    dyn_index: Value | None = None
    view: list[tuple[Value, int]] | None = None  # array: element slots
    size: int | None = None

    def roots(self) -> set[int]:
        if self.kind == "slot":
            return {self.root.uid}
        return {r.uid for r, _ in (self.view or [])}


class _Abort(Exception):
    """Unwinds the current statement after a diagnostic was recorded."""


def type_of_spec(spec: ast.TypeSpec, symtab: SymbolTable) -> str:
    if spec.kind == "bool":
        return T.BOOL
    if spec.kind == "bit":
        return T.BOOL
    width = 32
    if spec.width is not None:
        width = symtab.eval_const_expr(spec.width)
        if width is NOT_CONST or not isinstance(width, int) or isinstance(width, bool):
            raise CompileError([error("type width must be a constant integer", spec.loc)])
    if spec.kind in ("int", "uint"):
        if width not in T.INT_WIDTHS or width == 1:
            raise CompileError([error(f"unsupported integer width {width}", spec.loc)])
        return T.int_type(width)
    if spec.kind == "float":
        if width not in T.FLOAT_WIDTHS:
            raise CompileError([error(f"unsupported float width {width}", spec.loc)])
        return T.float_type(width)
    raise CompileError([error(f"unsupported type {spec.kind}", spec.loc)])


class IRBuilder:
    def __init__(self) -> None:
        self.module = IrModule()
        self.symtab = SymbolTable()
        self.diags: list[Diagnostic] = []
        self.block: Block | None = None
        self.fn: FunctionDef | None = None
        self.segment: str | None = None
        self.allocs: list[Value] = []
        self.region_depth = 0

    # -- entry ---------------------------------------------------------------

    def build(self, program: ast.Program) -> IrModule:
        main = FunctionDef("main", [], [], Region.single())
        self.fn = main
        self.block = main.entry
        for stmt in program.statements:
            self._statement_guarded(stmt)
        for arr in self.allocs:
            self.emit("q.dealloc", [arr])
        self.emit("func.return")
        self.module.add_function(main)
        if self.diags:
            raise CompileError(self.diags)
        return self.module

    def _statement_guarded(self, stmt: ast.Node) -> None:
        try:
            self.statement(stmt)
        except CompileError as exc:
            self.diags.extend(exc.diagnostics)
        except _Abort:
            pass

    def fail(self, message: str, loc: SourceLocation) -> _Abort:
        self.diags.append(error(message, loc))
        return _Abort()

    # -- emission helpers ----------------------------------------------------

    def emit(self, name: str, operands=(), result_types=(), attrs=None, regions=()) -> Operation:
        op = Operation(name, operands, result_types, attrs, regions)
        self.block.append(op)
        return op

    def constant(self, value: Any, type_: str) -> Value:
        if T.is_float(type_):
            value = float(value)
        elif type_ == T.BOOL:
            value = bool(value)
        else:
            value = int(value)
        return self.emit("arith.constant", [], [type_], {"value": value}).result

    def cast(self, v: Value, to: str) -> Value:
        if v.type == to:
            return v
        if not (T.is_numeric(v.type) and T.is_numeric(to)):
            raise CompileError([error(f"cannot convert {v.type} to {to}")])
        return self.emit("arith.cast", [v], [to]).result

    def to_bool(self, v: Value) -> Value:
        if v.type == T.BOOL:
            return v
        if T.is_float(v.type):
            zero = self.constant(0.0, v.type)
            return self.emit("arith.cmpf", [v, zero], [T.BOOL], {"predicate": "one"}).result
        zero = self.constant(0, v.type)
        return self.emit("arith.cmpi", [v, zero], [T.BOOL], {"predicate": "ne"}).result

    def _flag(self, attrs: dict) -> dict:
        if self.segment:
            attrs["segment"] = self.segment
        return attrs

    def new_region(self, arg_types=()) -> tuple[Region, Block]:
        region = Region.single(arg_types)
        return region, region.block

    def in_region(self, block: Block, fn, *args):
        """Build into ``block`` with fresh qubit tracking and a new scope."""
        saved = self.block
        self.symtab.invalidate_all()
        self.symtab.enter_scope()
        self.block = block
        self.region_depth += 1
        try:
            return fn(*args)
        finally:
            self.region_depth -= 1
            self.block = saved
            self.symtab.exit_scope()
            self.symtab.invalidate_all()

    # -- literal helpers -------------------------------------------------------

    def literal(self, e: ast.Node) -> Any:
        """Constant value of an expression built only from literals and
        named mathematical constants; NOT_CONST otherwise."""
        for node in e.walk():
            if isinstance(node, ast.Ident):
                if node.name not in CONSTANTS or self.symtab.lookup(node.name) is not None:
                    return NOT_CONST
            elif isinstance(node, (ast.MeasureExpr, ast.IndexExpr, ast.StrLit)):
                return NOT_CONST
            elif isinstance(node, ast.CallExpr) and node.name not in MATH_FUNCTIONS:
                return NOT_CONST
        return self.symtab.eval_const_expr(e)

    def const_int(self, e: ast.Node, what: str) -> int:
        v = self.symtab.eval_const_expr(e)
        if v is NOT_CONST or isinstance(v, bool) or not isinstance(v, int):
            if isinstance(v, float) and v.is_integer():
                return int(v)
            raise self.fail(f"{what} must be a constant integer expression", e.loc)
        return v

    # -- statements ----------------------------------------------------------

    def statements(self, stmts: list[ast.Node]) -> None:
        for s in stmts:
            self._statement_guarded(s)

    def statement(self, s: ast.Node) -> None:
        method = getattr(self, f"stmt_{type(s).__name__}", None)
        if method is None:
            raise self.fail(f"unsupported statement '{type(s).__name__}'", s.loc)
        method(s)

    def stmt_Include(self, s: ast.Include) -> None:
        if s.path not in BUILTIN_INCLUDES:
            raise self.fail(f"cannot resolve include '{s.path}' (only built-in gate libraries are available)", s.loc)

    def _at_global_scope(self) -> bool:
        return self.fn.name == "main" and self.region_depth == 0 and self.symtab.depth == 1

    def stmt_ConstDecl(self, s: ast.ConstDecl) -> None:
        value = self.symtab.eval_const_expr(s.value)
        if value is NOT_CONST:
            raise self.fail(f"initializer of const '{s.name}' is not a constant expression", s.value.loc)
        if s.type is not None:
            ty = type_of_spec(s.type, self.symtab)
            value = _coerce(value, ty)
        elif isinstance(value, bool):
            ty = T.BOOL
        elif isinstance(value, int):
            ty = T.I64
        else:
            ty = T.F64
        if self._at_global_scope():
            self.module.globals[s.name] = Global(s.name, ty, value)
            kind = "global_const"
        else:
            kind = "local_const"
        self.symtab.declare(SymbolInfo(s.name, kind, None, ty, True, value, loc=s.loc))

    def stmt_QubitDecl(self, s: ast.QubitDecl) -> None:
        if not self._at_global_scope():
            raise self.fail("qubit declarations are only allowed at global scope", s.loc)
        size = 1 if s.size is None else self.const_int(s.size, "qubit register size")
        if size < 1:
            raise self.fail(f"qubit register size must be positive, got {size}", s.loc)
        arr = self.emit("q.qalloc", [], [T.qarray(size)], {"size": size, "name": s.name}).result
        self.allocs.append(arr)
        self.symtab.register_root(arr)
        self.symtab.declare(SymbolInfo(
            s.name, "qreg", arr, arr.type, size=size, scalar=s.size is None,
            view=[(arr, k) for k in range(size)], loc=s.loc,
        ))

    def _declare_cell(self, name: str, elem: str, length: int | None, loc: SourceLocation) -> SymbolInfo:
        c = self.emit("cell.alloca", [], [T.cell(elem, length)], {"name": name}).result
        return self.symtab.declare(SymbolInfo(name, "cell", c, elem, size=length, loc=loc))

    def stmt_BitDecl(self, s: ast.BitDecl) -> None:
        length = None if s.size is None else self.const_int(s.size, "bit register size")
        if length is not None and length < 1:
            raise self.fail("bit register size must be positive", s.loc)
        info = self._declare_cell(s.name, T.BOOL, length, s.loc)
        if s.init is not None:
            if isinstance(s.init, ast.MeasureExpr):
                self.measure(s.init.qubit, ast.Ident(s.name, loc=s.loc), s.loc)
            elif length is None:
                self.store(info, None, self.expr(s.init), s.loc)
            else:
                raise self.fail("bit register initializers must be measurements", s.init.loc)

    def stmt_ClassicalDecl(self, s: ast.ClassicalDecl) -> None:
        ty = type_of_spec(s.type, self.symtab)
        init = None
        if s.init is not None and not isinstance(s.init, ast.MeasureExpr):
            init = self.expr(s.init)
        info = self._declare_cell(s.name, ty, None, s.loc)
        if isinstance(s.init, ast.MeasureExpr):
            self.measure(s.init.qubit, ast.Ident(s.name, loc=s.loc), s.loc)
        elif init is not None:
            self.store(info, None, init, s.loc)

    def stmt_AliasDecl(self, s: ast.AliasDecl) -> None:
        ref = self.qarray_expr(s.value)
        scalar = ref.size == 1 and isinstance(s.value, ast.IndexExpr) and not isinstance(s.value.index, ast.RangeExpr)
        self.symtab.declare(SymbolInfo(
            s.name, "qreg", ref.array, ref.array.type, size=ref.size, scalar=scalar, view=ref.view, loc=s.loc,
        ))

    def stmt_ExternDecl(self, s: ast.ExternDecl) -> None:
        params = [type_of_spec(t, self.symtab) for t in s.param_types]
        results = [type_of_spec(s.return_type, self.symtab)] if s.return_type else []
        self.module.add_function(FunctionDef(s.name, params, results, None))
        self.symtab.declare(SymbolInfo(s.name, "extern", None, None, loc=s.loc,
                                       extra={"params": params, "results": results}))

    def stmt_SubroutineDef(self, s: ast.SubroutineDef) -> None:
        if not self._at_global_scope():
            raise self.fail("subroutines must be defined at global scope", s.loc)
        param_types = [type_of_spec(p.type, self.symtab) for p in s.params]
        qsizes: list[int] = []
        for qp in s.qubit_params:
            qsizes.append(1 if qp.size is None else self.const_int(qp.size, "qubit parameter size"))
        results = [type_of_spec(s.return_type, self.symtab)] if s.return_type else []
        arg_types = param_types + [T.qarray(n) for n in qsizes]
        fn = FunctionDef(s.name, arg_types, results, Region.single(arg_types),
                         [p.name for p in s.params] + [q.name for q in s.qubit_params])
        self.symtab.declare(SymbolInfo(s.name, "func", None, None, loc=s.loc, extra={
            "params": param_types, "qsizes": qsizes, "results": results,
            "scalars": [qp.size is None for qp in s.qubit_params],
        }))
        saved = (self.fn, self.block, self.segment)
        self.fn, self.block, self.segment = fn, fn.entry, None
        self.symtab.invalidate_all()
        self.symtab.enter_scope(function_boundary=True)
        try:
            args = fn.entry.args
            for p, ty, arg in zip(s.params, param_types, args):
                info = self._declare_cell(p.name, ty, None, p.loc)
                self.emit("cell.store", [arg, info.value])
            for qp, n, arg in zip(s.qubit_params, qsizes, args[len(param_types):]):
                self.symtab.register_root(arg)
                self.symtab.declare(SymbolInfo(qp.name, "qreg", arg, arg.type, size=n, scalar=qp.size is None,
                                               view=[(arg, k) for k in range(n)], loc=qp.loc))
            body = list(s.body)
            ret = None
            if body and isinstance(body[-1], ast.Return):
                ret = body.pop()
            for stmt in body:
                if any(isinstance(n, ast.Return) for n in stmt.walk()):
                    ret_node = next(n for n in stmt.walk() if isinstance(n, ast.Return))
                    self.diags.append(error("'return' is only supported as the last statement of a subroutine", ret_node.loc))
                    continue
                self._statement_guarded(stmt)
            values: list[Value] = []
            if ret is not None:
                if ret.value is not None:
                    if not results:
                        raise self.fail(f"subroutine '{s.name}' has no return type but returns a value", ret.loc)
                    if isinstance(ret.value, ast.MeasureExpr):
                        v = self.measure_value(ret.value.qubit, ret.loc)
                    else:
                        v = self.expr(ret.value)
                    values = [self.cast(v, results[0])]
                elif results:
                    raise self.fail(f"subroutine '{s.name}' must return a value", ret.loc)
            elif results:
                raise self.fail(f"subroutine '{s.name}' must end with a return statement", s.loc)
            self.emit("func.return", values)
        except _Abort:
            if not fn.entry.terminator:
                self.emit("func.return", [self.constant(0, results[0])] if results else [])
        finally:
            self.symtab.exit_scope()
            self.symtab.invalidate_all()
            self.fn, self.block, self.segment = saved
        self.module.add_function(fn)

    def stmt_GateCall(self, s: ast.GateCall) -> None:
        self.modified_call(s.modifiers, s.name, s.params, s.qubits, s.loc)

    def stmt_ExpressionStatement(self, s: ast.ExpressionStatement) -> None:
        e = s.expr
        if isinstance(e, ast.CallExpr):
            info = self.symtab.lookup(e.name)
            if (info is None or info.kind not in ("func", "extern")) and G.is_gate(e.name) and e.qubits:
                self.gate(e.name, e.args, e.qubits, e.loc)
                return
            self.call(e, want_result=False)
            return
        self.expr(e)

    def stmt_Measure(self, s: ast.Measure) -> None:
        self.measure(s.qubit, s.target, s.loc)

    def stmt_Reset(self, s: ast.Reset) -> None:
        ref = self.qref(s.qubit)
        if ref.kind == "array":
            self.symtab_invalidate(ref)
            for k, (root, idx) in enumerate(ref.view):
                q = self.qubit_value(root, idx)
                out = self.emit("qvs.reset", [q], [T.QUBIT]).result
                self.symtab.update_qubit_value(q, out)
            return
        q = self.single_value(ref)
        out = self.emit("qvs.reset", [q], [T.QUBIT]).result
        self.after_single(ref, q, out)

    def stmt_Assignment(self, s: ast.Assignment) -> None:
        info, index = self.lvalue(s.target)
        self.store(info, index, self.expr(s.value), s.loc)

    def stmt_CompoundAssignment(self, s: ast.CompoundAssignment) -> None:
        info, index = self.lvalue(s.target)
        current = self.load(info, index, s.loc)
        value = self.binary(s.op, current, self.expr(s.value), s.loc)
        self.store(info, index, value, s.loc)

    def stmt_If(self, s: ast.If) -> None:
        cond = self.to_bool(self.expr(s.cond))
        then_r, then_b = self.new_region()
        else_r, else_b = self.new_region()
        op = self.emit("scf.if", [cond], [], {}, [then_r, else_r])
        self.in_region(then_b, self.statements, s.then_body)
        if s.else_body:
            self.in_region(else_b, self.statements, s.else_body)
        return op

    def stmt_ForRange(self, s: ast.ForRange) -> None:
        self.range_loop(s.var, s.start, s.step, s.stop, s.body, s.loc, adjoint=False)

    def stmt_ForCStyle(self, s: ast.ForCStyle) -> None:
        canon = canonical_cfor(s)
        if canon is not None:
            var, start, step, stop = canon
            self.range_loop(var, start, step, stop, s.body, s.loc, adjoint=False)
            return
        self.symtab.enter_scope()
        try:
            if s.init is not None:
                self.statement(s.init)
            cond_r, cond_b = self.new_region()
            body_r, body_b = self.new_region()
            self.emit("scf.while", [], [], {}, [cond_r, body_r])

            def cond_body():
                c = self.to_bool(self.expr(s.cond)) if s.cond is not None else self.constant(True, T.BOOL)
                self.emit("scf.condition", [c])

            def loop_body():
                self.statements(s.body)
                if s.update is not None:
                    self.statement(s.update)

            self.in_region(cond_b, cond_body)
            self.in_region(body_b, loop_body)
        finally:
            self.symtab.exit_scope()

    def stmt_While(self, s: ast.While) -> None:
        cond_r, cond_b = self.new_region()
        body_r, body_b = self.new_region()
        self.emit("scf.while", [], [], {}, [cond_r, body_r])

        def cond_body():
            self.emit("scf.condition", [self.to_bool(self.expr(s.cond))])

        self.in_region(cond_b, cond_body)
        self.in_region(body_b, self.statements, s.body)

    def stmt_ComputeAction(self, s: ast.ComputeAction) -> None:
        bad = [n for st in s.compute for n in st.walk() if isinstance(n, _FORBIDDEN_IN_COMPUTE)]
        if bad:
            raise self.fail(f"'{type(bad[0]).__name__}' is not allowed inside a compute block "
                            "(it must be reversible)", bad[0].loc)
        prev = self.segment
        seg_c = prev or "compute"
        seg_u = prev or "uncompute"
        self.segment = seg_c
        try:
            self.symtab.enter_scope()
            try:
                self.statements(s.compute)
            finally:
                self.symtab.exit_scope()
            self.segment = prev
            self.symtab.enter_scope()
            try:
                self.statements(s.action)
            finally:
                self.symtab.exit_scope()
            self.segment = seg_u
            self.symtab.enter_scope()
            try:
                self.adjoint_statements(s.compute)
            finally:
                self.symtab.exit_scope()
        finally:
            self.segment = prev

    def stmt_Return(self, s: ast.Return) -> None:
        raise self.fail("'return' outside of a subroutine", s.loc)

    def stmt_Print(self, s: ast.Print) -> None:
        fmt: list[str | None] = []
        operands: list[Value] = []
        for a in s.args:
            if isinstance(a, ast.StrLit):
                fmt.append(a.value)
            else:
                fmt.append(None)
                operands.append(self.expr(a))
        self.emit("rt.print", operands, [], {"fmt": fmt})

    # -- loops ---------------------------------------------------------------

    def range_loop(self, var, start, step, stop, body, loc, adjoint: bool) -> None:
        """``for var in [start:step:stop)``; with ``adjoint`` the iteration
        order is reversed and the body is built as its adjoint."""
        lit = [self.literal(e) if e is not None else (1 if e is step else NOT_CONST) for e in (start, step, stop)]
        if step is None:
            lit[1] = 1
        for v, e in zip(lit, (start, step, stop)):
            if v is not NOT_CONST and (isinstance(v, float) and not v.is_integer()):
                raise self.fail("loop bounds must be integers", e.loc)
        if lit[1] is not NOT_CONST and int(lit[1]) == 0:
            raise self.fail("loop step must be non-zero", step.loc)
        attrs: dict[str, Any] = {}
        operands: list[Value] = []
        if adjoint:
            if lit[1] is NOT_CONST:
                raise self.fail("the loop step must be a literal constant inside a compute block", step.loc)
            s_ = int(lit[1])
            if lit[0] is not NOT_CONST and lit[2] is not NOT_CONST:
                r = range(int(lit[0]), int(lit[2]), s_)
                if len(r) == 0:
                    return
                attrs = {"lb": r[-1], "ub": r[0] - s_, "step": -s_}
            else:
                a = self.cast(self.expr(start), T.I64)
                b = self.cast(self.expr(stop), T.I64)
                sv = self.constant(s_, T.I64)
                # trip = max(0, (b - a + s - sign(s)) / s); last = a + (trip - 1) * s
                bias = self.constant(s_ - (1 if s_ > 0 else -1), T.I64)
                diff = self.emit("arith.subi", [b, a], [T.I64]).result
                num = self.emit("arith.addi", [diff, bias], [T.I64]).result
                trip = self.emit("arith.divsi", [num, sv], [T.I64]).result
                trip = self.emit("arith.maxsi", [trip, self.constant(0, T.I64)], [T.I64]).result
                one = self.constant(1, T.I64)
                tm1 = self.emit("arith.subi", [trip, one], [T.I64]).result
                off = self.emit("arith.muli", [tm1, sv], [T.I64]).result
                last = self.emit("arith.addi", [a, off], [T.I64]).result
                end = self.emit("arith.subi", [a, sv], [T.I64]).result
                operands = [self.cast(last, T.INDEX), self.cast(end, T.INDEX)]
                attrs = {"lb": None, "ub": None, "step": -s_}
        else:
            for key, v, e in zip(("lb", "step", "ub"), lit, (start, step, stop)):
                attrs[key] = int(v) if v is not NOT_CONST else None
            for key, e in (("lb", start), ("ub", stop), ("step", step)):
                if attrs[key] is None:
                    operands.append(self.cast(self.expr(e), T.INDEX))
        attrs = {"lb": attrs["lb"], "ub": attrs["ub"], "step": attrs["step"]}
        region, blk = self.new_region([T.INDEX])
        self.emit("affine.for", operands, [], attrs, [region])

        def body_fn():
            self.symtab.declare(SymbolInfo(var, "loopvar", blk.args[0], T.INDEX, loc=loc))
            if adjoint:
                self.adjoint_statements(body)
            else:
                self.statements(body)

        self.in_region(blk, body_fn)

    # -- compute / uncompute -------------------------------------------------

    def adjoint_statements(self, stmts: list[ast.Node]) -> None:
        for st in stmts:
            if isinstance(st, (ast.ConstDecl, ast.AliasDecl)):
                self._statement_guarded(st)
        for st in reversed(stmts):
            if isinstance(st, (ast.ConstDecl, ast.AliasDecl)):
                continue
            try:
                self.adjoint_statement(st)
            except CompileError as exc:
                self.diags.extend(exc.diagnostics)
            except _Abort:
                pass

    def adjoint_statement(self, s: ast.Node) -> None:
        info = self.symtab.lookup(s.name) if isinstance(s, ast.GateCall) else None
        if (isinstance(s, ast.GateCall) and not s.modifiers and G.is_gate(s.name)
                and (info is None or info.kind not in ("func", "extern"))):
            self.gate(s.name, s.params, s.qubits, s.loc, adjoint=True)
            return
        if isinstance(s, (ast.GateCall, ast.ExpressionStatement)):
            region, blk = self.new_region()
            self.emit("q.adj_region", [], [], self._flag({}), [region])
            saved = self.segment
            self.segment = None
            try:
                self.in_region(blk, self.statement, s)
            finally:
                self.segment = saved
            return
        if isinstance(s, ast.ForRange):
            self.range_loop(s.var, s.start, s.step, s.stop, s.body, s.loc, adjoint=True)
            return
        if isinstance(s, ast.ForCStyle):
            canon = canonical_cfor(s)
            if canon is None:
                raise self.fail("only counted for-loops can be uncomputed", s.loc)
            var, start, step, stop = canon
            self.range_loop(var, start, step, stop, s.body, s.loc, adjoint=True)
            return
        if isinstance(s, ast.If):
            cond = self.to_bool(self.expr(s.cond))
            then_r, then_b = self.new_region()
            else_r, else_b = self.new_region()
            self.emit("scf.if", [cond], [], {}, [then_r, else_r])
            self.in_region(then_b, self.adjoint_statements, s.then_body)
            if s.else_body:
                self.in_region(else_b, self.adjoint_statements, s.else_body)
            return
        if isinstance(s, ast.ComputeAction):
            # (U V U^dag)^dag = U V^dag U^dag
            self.symtab.enter_scope()
            try:
                self.statements(s.compute)
                self.adjoint_statements(s.action)
                self.adjoint_statements(s.compute)
            finally:
                self.symtab.exit_scope()
            return
        raise self.fail(f"cannot uncompute '{type(s).__name__}'", s.loc)

    # -- calls and modifiers ---------------------------------------------------

    def modified_call(self, mods: list[ast.Modifier], name: str, params, qargs, loc) -> None:
        if not mods:
            info = self.symtab.lookup(name)
            if info is not None and info.kind in ("func", "extern"):
                self.call(ast.CallExpr(name, list(params), list(qargs), loc=loc), want_result=False)
                return
            if G.is_gate(name) or name == "id":
                self.gate(name, params, qargs, loc)
                return
            if info is None:
                raise self.fail(f"undeclared gate or subroutine '{name}'", loc)
            raise self.fail(f"'{name}' is not a gate or subroutine", loc)
        m, rest = mods[0], mods[1:]
        if m.kind in ("ctrl", "negctrl"):
            n = 1 if m.arg is None else self.const_int(m.arg, "number of controls")
            if n < 1 or n >= len(qargs) + (0 if qargs else 1):
                raise self.fail(f"'{m.kind}({n})' needs {n} control qubit(s) plus targets", m.loc)
            self.controlled(m.kind == "negctrl", qargs[:n], rest, name, params, qargs[n:], loc)
            return
        if m.kind == "inv":
            region, blk = self.new_region()
            self.emit("q.adj_region", [], [], self._flag({}), [region])
            self._region_body(blk, rest, name, params, qargs, loc)
            return
        if m.kind == "pow":
            k = self.symtab.eval_const_expr(m.arg)
            operands = []
            if k is NOT_CONST:
                v = self.expr(m.arg)
                if T.is_float(v.type):
                    raise self.fail("pow exponent must be an integer", m.arg.loc)
                operands = [self.cast(v, T.I64)]
                attrs = {"power": None}
            else:
                if isinstance(k, float):
                    if not k.is_integer():
                        raise self.fail(f"non-integer pow exponent {k} is not supported", m.arg.loc)
                    k = int(k)
                attrs = {"power": int(k)}
            region, blk = self.new_region()
            self.emit("q.pow_region", operands, [], self._flag(attrs), [region])
            self._region_body(blk, rest, name, params, qargs, loc)
            return
        raise self.fail(f"unknown modifier '{m.kind}'", m.loc)

    def controlled(self, negative: bool, ctrls: list, mods, name, params, targets, loc) -> None:
        if not ctrls:
            self.modified_call(mods, name, params, targets, loc)
            return
        ref = self.qref(ctrls[0])
        if ref.kind == "array":
            if ref.size != 1:
                raise self.fail("a control operand must be a single qubit", ctrls[0].loc)
            root, idx = ref.view[0]
            ref = QRef("slot", root=root, index=idx)
        for t in targets:
            tref = self.qref(t, emit=False)
            if ref.kind == "slot" and tref is not None and (ref.root.uid, ref.index) in _slots(tref):
                raise self.fail("control qubit also used as a target", t.loc)
        if negative:
            self._apply_single(ref, "x")
        c = self.single_value(ref)
        region, blk = self.new_region()
        op = self.emit("q.ctrl_region", [c], [T.QUBIT], self._flag({}), [region])

        def body():
            saved = self.segment
            self.segment = None
            try:
                self.controlled(negative, ctrls[1:], mods, name, params, targets, loc)
            finally:
                self.segment = saved

        self._nested(blk, body)
        if ref.kind == "slot":
            self.symtab.bind_qubit(ref.root, ref.index, op.result)
        if negative:
            self._apply_single(ref, "x")

    def _nested(self, blk: Block, fn) -> None:
        """Build ``fn`` inside ``blk``, preserving the tracked value of qubits
        that the region op itself consumed and produced."""
        self.in_region(blk, fn)

    def _region_body(self, blk: Block, mods, name, params, qargs, loc) -> None:
        def body():
            saved = self.segment
            self.segment = None
            try:
                self.modified_call(mods, name, params, qargs, loc)
            finally:
                self.segment = saved

        self.in_region(blk, body)

    def _apply_single(self, ref: QRef, gate: str) -> None:
        q = self.single_value(ref)
        out = self.emit(f"qvs.{gate}", [q], [T.QUBIT], self._flag({"params": []})).result
        self.after_single(ref, q, out)

    def call(self, e: ast.CallExpr, want_result: bool) -> Value | None:
        info = self.symtab.lookup(e.name)
        if info is None:
            if e.name in MATH_FUNCTIONS and not e.qubits:
                return self.expr(e)
            raise self.fail(f"undeclared subroutine '{e.name}'", e.loc)
        if info.kind not in ("func", "extern"):
            raise self.fail(f"'{e.name}' is not callable", e.loc)
        sig = info.extra
        ptypes: list[str] = sig["params"]
        qsizes: list[int] = sig.get("qsizes", [])
        classical_args: list[ast.Node]
        quantum_args: list[ast.Node]
        if e.qubits:
            classical_args, quantum_args = list(e.args), list(e.qubits)
        else:
            classical_args, quantum_args = [], []
            for a in e.args:
                (quantum_args if self.is_quantum_expr(a) else classical_args).append(a)
        if len(classical_args) != len(ptypes):
            raise self.fail(f"'{e.name}' expects {len(ptypes)} classical argument(s), got {len(classical_args)}", e.loc)
        if len(quantum_args) != len(qsizes):
            raise self.fail(f"'{e.name}' expects {len(qsizes)} qubit argument(s), got {len(quantum_args)}", e.loc)
        operands = [self.cast(self.expr(a), t) for a, t in zip(classical_args, ptypes)]
        seen: set[tuple[int, int]] = set()
        arrays: list[Value] = []
        for a, n in zip(quantum_args, qsizes):
            ref = self.qref(a)
            slots = _slots(ref)
            if slots & seen:
                raise self.fail("the same qubit is passed twice to a subroutine", a.loc)
            seen |= slots
            arr, size = self.as_array(ref, a.loc)
            if size != n:
                raise self.fail(f"'{e.name}' expects a qubit register of size {n}, got {size}", a.loc)
            arrays.append(arr)
        results = sig["results"]
        attrs = {"callee": e.name}
        if info.kind == "func":
            self._flag(attrs)
        op = self.emit("func.call", operands + arrays, results, attrs)
        if want_result:
            if not results:
                raise self.fail(f"subroutine '{e.name}' does not return a value", e.loc)
            return op.results[0]
        return None

    def as_array(self, ref: QRef, loc) -> tuple[Value, int]:
        """Pass a quantum operand by reference as an array handle."""
        if ref.kind == "array":
            self.symtab_invalidate(ref)
            return ref.array, ref.size
        if ref.kind == "slot":
            self.symtab.invalidate_root(ref.root)
            arr = self.emit("q.slice", [ref.root], [T.qarray(1)],
                            {"start": ref.index, "step": 1, "stop": ref.index}).result
            return arr, 1
        raise self.fail("a dynamically indexed qubit cannot be passed to a subroutine", loc)

    def is_quantum_expr(self, e: ast.Node) -> bool:
        base = e
        while isinstance(base, ast.IndexExpr):
            base = base.base
        if isinstance(base, ast.Ident):
            info = self.symtab.lookup(base.name)
            return info is not None and info.kind == "qreg"
        return False

    # -- gates -----------------------------------------------------------------

    def gate(self, name: str, params, qargs, loc, adjoint: bool = False) -> None:
        if name == "id":
            for a in qargs:
                self.qref(a, emit=False)
            return
        gname = G.canonical_name(name)
        info = G.GATES[gname]
        if len(params) != info.num_params:
            raise self.fail(f"gate '{name}' takes {info.num_params} parameter(s), got {len(params)}", loc)
        if len(qargs) != info.num_qubits:
            raise self.fail(f"gate '{name}' acts on {info.num_qubits} qubit(s), got {len(qargs)}", loc)
        static: list[Any] = []
        dyn: list[Value] = []
        for p in params:
            c = self.literal(p)
            if c is NOT_CONST:
                static.append(None)
                dyn.append(self.cast(self.expr(p), T.F64))
            else:
                if isinstance(c, bool) or not isinstance(c, (int, float)):
                    raise self.fail("gate parameter must be numeric", p.loc)
                static.append(float(c))
        if adjoint:
            gname, static, dyn = self.dagger_params(gname, static, dyn)
        refs = [self.qref(a) for a in qargs]
        for a, r in zip(qargs, refs):
            if r is None:
                raise self.fail("expected a qubit operand", a.loc)
        slots: set[tuple[int, int]] = set()
        for a, r in zip(qargs, refs):
            if r.kind == "slot":
                if (r.root.uid, r.index) in slots:
                    raise self.fail(f"duplicate qubit operand to gate '{name}'", a.loc)
                slots.add((r.root.uid, r.index))
        arrays = [r for r in refs if r.kind == "array"]
        attrs = self._flag({"params": static})
        if arrays:
            sizes = {r.size for r in arrays}
            if len(sizes) != 1:
                raise self.fail(f"broadcast gate '{name}' over registers of different sizes", loc)
            for r in arrays:
                if slots & set(r.view):
                    pass
                overlap = {(x.uid, i) for x, i in r.view} & slots
                if overlap:
                    raise self.fail(f"qubit appears both as a single operand and in a register of '{name}'", loc)
            if len(arrays) > 1:
                seen: set = set()
                for r in arrays:
                    s = {(x.uid, i) for x, i in r.view}
                    if s & seen:
                        raise self.fail(f"overlapping registers in broadcast gate '{name}'", loc)
                    seen |= s
            operands: list[Value] = []
            scalars: list[tuple[QRef, Value]] = []
            for r in refs:
                if r.kind == "array":
                    operands.append(r.array)
                else:
                    v = self.single_value(r)
                    scalars.append((r, v))
                    operands.append(v)
            for r in arrays:
                self.symtab_invalidate(r)
            op = self.emit(f"qvs.{gname}", operands + dyn, [T.QUBIT] * len(scalars), attrs)
            for (r, v), out in zip(scalars, op.results):
                if r.kind == "slot" and self.symtab.is_tracked(v):
                    self.symtab.update_qubit_value(v, out)
            return
        values = [self.single_value(r) for r in refs]
        op = self.emit(f"qvs.{gname}", values + dyn, [T.QUBIT] * len(values), attrs)
        for r, v, out in zip(refs, values, op.results):
            self.after_single(r, v, out)

    def dagger_params(self, name: str, static: list, dyn: list[Value]):
        info = G.GATES[name]
        if info.num_params == 0:
            dname, _ = G.dagger(name, [])
            return dname, [], []
        # negate each parameter, static or dynamic, then reorder for u
        new_static: list[Any] = []
        new_dyn: list[Value] = []
        it = iter(dyn)
        values: list[tuple[Any, Value | None]] = []
        for sv in static:
            if sv is None:
                v = next(it)
                values.append((None, self.emit("arith.negf", [v], [T.F64]).result))
            else:
                values.append((-sv if sv != 0 else 0.0, None))
        if name == "u":
            values = [values[0], values[2], values[1]]
        for sv, v in values:
            new_static.append(sv)
            if v is not None:
                new_dyn.append(v)
        return name, new_static, new_dyn

    # -- measurement -----------------------------------------------------------

    def measure_value(self, qubit: ast.Node, loc) -> Value:
        ref = self.qref(qubit)
        if ref is None or ref.kind == "array" and ref.size != 1:
            raise self.fail("measurement used as a value must target a single qubit", loc)
        if ref.kind == "array":
            root, idx = ref.view[0]
            ref = QRef("slot", root=root, index=idx)
        q = self.single_value(ref)
        op = self.emit("qvs.mz", [q], [T.BOOL, T.QUBIT])
        self.after_single(ref, q, op.results[1])
        return op.results[0]

    def measure(self, qubit: ast.Node, target: ast.Node | None, loc) -> None:
        ref = self.qref(qubit)
        if ref is None:
            raise self.fail("expected a qubit to measure", qubit.loc)
        if ref.kind != "array" or (target is not None and self._scalar_target(target)):
            bit = self.measure_value(qubit, loc)
            if target is not None:
                info, index = self.lvalue(target)
                self.store(info, index, bit, loc)
            return
        info = None
        if target is not None:
            info, index = self.lvalue(target)
            if index is not None or info.size is None:
                raise self.fail("measuring a register needs a bit register target", target.loc)
            if info.size != ref.size:
                raise self.fail(f"register size {ref.size} does not match bit register size {info.size}", target.loc)
        self.symtab_invalidate(ref)
        for k, (root, idx) in enumerate(ref.view):
            q = self.qubit_value(root, idx)
            op = self.emit("qvs.mz", [q], [T.BOOL, T.QUBIT])
            self.symtab.update_qubit_value(q, op.results[1])
            if info is not None:
                self.emit("cell.store", [op.results[0], info.value], [], {"index": k})

    def _scalar_target(self, target: ast.Node) -> bool:
        if isinstance(target, ast.IndexExpr):
            return True
        if isinstance(target, ast.Ident):
            info = self.symtab.lookup(target.name)
            return info is not None and info.kind == "cell" and info.size is None
        return False

    # -- quantum operand resolution -------------------------------------------

    def qref(self, e: ast.Node, emit: bool = True) -> QRef | None:
        if isinstance(e, ast.Ident):
            info = self.symtab.lookup(e.name)
            if info is None:
                raise self.fail(f"undeclared qubit register '{e.name}'", e.loc)
            if info.kind != "qreg":
                raise self.fail(f"'{e.name}' is not a qubit or qubit register", e.loc)
            if info.scalar:
                root, idx = info.view[0]
                return QRef("slot", root=root, index=idx)
            return QRef("array", array=info.value, view=list(info.view), size=info.size)
        if isinstance(e, ast.IndexExpr):
            if isinstance(e.index, ast.RangeExpr):
                return self.qarray_expr(e) if emit else self._slice_view(e)
            base = self.qref(e.base, emit)
            if base is None or base.kind != "array":
                raise self.fail("only qubit registers can be indexed", e.loc)
            k = self.symtab.eval_const_expr(e.index)
            if k is not NOT_CONST:
                if isinstance(k, float):
                    if not k.is_integer():
                        raise self.fail("qubit index must be an integer", e.index.loc)
                    k = int(k)
                if not 0 <= k < base.size:
                    raise self.fail(f"qubit index {k} out of range for register of size {base.size}", e.index.loc)
                root, idx = base.view[k]
                return QRef("slot", root=root, index=idx)
            if not emit:
                return QRef("dynamic", array=base.array, view=base.view, size=base.size)
            idx_v = self.expr(e.index)
            if not T.is_integral(idx_v.type):
                raise self.fail("qubit index must be an integer", e.index.loc)
            return QRef("dynamic", array=base.array, dyn_index=idx_v, view=base.view, size=base.size)
        if isinstance(e, ast.Binary) and e.op == "||":
            return self.qarray_expr(e) if emit else None
        raise self.fail("expected a qubit operand", e.loc)

    def _slice_view(self, e: ast.IndexExpr) -> QRef | None:
        base = self.qref(e.base, emit=False)
        if base is None or base.kind != "array":
            return None
        start, step, stop = self.slice_bounds(e.index, base.size)
        view = [base.view[k] for k in range(start, stop + (1 if step > 0 else -1), step)]
        return QRef("array", view=view, size=len(view))

    def slice_bounds(self, r: ast.RangeExpr, size: int) -> tuple[int, int, int]:
        start = 0 if r.start is None else self.const_int(r.start, "slice bound")
        step = 1 if r.step is None else self.const_int(r.step, "slice step")
        stop = size - 1 if r.stop is None else self.const_int(r.stop, "slice bound")
        if step == 0:
            raise self.fail("slice step must be non-zero", r.loc)
        for v, node in ((start, r.start), (stop, r.stop)):
            if not 0 <= v < size:
                raise self.fail(f"slice bound {v} out of range for register of size {size}", (node or r).loc)
        if len(range(start, stop + (1 if step > 0 else -1), step)) == 0:
            raise self.fail("empty register slice", r.loc)
        return start, step, stop

    def qarray_expr(self, e: ast.Node) -> QRef:
        """Resolve a register-valued expression (name, slice, concatenation)."""
        if isinstance(e, ast.Ident):
            ref = self.qref(e)
            if ref.kind == "slot":
                arr = self.emit("q.slice", [ref.root], [T.qarray(1)],
                                {"start": ref.index, "step": 1, "stop": ref.index}).result
                return QRef("array", array=arr, view=[(ref.root, ref.index)], size=1)
            return ref
        if isinstance(e, ast.IndexExpr):
            base = self.qref(e.base)
            if base is None or base.kind != "array":
                raise self.fail("only qubit registers can be sliced", e.loc)
            if isinstance(e.index, ast.RangeExpr):
                start, step, stop = self.slice_bounds(e.index, base.size)
            else:
                start = self.const_int(e.index, "alias index")
                if not 0 <= start < base.size:
                    raise self.fail(f"qubit index {start} out of range for register of size {base.size}", e.index.loc)
                step, stop = 1, start
            view = [base.view[k] for k in range(start, stop + (1 if step > 0 else -1), step)]
            arr = self.emit("q.slice", [base.array], [T.qarray(len(view))],
                            {"start": start, "step": step, "stop": stop}).result
            return QRef("array", array=arr, view=view, size=len(view))
        if isinstance(e, ast.Binary) and e.op == "||":
            a = self.qarray_expr(e.lhs)
            b = self.qarray_expr(e.rhs)
            if {(r.uid, i) for r, i in a.view} & {(r.uid, i) for r, i in b.view}:
                raise self.fail("concatenated registers overlap", e.loc)
            arr = self.emit("q.concat", [a.array, b.array], [T.qarray(a.size + b.size)]).result
            return QRef("array", array=arr, view=a.view + b.view, size=a.size + b.size)
        raise self.fail("expected a qubit register expression", e.loc)

    def qubit_value(self, root: Value, idx: int) -> Value:
        v = self.symtab.current_qubit(root, idx)
        if v is None:
            v = self.emit("q.extract", [root], [T.QUBIT], {"index": idx}).result
            self.symtab.bind_qubit(root, idx, v)
        return v

    def single_value(self, ref: QRef) -> Value:
        if ref.kind == "slot":
            return self.qubit_value(ref.root, ref.index)
        if ref.kind == "dynamic":
            self.symtab_invalidate(ref)
            return self.emit("q.extract", [ref.array, ref.dyn_index], [T.QUBIT], {"index": None}).result
        raise CompileError([error("expected a single qubit, got a register")])

    def after_single(self, ref: QRef, old: Value, new: Value) -> None:
        if ref.kind == "slot" and self.symtab.is_tracked(old):
            self.symtab.update_qubit_value(old, new)

    def symtab_invalidate(self, ref: QRef) -> None:
        seen: set[int] = set()
        for root, _ in ref.view or []:
            if root.uid not in seen:
                seen.add(root.uid)
                self.symtab.invalidate_root(root)

    # -- classical values --------------------------------------------------------

    def lvalue(self, target: ast.Node) -> tuple[SymbolInfo, Value | int | None]:
        if isinstance(target, ast.Ident):
            info = self._cell(target.name, target.loc)
            return info, None
        if isinstance(target, ast.IndexExpr) and isinstance(target.base, ast.Ident):
            info = self._cell(target.base.name, target.loc)
            if info.size is None:
                raise self.fail(f"'{target.base.name}' is not an array", target.loc)
            return info, self._cell_index(info, target.index)
        raise self.fail("invalid assignment target", target.loc)

    def _cell(self, name: str, loc) -> SymbolInfo:
        info = self.symtab.lookup(name)
        if info is None:
            raise self.fail(f"undeclared variable '{name}'", loc)
        if info.is_const:
            raise self.fail(f"cannot assign to constant '{name}'", loc)
        if info.kind == "loopvar":
            raise self.fail(f"cannot assign to loop variable '{name}'", loc)
        if info.kind != "cell":
            raise self.fail(f"'{name}' is not a classical variable", loc)
        return info

    def _cell_index(self, info: SymbolInfo, index: ast.Node) -> Value | int:
        k = self.symtab.eval_const_expr(index)
        if k is not NOT_CONST:
            if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k < info.size:
                raise self.fail(f"index {k} out of range for '{info.name}' of size {info.size}", index.loc)
            return k
        v = self.expr(index)
        if not T.is_integral(v.type):
            raise self.fail("array index must be an integer", index.loc)
        return v

    def store(self, info: SymbolInfo, index, value: Value, loc) -> None:
        v = self.cast(value, info.declared_type) if value.type != info.declared_type else value
        if index is None:
            if info.size is not None:
                raise self.fail(f"cannot assign a scalar to register '{info.name}'", loc)
            self.emit("cell.store", [v, info.value])
        elif isinstance(index, int):
            self.emit("cell.store", [v, info.value], [], {"index": index})
        else:
            self.emit("cell.store", [v, info.value, index], [], {"index": None})

    def load(self, info: SymbolInfo, index, loc) -> Value:
        if index is None:
            if info.size is not None:
                raise self.fail(f"register '{info.name}' used as a scalar", loc)
            return self.emit("cell.load", [info.value], [info.declared_type]).result
        if isinstance(index, int):
            return self.emit("cell.load", [info.value], [info.declared_type], {"index": index}).result
        return self.emit("cell.load", [info.value, index], [info.declared_type], {"index": None}).result

    def expr(self, e: ast.Node) -> Value:
        if isinstance(e, ast.IntLit):
            return self.constant(e.value, T.I64)
        if isinstance(e, ast.FloatLit):
            return self.constant(e.value, T.F64)
        if isinstance(e, ast.BoolLit):
            return self.constant(e.value, T.BOOL)
        if isinstance(e, ast.Ident):
            info = self.symtab.lookup(e.name)
            if info is None:
                if e.name in CONSTANTS:
                    return self.constant(CONSTANTS[e.name], T.F64)
                raise self.fail(f"undeclared identifier '{e.name}'", e.loc)
            if info.kind == "global_const":
                return self.emit("global.load", [], [info.declared_type], {"name": e.name}).result
            if info.kind == "local_const":
                return self.constant(info.const_value, info.declared_type)
            if info.kind == "cell":
                return self.load(info, None, e.loc)
            if info.kind == "loopvar":
                return self.cast(info.value, T.I64)
            if info.kind == "qreg":
                raise self.fail(f"qubit register '{e.name}' used in a classical expression", e.loc)
            raise self.fail(f"'{e.name}' cannot be used as a value", e.loc)
        if isinstance(e, ast.IndexExpr):
            if isinstance(e.base, ast.Ident):
                info = self.symtab.lookup(e.base.name)
                if info is not None and info.kind == "cell" and info.size is not None:
                    return self.load(info, self._cell_index(info, e.index), e.loc)
            raise self.fail("indexing is only supported on bit registers in expressions", e.loc)
        if isinstance(e, ast.Binary):
            if e.op in ("&&", "||"):
                a = self.to_bool(self.expr(e.lhs))
                b = self.to_bool(self.expr(e.rhs))
                return self.emit("arith.andi" if e.op == "&&" else "arith.ori", [a, b], [T.BOOL]).result
            return self.binary(e.op, self.expr(e.lhs), self.expr(e.rhs), e.loc)
        if isinstance(e, ast.Unary):
            v = self.expr(e.operand)
            if e.op == "-":
                if T.is_float(v.type):
                    return self.emit("arith.negf", [v], [v.type]).result
                v = self.cast(v, T.I64) if v.type in (T.BOOL, T.INDEX) else v
                return self.emit("arith.subi", [self.constant(0, v.type), v], [v.type]).result
            if e.op == "!":
                b = self.to_bool(v)
                return self.emit("arith.xori", [b, self.constant(True, T.BOOL)], [T.BOOL]).result
            if e.op == "~":
                if not T.is_int(v.type):
                    raise self.fail("'~' needs an integer operand", e.loc)
                return self.emit("arith.xori", [v, self.constant(-1 if v.type != T.BOOL else True, v.type)], [v.type]).result
        if isinstance(e, ast.CallExpr):
            if e.name in MATH_FUNCTIONS and self.symtab.lookup(e.name) is None and not e.qubits:
                if len(e.args) != 1:
                    raise self.fail(f"'{e.name}' takes one argument", e.loc)
                v = self.expr(e.args[0])
                if e.name in ("floor", "ceil", "abs") and T.is_integral(v.type):
                    return v if e.name != "abs" else self._iabs(v)
                v = self.cast(v, T.F64)
                return self.emit(f"math.{e.name}", [v], [T.F64]).result
            return self.call(e, want_result=True)
        if isinstance(e, ast.MeasureExpr):
            return self.measure_value(e.qubit, e.loc)
        if isinstance(e, ast.StrLit):
            raise self.fail("string literals are only allowed in print()", e.loc)
        raise self.fail("unsupported expression", e.loc)

    def _iabs(self, v: Value) -> Value:
        neg = self.emit("arith.subi", [self.constant(0, v.type), v], [v.type]).result
        return self.emit("arith.maxsi", [v, neg], [v.type]).result

    def binary(self, op: str, a: Value, b: Value, loc) -> Value:
        if op in _INT_PRED:
            ty = T.promote(a.type, b.type)
            a, b = self.cast(a, ty), self.cast(b, ty)
            if T.is_float(ty):
                return self.emit("arith.cmpf", [a, b], [T.BOOL], {"predicate": _FLOAT_PRED[op]}).result
            return self.emit("arith.cmpi", [a, b], [T.BOOL], {"predicate": _INT_PRED[op]}).result
        ty = T.promote(a.type, b.type)
        if op == "**" and T.is_integral(ty):
            pass
        a, b = self.cast(a, ty), self.cast(b, ty)
        table = _FLOAT_BINOPS if T.is_float(ty) else _INT_BINOPS
        if op not in table:
            raise self.fail(f"operator '{op}' is not defined for {ty}", loc)
        return self.emit(f"arith.{table[op]}", [a, b], [ty]).result


def _coerce(value: Any, ty: str) -> Any:
    if T.is_float(ty):
        return float(value)
    if ty == T.BOOL:
        return bool(value)
    return int(value)


def _slots(ref: QRef | None) -> set[tuple[int, int]]:
    if ref is None:
        return set()
    if ref.kind == "slot":
        return {(ref.root.uid, ref.index)}
    return {(r.uid, i) for r, i in ref.view or []}


def _assigns(body: list[ast.Node], var: str) -> bool:
    for st in body:
        for n in st.walk():
            if isinstance(n, (ast.Assignment, ast.CompoundAssignment)):
                t = n.target
                if isinstance(t, ast.Ident) and t.name == var:
                    return True
            if isinstance(n, ast.ClassicalDecl) and n.name == var:
                return True
    return False


def canonical_cfor(s: ast.ForCStyle):
    """Recognize ``for (int i = a; i <op> b; i += c)`` with ``c`` a literal and
    ``i`` not written in the body; returns ``(var, start, step, stop)`` with a
    half-open ``stop`` or None."""
    init = s.init
    if not isinstance(init, ast.ClassicalDecl) or init.init is None or init.type.kind not in ("int", "uint"):
        return None
    var = init.name
    upd = s.update
    step = None
    if isinstance(upd, ast.CompoundAssignment) and isinstance(upd.target, ast.Ident) and upd.target.name == var:
        if upd.op in ("+", "-") and isinstance(upd.value, ast.IntLit):
            step = upd.value.value if upd.op == "+" else -upd.value.value
    elif isinstance(upd, ast.Assignment) and isinstance(upd.target, ast.Ident) and upd.target.name == var:
        v = upd.value
        if (isinstance(v, ast.Binary) and v.op in ("+", "-") and isinstance(v.lhs, ast.Ident)
                and v.lhs.name == var and isinstance(v.rhs, ast.IntLit)):
            step = v.rhs.value if v.op == "+" else -v.rhs.value
    if not step:
        return None
    c = s.cond
    if not (isinstance(c, ast.Binary) and isinstance(c.lhs, ast.Ident) and c.lhs.name == var):
        return None
    if _assigns(s.body, var):
        return None
    for n in c.rhs.walk():
        if isinstance(n, ast.Ident) and n.name == var:
            return None
    bound = c.rhs
    one = ast.IntLit(1, loc=c.loc)
    if c.op == "<" and step > 0 or c.op == ">" and step < 0:
        stop = bound
    elif c.op == "<=" and step > 0:
        stop = ast.Binary("+", bound, one, loc=c.loc)
    elif c.op == ">=" and step < 0:
        stop = ast.Binary("-", bound, one, loc=c.loc)
    elif c.op == "!=" and abs(step) == 1:
        stop = bound
    else:
        return None
    return var, init.init, ast.IntLit(step, loc=s.loc), stop


def build_module(program: ast.Program) -> IrModule:
    """Translate a parsed program; raises CompileError with all diagnostics."""
    return IRBuilder().build(program)
