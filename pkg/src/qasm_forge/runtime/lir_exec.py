"""Interpreter for lowered programs.

Each instruction is turned into a closure over a register list once, so
the run loop only calls closures and follows branches.  Runtime symbols
are bound to a :class:`Runtime`; other calls go to LIR functions.
"""
from __future__ import annotations

import operator
import sys

from ..ir import types as T
from ..ir.semantics import ArithError, evaluate
from ..lowering.lir import HANDLES, QIS, QUBIT, RT, Imm, Inst, LirFunction, LirModule
from .core import Runtime
from .ir_exec import Cell
from .synthesis import QuantumRuntimeError


class _Result:
    __slots__ = ("bit",)

    def __init__(self, bit: bool):
        self.bit = bit


_INDEX_OPS = {"arith.addi": operator.add, "arith.subi": operator.sub, "arith.muli": operator.mul}
_FLOAT_OPS = {"arith.addf": operator.add, "arith.subf": operator.sub, "arith.mulf": operator.mul}
_CMP = {"eq": operator.eq, "ne": operator.ne, "slt": operator.lt, "sle": operator.le,
        "sgt": operator.gt, "sge": operator.ge, "oeq": operator.eq, "olt": operator.lt,
        "ole": operator.le, "ogt": operator.gt, "oge": operator.ge}


def _arith_fn(inst: Inst):
    """Python callable computing ``inst`` from its argument values."""
    op, types, rtype = inst.op, [a.type for a in inst.args], inst.result.type
    if op in _INDEX_OPS and types[0] == T.INDEX:
        return _INDEX_OPS[op]
    if op in _INDEX_OPS and T.is_int(types[0]) and types[0] != T.BOOL:
        f = _INDEX_OPS[op]
        w = T.width(rtype)
        mask, half, full = (1 << w) - 1, 1 << (w - 1), 1 << w

        def wrapped(a, b):
            v = f(a, b) & mask
            return v - full if v >= half else v
        return wrapped
    if op in _FLOAT_OPS:
        return _FLOAT_OPS[op]
    if op == "arith.cmpi" and inst.attrs["predicate"] in _CMP:
        return _CMP[inst.attrs["predicate"]]
    if op == "arith.cast":
        src = types[0]
        if T.is_float(rtype):
            return float
        if rtype == T.INDEX and T.is_integral(src):
            return int
        if src == T.INDEX and T.is_int(rtype) and rtype != T.BOOL:
            w = T.width(rtype)
            mask, half, full = (1 << w) - 1, 1 << (w - 1), 1 << w

            def narrowed(a):
                v = a & mask
                return v - full if v >= half else v
            return narrowed
    attrs = inst.attrs

    def generic(*args):
        return evaluate(op, attrs, list(args), types, rtype)
    return generic


class LirInterpreter:
    def __init__(self, lir: LirModule, runtime: Runtime):
        self.lir = lir
        self.rt = runtime
        self.globals = {name: imm.value for name, imm in lir.globals.items()}
        self.compiled: dict[str, tuple] = {}

    def run(self, entry: str = "main") -> None:
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 20000))
        try:
            self.call(entry, [])
        finally:
            sys.setrecursionlimit(limit)

    # -- compilation to closures --------------------------------------------------

    def _prepare(self, name: str):
        fn = self.lir.functions.get(name)
        if fn is None:
            raise QuantumRuntimeError(f"call to undefined function '{name}'")
        prepared = self.compiled.get(name)
        if prepared is None:
            prepared = self.compiled[name] = self._compile_function(fn)
        return fn, prepared

    def _compile_function(self, fn: LirFunction):
        slots: dict[str, int] = {}

        def slot(name: str) -> int:
            return slots.setdefault(name, len(slots))

        for p in fn.params:
            slot(p.name)
        index = {b.label: i for i, b in enumerate(fn.blocks)}
        blocks = []
        for b in fn.blocks:
            body = [self._compile_inst(i, slot) for i in b.insts[:-1]]
            blocks.append((body, self._compile_term(b.insts[-1], slot, index)))
        return blocks, [slot(p.name) for p in fn.params], slots

    def _getter(self, a, slot):
        if isinstance(a, Imm):
            v = a.value
            return lambda regs: v
        k = slot(a.name)
        return lambda regs: regs[k]

    def _compile_term(self, inst: Inst, slot, index):
        if inst.kind == "ret":
            getters = [self._getter(a, slot) for a in inst.args]
            return ("ret", getters)
        if inst.kind == "br":
            return ("br", index[inst.targets[0]])
        cond = self._getter(inst.args[0], slot)
        return ("cond_br", cond, index[inst.targets[0]], index[inst.targets[1]])

    def _compile_inst(self, inst: Inst, slot):
        k = inst.kind
        out = slot(inst.result.name) if inst.result is not None else None
        gets = [self._getter(a, slot) for a in inst.args]
        if k == "const":
            v = inst.args[0].value

            def run(regs):
                regs[out] = v
        elif k == "arith":
            f = _arith_fn(inst)
            if len(gets) == 1:
                g0 = gets[0]

                def run(regs):
                    regs[out] = f(g0(regs))
            elif len(gets) == 2:
                g0, g1 = gets

                def run(regs):
                    regs[out] = f(g0(regs), g1(regs))
            else:
                def run(regs):
                    regs[out] = f(*[g(regs) for g in gets])
        elif k == "alloca":
            elem, length = inst.attrs["elem"], inst.attrs["length"]

            def run(regs):
                regs[out] = Cell(elem, length)
        elif k == "load":
            if "global" in inst.attrs:
                v = self.globals[inst.attrs["global"]]

                def run(regs):
                    regs[out] = v
            elif len(gets) == 1:
                g0 = gets[0]

                def run(regs):
                    regs[out] = g0(regs).data[0]
            else:
                g0, g1 = gets

                def run(regs):
                    cell = g0(regs)
                    regs[out] = cell.data[cell.index(g1(regs))]
        elif k == "store":
            if len(gets) == 2:
                gv, gc = gets

                def run(regs):
                    gc(regs).data[0] = gv(regs)
            else:
                gv, gc, gi = gets

                def run(regs):
                    cell = gc(regs)
                    cell.data[cell.index(gi(regs))] = gv(regs)
        elif k == "read_result":
            g0 = gets[0]

            def run(regs):
                regs[out] = g0(regs).bit
        elif k == "call":
            run = self._compile_call(inst, gets, out)
        else:
            raise QuantumRuntimeError(f"cannot execute instruction kind '{k}'")
        return run

    def _compile_call(self, inst: Inst, gets, out):
        sym = inst.op
        seg = inst.attrs.get("segment")
        rt = self.rt

        def store(regs, value):
            if out is not None:
                regs[out] = value

        if sym.startswith(QIS):
            gate = sym[len(QIS):]
            if gate == "mz":
                g0 = gets[0]
                return lambda regs: store(regs, _Result(rt.mz(g0(regs), seg)))
            if gate == "reset":
                g0 = gets[0]
                return lambda regs: rt.reset(g0(regs), seg)
            qg = [g for a, g in zip(inst.args, gets) if a.type == QUBIT]
            pg = [g for a, g in zip(inst.args, gets) if a.type not in HANDLES]
            qis = rt.qis
            return lambda regs: qis(gate, [g(regs) for g in pg], [g(regs) for g in qg], seg)
        if sym.startswith(RT):
            what = sym[len(RT):]
            if what.startswith("start_") and what.endswith("_u_region"):
                kind = what[6:-9]
                return lambda regs: rt.start_region(kind, seg)
            if what.startswith("end_") and what.endswith("_u_region"):
                kind = what[4:-9]
                g0 = gets[0] if gets else (lambda regs: None)
                return lambda regs: rt.end_region(kind, g0(regs))
            if what == "print":
                return lambda regs: rt.print([g(regs) for g in gets])
            method = getattr(rt, what, None)
            if method is None:
                raise QuantumRuntimeError(f"unknown runtime symbol '{sym}'")
            return lambda regs: store(regs, method(*[g(regs) for g in gets]))

        def run(regs):
            args = [g(regs) for g in gets]
            if seg:
                rt.push_segment()
            results = self.call(sym, args)
            if seg:
                rt.pop_segment()
            store(regs, results[0] if results else None)
        return run

    # -- execution ---------------------------------------------------------------

    def call(self, name: str, args: list):
        try:
            return self._call(name, args)
        except ArithError as exc:
            raise QuantumRuntimeError(str(exc)) from None

    def _call(self, name: str, args: list):
        _, (blocks, params, slots) = self._prepare(name)
        regs = [None] * len(slots)
        for k, a in zip(params, args):
            regs[k] = a
        body, term = blocks[0]
        while True:
            for run in body:
                run(regs)
            kind = term[0]
            if kind == "ret":
                return [g(regs) for g in term[1]]
            if kind == "br":
                body, term = blocks[term[1]]
            else:
                body, term = blocks[term[2] if term[1](regs) else term[3]]


def run_lir(lir: LirModule, runtime: Runtime, entry: str = "main") -> Runtime:
    LirInterpreter(lir, runtime).run(entry)
    return runtime
