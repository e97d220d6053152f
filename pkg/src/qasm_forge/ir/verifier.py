"""Structural checks over an IrModule.

Covers dominance (defined before use, respecting region nesting), exact
use lists, qubit linearity, per-opcode operand/result typing and region
termination.  Every problem becomes an error Diagnostic naming the op.
"""
from __future__ import annotations

from collections import Counter

from ..frontend.diagnostics import Diagnostic, error
from . import gates as G
from . import types as T
from .core import Block, FunctionDef, IrModule, Operation, Value

_INT_ARITH = {"addi", "subi", "muli", "divsi", "remsi", "andi", "ori", "xori", "shli", "shrsi", "maxsi", "minsi", "powi"}
_FLOAT_ARITH = {"addf", "subf", "mulf", "divf", "remf", "powf"}
_INT_PREDICATES = {"eq", "ne", "slt", "sle", "sgt", "sge"}
_FLOAT_PREDICATES = {"oeq", "one", "olt", "ole", "ogt", "oge"}
MATH_OPS = {"sin", "cos", "tan", "arcsin", "arccos", "arctan", "asin", "acos", "atan",
            "exp", "ln", "log", "sqrt", "floor", "ceil", "abs"}



class _Verifier:
    def __init__(self, module: IrModule):
        self.module = module
        self.diags: list[Diagnostic] = []

    def err(self, op: Operation | None, msg: str) -> None:
        where = f"'{op.name}': " if op is not None else ""
        self.diags.append(error(f"verifier: {where}{msg}"))

    def run(self) -> list[Diagnostic]:
        for g in self.module.globals.values():
            if not T.is_valid(g.type) or not T.is_numeric(g.type):
                self.diags.append(error(f"verifier: global @{g.name} has invalid type {g.type}"))
        for fn in self.module.functions.values():
            self.function(fn)
        return self.diags

    def function(self, fn: FunctionDef) -> None:
        if fn.is_extern:
            return
        if len(fn.body.blocks) != 1:
            self.err(None, f"function @{fn.name} must have exactly one block in structured form")
        entry = fn.entry
        if [a.type for a in entry.args] != list(fn.arg_types):
            self.err(None, f"function @{fn.name} entry block arguments do not match its signature")
        term = entry.ops[-1] if entry.ops else None
        if term is None or term.name != "func.return":
            self.err(None, f"function @{fn.name} does not end with return")
        else:
            types = [v.type for v in term.operands]
            if types != list(fn.result_types):
                self.err(term, f"returns ({', '.join(types)}) but @{fn.name} declares ({', '.join(fn.result_types)})")
        self.fn = fn
        self.block(entry, set(entry.args), top=True)
        # exact use lists and linearity
        counted: Counter[Value] = Counter()
        users: dict[Value, Counter] = {}
        defined: list[Value] = list(entry.args)
        for op in fn.walk():
            for v in op.operands:
                counted[v] += 1
                users.setdefault(v, Counter())[id(op)] += 1
            defined.extend(op.results)
            for region in op.regions:
                for b in region.blocks:
                    defined.extend(b.args)
        for v in defined:
            expected = counted.get(v, 0)
            if len(v.uses) != expected:
                self.err(v.defining_op, f"use list of value #{v.uid} has {len(v.uses)} entries, expected {expected}")
            elif expected and Counter(id(o) for o in v.uses) != users[v]:
                self.err(v.defining_op, f"use list of value #{v.uid} does not match its users")
            if v.type == T.QUBIT and expected > 1:
                self.err(v.defining_op, f"qubit value #{v.uid} is used {expected} times (linearity)")

    def block(self, block: Block, visible: set[Value], top: bool = False) -> None:
        visible = set(visible) | set(block.args)
        for i, op in enumerate(block.ops):
            if op.parent is not block:
                self.err(op, "parent link is inconsistent")
            for v in op.operands:
                if v not in visible:
                    self.err(op, f"operand #{v.uid} ({v.type}) does not dominate its use")
            if op.name in ("func.return", "scf.condition") and i != len(block.ops) - 1:
                self.err(op, "terminator in the middle of a block")
            if op.name == "func.return" and not top:
                self.err(op, "return inside a nested region")
            self.check_op(op)
            for region in op.regions:
                if len(region.blocks) != 1:
                    self.err(op, "structured regions must have exactly one block")
                for b in region.blocks:
                    if b.parent is not region:
                        self.err(op, "block parent link is inconsistent")
                    self.block(b, visible)
            visible.update(op.results)

    # -- per-opcode typing -------------------------------------------------

    def check_op(self, op: Operation) -> None:
        name = op.name
        ot = [v.type for v in op.operands]
        rt = [r.type for r in op.results]
        for t in ot + rt:
            if not T.is_valid(t):
                self.err(op, f"invalid type {t}")
                return

        def need(cond: bool, msg: str) -> bool:
            if not cond:
                self.err(op, msg)
            return cond

        nreg = len(op.regions)
        if name == "arith.constant":
            v = op.attrs.get("value")
            need(not ot and len(rt) == 1 and T.is_numeric(rt[0]), "expects no operands and one numeric result")
            need(isinstance(v, (int, float, bool)), "missing numeric 'value' attribute")
            if rt and T.is_float(rt[0]):
                need(isinstance(v, float), "float constant needs a float value")
        elif name.startswith("arith."):
            kind = name[6:]
            if kind in _INT_ARITH:
                need(len(ot) == 2 and ot[0] == ot[1] and T.is_integral(ot[0]) and rt == [ot[0]],
                     f"expects two equal integer operands and a matching result, got {ot} -> {rt}")
            elif kind in _FLOAT_ARITH:
                need(len(ot) == 2 and ot[0] == ot[1] and T.is_float(ot[0]) and rt == [ot[0]],
                     f"expects two equal float operands and a matching result, got {ot} -> {rt}")
            elif kind == "negf":
                need(len(ot) == 1 and T.is_float(ot[0]) and rt == ot, "expects one float operand")
            elif kind == "cmpi":
                need(len(ot) == 2 and ot[0] == ot[1] and T.is_integral(ot[0]) and rt == [T.BOOL]
                     and op.attrs.get("predicate") in _INT_PREDICATES, "malformed integer comparison")
            elif kind == "cmpf":
                need(len(ot) == 2 and ot[0] == ot[1] and T.is_float(ot[0]) and rt == [T.BOOL]
                     and op.attrs.get("predicate") in _FLOAT_PREDICATES, "malformed float comparison")
            elif kind == "cast":
                need(len(ot) == 1 and len(rt) == 1 and T.is_numeric(ot[0]) and T.is_numeric(rt[0]),
                     "expects one numeric operand and one numeric result")
            elif kind == "select":
                need(len(ot) == 3 and ot[0] == T.BOOL and ot[1] == ot[2] and rt == [ot[1]], "malformed select")
            else:
                self.err(op, "unknown arith opcode")
        elif name.startswith("math."):
            need(name[5:] in MATH_OPS, "unknown math function")
            need(ot == [T.F64] and rt == [T.F64], "math functions take and return f64")
        elif name == "global.load":
            g = self.module.globals.get(op.attrs.get("name"))
            if need(g is not None, f"unknown global @{op.attrs.get('name')}"):
                need(rt == [g.type] and not ot, "result type must match the global")
        elif name == "cell.alloca":
            need(not ot and len(rt) == 1 and T.is_cell(rt[0]), "expects one cell result")
        elif name in ("cell.load", "cell.store"):
            store = name == "cell.store"
            base = 1 if store else 0
            if not need(len(ot) in (base + 1, base + 2) and T.is_cell(ot[base]), "malformed cell access"):
                return
            ct = ot[base]
            elem = T.cell_elem(ct)
            length = T.cell_length(ct)
            dyn = len(ot) == base + 2
            idx = op.attrs.get("index")
            if length is None:
                need(not dyn and idx is None, "scalar cell accessed with an index")
            elif dyn:
                need(T.is_integral(ot[base + 1]) and idx is None, "dynamic cell index must be integral")
            else:
                need(isinstance(idx, int) and 0 <= idx < length, f"cell index {idx} out of range")
            if store:
                need(ot[0] == elem and not rt, f"stored value type {ot[0]} does not match cell element {elem}")
            else:
                need(rt == [elem], "loaded type must match the cell element")
        elif name == "q.qalloc":
            size = op.attrs.get("size")
            need(not ot and isinstance(size, int) and size >= 1 and rt == [T.qarray(size)], "malformed qalloc")
        elif name == "q.dealloc":
            need(len(ot) == 1 and T.is_qarray(ot[0]) and not rt, "expects one qubit array")
        elif name == "q.extract":
            if need(len(ot) in (1, 2) and T.is_qarray(ot[0]) and rt == [T.QUBIT], "malformed extract"):
                size = T.qarray_size(ot[0])
                if len(ot) == 2:
                    need(T.is_integral(ot[1]) and op.attrs.get("index") is None, "dynamic index must be integral")
                else:
                    idx = op.attrs.get("index")
                    need(isinstance(idx, int) and idx >= 0 and (size is None or idx < size),
                         f"extract index {idx} out of range")
        elif name == "q.slice":
            if need(len(ot) == 1 and T.is_qarray(ot[0]) and len(rt) == 1 and T.is_qarray(rt[0]), "malformed slice"):
                a = op.attrs
                if need(all(isinstance(a.get(k), int) for k in ("start", "step", "stop")) and a["step"] != 0,
                        "slice bounds must be integers with non-zero step"):
                    n = len(range(a["start"], a["stop"] + (1 if a["step"] > 0 else -1), a["step"]))
                    need(T.qarray_size(rt[0]) in (n, None), "slice result size does not match its bounds")
        elif name == "q.concat":
            if need(len(ot) == 2 and all(T.is_qarray(t) for t in ot) and len(rt) == 1 and T.is_qarray(rt[0]),
                    "malformed concat"):
                sa, sb = T.qarray_size(ot[0]), T.qarray_size(ot[1])
                if sa is not None and sb is not None:
                    need(T.qarray_size(rt[0]) == sa + sb, "concat result size mismatch")
        elif name.startswith("qvs."):
            self.check_gate(op, ot, rt)
        elif name == "func.call":
            callee = self.module.functions.get(op.attrs.get("callee"))
            if need(callee is not None, f"call to unknown function @{op.attrs.get('callee')}"):
                need(ot == list(callee.arg_types) and rt == list(callee.result_types),
                     f"call signature ({', '.join(ot)}) -> ({', '.join(rt)}) does not match @{callee.name}")
        elif name == "func.return":
            need(not rt, "return has no results")
        elif name == "affine.for":
            a = op.attrs
            dyn = sum(1 for k in ("lb", "ub", "step") if a.get(k) is None)
            need(len(ot) == dyn and all(t == T.INDEX for t in ot), "loop needs one index operand per dynamic bound")
            need(not isinstance(a.get("step"), int) or a["step"] != 0, "loop step must be non-zero")
            if need(nreg == 1, "loop needs exactly one region") and op.regions[0].blocks:
                b = op.regions[0].blocks[0]
                need([x.type for x in b.args] == [T.INDEX], "loop body takes one index argument")
                need(b.terminator is None, "loop body must not end in a terminator")
            need(not rt, "loop has no results")
        elif name == "scf.if":
            need(ot == [T.BOOL] and nreg == 2 and not rt, "if takes an i1 condition and two regions")
            for r in op.regions:
                for b in r.blocks:
                    need(not b.args and b.terminator is None, "if regions take no arguments and have no terminator")
        elif name == "scf.while":
            if need(not ot and nreg == 2 and not rt, "while takes no operands and two regions"):
                cond = op.regions[0].blocks[0]
                t = cond.terminator
                need(t is not None and t.name == "scf.condition", "while condition region must end in scf.condition")
                need(op.regions[1].blocks[0].terminator is None, "while body must not end in a terminator")
        elif name == "scf.condition":
            need(ot == [T.BOOL] and not rt, "condition takes one i1")
            parent = op.parent_op
            need(parent is not None and parent.name == "scf.while", "condition outside a while op")
        elif name == "q.ctrl_region":
            need(ot == [T.QUBIT] and rt == [T.QUBIT] and nreg == 1, "ctrl region takes and returns one qubit")
        elif name == "q.adj_region":
            need(not ot and not rt and nreg == 1, "adj region takes no operands")
        elif name == "q.pow_region":
            p = op.attrs.get("power", None)
            if p is None:
                need(len(ot) == 1 and T.is_integral(ot[0]), "dynamic power needs one integer operand")
            else:
                need(not ot and isinstance(p, int), "static power must be an integer")
            need(not rt and nreg == 1, "pow region has one region and no results")
        elif name == "rt.print":
            fmt = op.attrs.get("fmt")
            need(isinstance(fmt, list) and sum(1 for f in fmt if f is None) == len(ot), "print format mismatch")
            need(all(T.is_numeric(t) for t in ot), "print operands must be numeric")
        else:
            self.err(op, "unknown opcode")
        seg = op.attrs.get("segment")
        if seg is not None:
            need(seg in ("compute", "uncompute"), f"bad segment flag {seg!r}")
        if op.name in ("q.ctrl_region", "q.adj_region", "q.pow_region"):
            for r in op.regions:
                for b in r.blocks:
                    need(b.terminator is None and not b.args, "modifier regions take no arguments")

    def check_gate(self, op: Operation, ot: list[str], rt: list[str]) -> None:
        g = op.gate
        if g == "mz":
            if not (ot == [T.QUBIT] and rt == [T.BOOL, T.QUBIT]):
                self.err(op, "mz takes one qubit and returns (i1, !qubit)")
            return
        if g == "reset":
            if not (ot == [T.QUBIT] and rt == [T.QUBIT]):
                self.err(op, "reset takes and returns one qubit")
            return
        info = G.GATES.get(g)
        if info is None:
            self.err(op, f"unknown gate {g}")
            return
        params = op.attrs.get("params")
        if not isinstance(params, list) or len(params) != info.num_params:
            self.err(op, f"gate {g} needs {info.num_params} parameter slot(s)")
            return
        ndyn = sum(1 for p in params if p is None)
        qops = ot[: len(ot) - ndyn]
        dops = ot[len(ot) - ndyn:]
        if len(qops) != info.num_qubits or not all(T.is_quantum(t) for t in qops):
            self.err(op, f"gate {g} needs {info.num_qubits} qubit operand(s), got {qops}")
            return
        if any(t != T.F64 for t in dops):
            self.err(op, f"dynamic gate parameters must be f64, got {dops}")
        scalars = [t for t in qops if t == T.QUBIT]
        if rt != [T.QUBIT] * len(scalars):
            self.err(op, f"gate {g} must return one qubit per scalar qubit operand")
        sizes = {T.qarray_size(t) for t in qops if T.is_qarray(t)}
        if len(sizes) > 1:
            self.err(op, "broadcast over registers of different sizes")


def verify(module: IrModule) -> list[Diagnostic]:
    """Return the list of well-formedness violations (empty when valid)."""
    return _Verifier(module).run()
