"""Structured IR to branch-based LIR.

Qubit SSA chains collapse here: every result of a gate, measurement,
reset or ctrl region maps to the same handle register as the operand it
came from, so all calls along a chain see the root qubit.
"""
from __future__ import annotations

from ..frontend.diagnostics import InternalCompilerError
from ..ir import types as T
from ..ir.core import Block, FunctionDef, IrModule, Operation, Value
from .lir import ARRAY, QIS, QUBIT, RESULT, RT, Imm, Inst, LirBlock, LirFunction, LirModule, Reg, check_module


def handle_type(t: str) -> str:
    if t == T.QUBIT:
        return QUBIT
    if T.is_qarray(t):
        return ARRAY
    if T.is_cell(t):
        return "!ptr"
    return t


class _FunctionLowering:
    def __init__(self, module: IrModule, fn: FunctionDef):
        self.module = module
        self.fn = fn
        self.values: dict[Value, object] = {}
        self.nreg = 0
        self.nblock = 0
        self.blocks: list[LirBlock] = []
        self.cur = self.new_block()

    # -- plumbing ---------------------------------------------------------------

    def reg(self, type_: str) -> Reg:
        r = Reg(str(self.nreg), type_)
        self.nreg += 1
        return r

    def new_block(self) -> LirBlock:
        b = LirBlock(f"bb{self.nblock}")
        self.nblock += 1
        self.blocks.append(b)
        return b

    def emit(self, inst: Inst) -> Inst:
        self.cur.insts.append(inst)
        return inst

    def call(self, symbol: str, args=(), result_type: str | None = None, segment: str | None = None):
        res = self.reg(result_type) if result_type else None
        attrs = {"segment": segment} if segment else {}
        self.emit(Inst("call", res, symbol, list(args), attrs=attrs))
        return res

    def branch(self, target: LirBlock) -> None:
        self.emit(Inst("br", targets=[target.label]))

    def get(self, v: Value):
        try:
            return self.values[v]
        except KeyError:
            raise InternalCompilerError(f"lowering: value #{v.uid} used before definition") from None

    def index_imm(self, k: int) -> Imm:
        return Imm(int(k), T.I64)

    # -- driver ---------------------------------------------------------------------

    def run(self) -> LirFunction:
        params = []
        for v in self.fn.args:
            r = self.reg(handle_type(v.type))
            self.values[v] = r
            params.append(r)
        self.block(self.fn.entry)
        return LirFunction(self.fn.name, params, [handle_type(t) for t in self.fn.result_types], self.blocks)

    def block(self, block: Block) -> None:
        for op in block.ops:
            self.op(op)

    def op(self, op: Operation) -> None:
        name = op.name
        if name == "arith.constant":
            r = self.reg(op.result.type)
            self.emit(Inst("const", r, args=[Imm(op.attrs["value"], op.result.type)]))
            self.values[op.result] = r
        elif name.startswith(("arith.", "math.")):
            r = self.reg(op.result.type)
            attrs = {"predicate": op.attrs["predicate"]} if "predicate" in op.attrs else {}
            self.emit(Inst("arith", r, name, [self.get(v) for v in op.operands], attrs=attrs))
            self.values[op.result] = r
        elif name == "global.load":
            r = self.reg(op.result.type)
            self.emit(Inst("load", r, attrs={"global": op.attrs["name"]}))
            self.values[op.result] = r
        elif name == "cell.alloca":
            t = op.result.type
            r = self.reg("!ptr")
            self.emit(Inst("alloca", r, attrs={"elem": T.cell_elem(t), "length": T.cell_length(t)}))
            self.values[op.result] = r
        elif name == "cell.load":
            r = self.reg(op.result.type)
            self.emit(Inst("load", r, args=self.cell_address(op.operands, op.attrs)))
            self.values[op.result] = r
        elif name == "cell.store":
            addr = self.cell_address(op.operands[1:], op.attrs)
            self.emit(Inst("store", args=[self.get(op.operands[0])] + addr))
        elif name == "q.qalloc":
            self.values[op.result] = self.call(RT + "qubit_allocate_array", [self.index_imm(op.attrs["size"])], ARRAY)
        elif name == "q.dealloc":
            self.call(RT + "qubit_release_array", [self.get(op.operands[0])])
        elif name == "q.extract":
            idx = self.get(op.operands[1]) if len(op.operands) == 2 else self.index_imm(op.attrs["index"])
            self.values[op.result] = self.call(RT + "array_get_element_ptr_1d", [self.get(op.operands[0]), idx], QUBIT)
        elif name == "q.slice":
            a = op.attrs
            args = [self.get(op.operands[0])] + [self.index_imm(a[k]) for k in ("start", "step", "stop")]
            self.values[op.result] = self.call(RT + "array_slice", args, ARRAY)
        elif name == "q.concat":
            args = [self.get(v) for v in op.operands]
            self.values[op.result] = self.call(RT + "array_concatenate", args, ARRAY)
        elif name.startswith("qvs."):
            self.gate(op)
        elif name == "func.call":
            rtypes = [handle_type(r.type) for r in op.results]
            if len(rtypes) > 1:
                raise InternalCompilerError("lowering: calls with several results are not supported")
            res = self.call(op.attrs["callee"], [self.get(v) for v in op.operands],
                            rtypes[0] if rtypes else None, op.segment)
            if op.results:
                self.values[op.result] = res
        elif name == "func.return":
            if self.fn.name == "main":
                self.call(RT + "finalize")
            self.emit(Inst("ret", args=[self.get(v) for v in op.operands]))
        elif name == "affine.for":
            self.loop(op)
        elif name == "scf.if":
            self.if_(op)
        elif name == "scf.while":
            self.while_(op)
        elif name in ("q.ctrl_region", "q.adj_region", "q.pow_region"):
            self.region(op)
        elif name == "rt.print":
            it = iter(op.operands)
            args = [self.get(next(it)) if f is None else Imm(str(f), "!str") for f in op.attrs["fmt"]]
            self.call(RT + "print", args)
        else:
            raise InternalCompilerError(f"lowering: no lowering for op '{name}'")

    def cell_address(self, operands, attrs) -> list:
        addr = [self.get(operands[0])]
        if len(operands) == 2:
            addr.append(self.get(operands[1]))
        elif attrs.get("index") is not None:
            addr.append(self.index_imm(attrs["index"]))
        return addr

    # -- quantum ----------------------------------------------------------------------

    def gate(self, op: Operation) -> None:
        g = op.gate
        seg = op.segment
        if g == "mz":
            q = self.get(op.operands[0])
            res = self.call(QIS + "mz", [q], RESULT, seg)
            bit = self.reg(T.BOOL)
            self.emit(Inst("read_result", bit, args=[res]))
            self.values[op.results[0]] = bit
            self.values[op.results[1]] = q
            return
        if g == "reset":
            q = self.get(op.operands[0])
            self.call(QIS + "reset", [q], None, seg)
            self.values[op.result] = q
            return
        params = op.attrs["params"]
        ndyn = sum(1 for p in params if p is None)
        nq = len(op.operands) - ndyn
        dyn = iter(op.operands[nq:])
        pargs = [self.get(next(dyn)) if p is None else Imm(float(p), T.F64) for p in params]
        qops = op.operands[:nq]
        arrays = [v for v in qops if T.is_qarray(v.type)]
        if arrays:
            size = T.qarray_size(arrays[0].type)
            if size is None:
                raise InternalCompilerError("lowering: broadcast over a register of unknown size")
            for k in range(size):
                qs = []
                for v in qops:
                    if T.is_qarray(v.type):
                        qs.append(self.call(RT + "array_get_element_ptr_1d", [self.get(v), self.index_imm(k)], QUBIT))
                    else:
                        qs.append(self.get(v))
                self.call(QIS + g, pargs + qs, None, seg)
        else:
            self.call(QIS + g, pargs + [self.get(v) for v in qops], None, seg)
        scalars = [v for v in qops if v.type == T.QUBIT]
        for r, v in zip(op.results, scalars):
            self.values[r] = self.get(v)

    def region(self, op: Operation) -> None:
        kind = op.name[2:-7]  # q.ctrl_region -> ctrl
        seg = op.segment
        self.call(f"{RT}start_{kind}_u_region", [], None, seg)
        self.block(op.regions[0].blocks[0])
        if kind == "ctrl":
            c = self.get(op.operands[0])
            self.call(f"{RT}end_ctrl_u_region", [c], None, seg)
            self.values[op.result] = c
        elif kind == "pow":
            k = self.get(op.operands[0]) if op.operands else Imm(int(op.attrs["power"]), T.I64)
            self.call(f"{RT}end_pow_u_region", [k], None, seg)
        else:
            self.call(f"{RT}end_adj_u_region", [], None, seg)

    # -- control flow -------------------------------------------------------------------

    def loop(self, op: Operation) -> None:
        it = iter(op.operands)
        lb, ub, step = (Imm(op.attrs[k], T.INDEX) if op.attrs.get(k) is not None else self.get(next(it))
                        for k in ("lb", "ub", "step"))
        cell = self.reg("!ptr")
        self.emit(Inst("alloca", cell, attrs={"elem": T.INDEX, "length": None}))
        self.emit(Inst("store", args=[lb, cell]))
        header, body, exit_ = self.new_block(), self.new_block(), self.new_block()
        self.branch(header)

        self.cur = header
        i = self.reg(T.INDEX)
        self.emit(Inst("load", i, args=[cell]))
        if isinstance(step, Imm):
            cond = self.reg(T.BOOL)
            pred = "slt" if step.value > 0 else "sgt"
            self.emit(Inst("arith", cond, "arith.cmpi", [i, ub], attrs={"predicate": pred}))
        else:
            up, down, pos, cond = (self.reg(T.BOOL) for _ in range(4))
            self.emit(Inst("arith", up, "arith.cmpi", [i, ub], attrs={"predicate": "slt"}))
            self.emit(Inst("arith", down, "arith.cmpi", [i, ub], attrs={"predicate": "sgt"}))
            self.emit(Inst("arith", pos, "arith.cmpi", [step, Imm(0, T.INDEX)], attrs={"predicate": "sgt"}))
            self.emit(Inst("arith", cond, "arith.select", [pos, up, down]))
        self.emit(Inst("cond_br", args=[cond], targets=[body.label, exit_.label]))

        self.cur = body
        self.values[op.regions[0].blocks[0].args[0]] = i
        self.block(op.regions[0].blocks[0])
        nxt = self.reg(T.INDEX)
        self.emit(Inst("arith", nxt, "arith.addi", [i, step]))
        self.emit(Inst("store", args=[nxt, cell]))
        self.branch(header)
        self.cur = exit_

    def if_(self, op: Operation) -> None:
        then, else_, join = self.new_block(), self.new_block(), self.new_block()
        self.emit(Inst("cond_br", args=[self.get(op.operands[0])], targets=[then.label, else_.label]))
        for blk, region in ((then, op.regions[0]), (else_, op.regions[1])):
            self.cur = blk
            self.block(region.blocks[0])
            self.branch(join)
        self.cur = join

    def while_(self, op: Operation) -> None:
        header, body, exit_ = self.new_block(), self.new_block(), self.new_block()
        self.branch(header)
        self.cur = header
        cond_block = op.regions[0].blocks[0]
        for inner in cond_block.ops[:-1]:
            self.op(inner)
        self.emit(Inst("cond_br", args=[self.get(cond_block.ops[-1].operands[0])], targets=[body.label, exit_.label]))
        self.cur = body
        self.block(op.regions[1].blocks[0])
        self.branch(header)
        self.cur = exit_


def lower_to_cfg(module: IrModule) -> LirModule:
    """Lower a verified structured module; main is emitted first."""
    lir = LirModule()
    for g in module.globals.values():
        lir.globals[g.name] = Imm(g.value, g.type)
    names = sorted(module.functions, key=lambda n: (n != "main", 0))
    for name in names:
        fn = module.functions[name]
        if fn.is_extern:
            continue
        lir.functions[name] = _FunctionLowering(module, fn).run()
    check_module(lir)
    return lir
