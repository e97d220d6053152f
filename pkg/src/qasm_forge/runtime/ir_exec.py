"""Direct interpretation of structured IR against a Runtime.

Used as the reference executor: the lowered program must agree with it.
"""
from __future__ import annotations

import sys

from ..ir import types as T
from ..ir.core import Block, IrModule, Operation, Value
from ..ir.semantics import ArithError, evaluate
from .core import Runtime
from .synthesis import QuantumRuntimeError


class Cell:
    __slots__ = ("data",)

    def __init__(self, elem: str, length: int | None):
        zero = 0.0 if T.is_float(elem) else (False if elem == T.BOOL else 0)
        self.data = [zero] * (1 if length is None else length)

    def index(self, k: int) -> int:
        if not 0 <= k < len(self.data):
            raise QuantumRuntimeError(f"array index {k} out of range for length {len(self.data)}")
        return k


class _Return(Exception):
    def __init__(self, values):
        self.values = values


def default_value(t: str):
    return 0.0 if T.is_float(t) else (False if t == T.BOOL else 0)


class IrInterpreter:
    def __init__(self, module: IrModule, runtime: Runtime):
        self.module = module
        self.rt = runtime

    def run(self, entry: str = "main") -> None:
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 20000))
        try:
            self.call(entry, [])
        finally:
            sys.setrecursionlimit(limit)
        self.rt.finalize()

    def call(self, name: str, args: list):
        fn = self.module.functions.get(name)
        if fn is None or fn.is_extern:
            raise QuantumRuntimeError(f"call to undefined function '{name}'")
        env: dict[Value, object] = dict(zip(fn.args, args))
        try:
            self.block(fn.entry, env)
        except _Return as r:
            return r.values
        return []

    def block(self, block: Block, env: dict) -> None:
        for op in block.ops:
            self.op(op, env)

    def op(self, op: Operation, env: dict) -> None:
        name = op.name
        rt = self.rt
        get = env.__getitem__
        if name.startswith(("arith.", "math.")):
            args = [get(v) for v in op.operands]
            try:
                env[op.result] = evaluate(name, op.attrs, args, [v.type for v in op.operands], op.result.type)
            except ArithError as exc:
                raise QuantumRuntimeError(str(exc)) from None
        elif name.startswith("qvs."):
            self.gate(op, env)
        elif name == "global.load":
            env[op.result] = self.module.globals[op.attrs["name"]].value
        elif name == "cell.alloca":
            t = op.result.type
            env[op.result] = Cell(T.cell_elem(t), T.cell_length(t))
        elif name == "cell.load":
            cell = get(op.operands[0])
            k = get(op.operands[1]) if len(op.operands) == 2 else (op.attrs.get("index") or 0)
            env[op.result] = cell.data[cell.index(k)]
        elif name == "cell.store":
            cell = get(op.operands[1])
            k = get(op.operands[2]) if len(op.operands) == 3 else (op.attrs.get("index") or 0)
            cell.data[cell.index(k)] = get(op.operands[0])
        elif name == "q.qalloc":
            env[op.result] = rt.qubit_allocate_array(op.attrs["size"])
        elif name == "q.dealloc":
            rt.qubit_release_array(get(op.operands[0]))
        elif name == "q.extract":
            k = get(op.operands[1]) if len(op.operands) == 2 else op.attrs["index"]
            env[op.result] = rt.array_get_element_ptr_1d(get(op.operands[0]), k)
        elif name == "q.slice":
            a = op.attrs
            env[op.result] = rt.array_slice(get(op.operands[0]), a["start"], a["step"], a["stop"])
        elif name == "q.concat":
            env[op.result] = rt.array_concatenate(get(op.operands[0]), get(op.operands[1]))
        elif name == "func.call":
            args = [get(v) for v in op.operands]
            if op.segment:
                rt.push_segment()
            results = self.call(op.attrs["callee"], args)
            if op.segment:
                rt.pop_segment()
            for r, v in zip(op.results, results):
                env[r] = v
        elif name == "func.return":
            raise _Return([get(v) for v in op.operands])
        elif name == "affine.for":
            self.loop(op, env)
        elif name == "scf.if":
            self.block(op.regions[0 if get(op.operands[0]) else 1].blocks[0], env)
        elif name == "scf.while":
            cond, body = op.regions[0].blocks[0], op.regions[1].blocks[0]
            while True:
                self.block(cond, env)
                if not env[cond.ops[-1].operands[0]]:
                    break
                self.block(body, env)
        elif name == "scf.condition":
            pass
        elif name == "q.ctrl_region":
            rt.start_region("ctrl", op.segment)
            self.block(op.regions[0].blocks[0], env)
            c = get(op.operands[0])
            rt.end_region("ctrl", c)
            env[op.result] = c
        elif name == "q.adj_region":
            rt.start_region("adj", op.segment)
            self.block(op.regions[0].blocks[0], env)
            rt.end_region("adj")
        elif name == "q.pow_region":
            k = get(op.operands[0]) if op.operands else op.attrs["power"]
            rt.start_region("pow", op.segment)
            self.block(op.regions[0].blocks[0], env)
            rt.end_region("pow", k)
        elif name == "rt.print":
            it = iter(op.operands)
            rt.print([get(next(it)) if f is None else f for f in op.attrs["fmt"]])
        else:
            raise QuantumRuntimeError(f"cannot interpret op '{name}'")

    def loop(self, op: Operation, env: dict) -> None:
        it = iter(op.operands)
        bounds = [op.attrs[k] if op.attrs.get(k) is not None else env[next(it)] for k in ("lb", "ub", "step")]
        lb, ub, step = (int(b) for b in bounds)
        if step == 0:
            raise QuantumRuntimeError("loop step is zero")
        body = op.regions[0].blocks[0]
        iv = body.args[0]
        for i in range(lb, ub, step):
            env[iv] = i
            self.block(body, env)

    def gate(self, op: Operation, env: dict) -> None:
        rt = self.rt
        g = op.gate
        if g == "mz":
            q = env[op.operands[0]]
            env[op.results[0]] = rt.mz(q, op.segment)
            env[op.results[1]] = q
            return
        if g == "reset":
            q = env[op.operands[0]]
            rt.reset(q, op.segment)
            env[op.result] = q
            return
        params = op.attrs["params"]
        ndyn = sum(1 for p in params if p is None)
        nq = len(op.operands) - ndyn
        dyn = iter(env[v] for v in op.operands[nq:])
        values = [float(next(dyn)) if p is None else p for p in params]
        qops = op.operands[:nq]
        sizes = [len(env[v]) for v in qops if T.is_qarray(v.type)]
        if sizes:
            for k in range(sizes[0]):
                qs = [env[v][k] if T.is_qarray(v.type) else env[v] for v in qops]
                rt.qis(g, values, qs, op.segment)
        else:
            rt.qis(g, values, [env[v] for v in qops], op.segment)
        scalars = [v for v in qops if v.type == T.QUBIT]
        for r, v in zip(op.results, scalars):
            env[r] = env[v]


def run_ir(module: IrModule, runtime: Runtime, entry: str = "main") -> Runtime:
    IrInterpreter(module, runtime).run(entry)
    return runtime
