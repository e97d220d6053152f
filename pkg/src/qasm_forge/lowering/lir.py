"""Branch-based low-level IR: runtime calls on opaque handles.

Quantum data only exists as handles (``!Qubit``, ``!Array``, ``!Result``)
passed to runtime symbols; control flow is explicit blocks and branches.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

QIS = "__quantum__qis__"
RT = "__quantum__rt__"

QUBIT, ARRAY, RESULT = "!Qubit", "!Array", "!Result"
HANDLES = frozenset({QUBIT, ARRAY, RESULT})

RT_SYMBOLS = frozenset(RT + s for s in (
    "qubit_allocate_array", "array_get_element_ptr_1d", "qubit_release_array", "finalize",
    "array_slice", "array_concatenate",
    "start_ctrl_u_region", "end_ctrl_u_region", "start_adj_u_region", "end_adj_u_region",
    "start_pow_u_region", "end_pow_u_region", "print",
))

TERMINATOR_KINDS = frozenset({"br", "cond_br", "ret"})


@dataclass(frozen=True)
class Reg:
    name: str
    type: str

    def __str__(self) -> str:
        return f"%{self.name}"


@dataclass(frozen=True)
class Imm:
    value: object
    type: str

    def __str__(self) -> str:
        v = self.value
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, str):
            return json.dumps(v)
        return repr(v)


@dataclass
class Inst:
    """One instruction.

    kind is one of call, const, arith, load, store, alloca, read_result,
    br, cond_br, ret.  ``op`` is the callee symbol for calls and the
    opcode for arith; ``attrs`` holds predicates, the segment flag, the
    global name of a global load, and cell shapes.
    """
    kind: str
    result: Reg | None = None
    op: str | None = None
    args: list = field(default_factory=list)
    targets: list[str] = field(default_factory=list)
    attrs: dict = field(default_factory=dict)

    @property
    def is_terminator(self) -> bool:
        return self.kind in TERMINATOR_KINDS


@dataclass
class LirBlock:
    label: str
    insts: list[Inst] = field(default_factory=list)


@dataclass
class LirFunction:
    name: str
    params: list[Reg]
    result_types: list[str]
    blocks: list[LirBlock] = field(default_factory=list)

    def block_map(self) -> dict[str, LirBlock]:
        return {b.label: b for b in self.blocks}


@dataclass
class LirModule:
    functions: dict[str, LirFunction] = field(default_factory=dict)
    globals: dict[str, Imm] = field(default_factory=dict)

    def declared_symbols(self) -> list[str]:
        syms = {i.op for f in self.functions.values() for b in f.blocks for i in b.insts
                if i.kind == "call" and i.op.startswith(("__quantum__",))}
        return sorted(syms)


# -- checks ----------------------------------------------------------------------


class LirError(ValueError):
    pass


def check_module(lir: LirModule) -> None:
    """Structural checks: terminators, branch targets, reachability, known
    call targets and balanced region markers on every path."""
    for fn in lir.functions.values():
        blocks = fn.block_map()
        if not fn.blocks:
            raise LirError(f"@{fn.name} has no blocks")
        for b in fn.blocks:
            if not b.insts or not b.insts[-1].is_terminator:
                raise LirError(f"@{fn.name}:{b.label} does not end in a terminator")
            for i in b.insts[:-1]:
                if i.is_terminator:
                    raise LirError(f"@{fn.name}:{b.label} has a terminator before its end")
            for t in b.insts[-1].targets:
                if t not in blocks:
                    raise LirError(f"@{fn.name}:{b.label} branches to unknown block {t}")
            for i in b.insts:
                if i.kind == "call":
                    known = i.op in lir.functions or i.op in RT_SYMBOLS or (
                        i.op.startswith(QIS) and len(i.op) > len(QIS))
                    if not known:
                        raise LirError(f"@{fn.name} calls unknown symbol {i.op}")
        check_region_balance(fn)


_REGION_CALL = {}
for _k in ("ctrl", "adj", "pow"):
    _REGION_CALL[f"{RT}start_{_k}_u_region"] = ("start", _k)
    _REGION_CALL[f"{RT}end_{_k}_u_region"] = ("end", _k)


def check_region_balance(fn: LirFunction) -> None:
    """Every block must be reached with one consistent stack of open
    regions, ends must match starts, and nothing may be open at ``ret``.
    Unreachable blocks are an error too."""
    blocks = fn.block_map()
    entry_state: dict[str, tuple] = {fn.blocks[0].label: ()}
    work = [fn.blocks[0].label]
    while work:
        label = work.pop()
        stack = list(entry_state[label])
        block = blocks[label]
        for i in block.insts:
            if i.kind == "call" and i.op in _REGION_CALL:
                what, kind = _REGION_CALL[i.op]
                if what == "start":
                    stack.append(kind)
                elif not stack or stack.pop() != kind:
                    raise LirError(f"@{fn.name}:{label}: unmatched end of {kind} region")
            elif i.kind == "ret" and stack:
                raise LirError(f"@{fn.name}:{label}: return with open {stack[-1]} region")
        for t in block.insts[-1].targets:
            state = tuple(stack)
            seen = entry_state.get(t)
            if seen is None:
                entry_state[t] = state
                work.append(t)
            elif seen != state:
                raise LirError(f"@{fn.name}:{t}: reached with different open regions {list(seen)} and {list(state)}")
    unreached = [b.label for b in fn.blocks if b.label not in entry_state]
    if unreached:
        raise LirError(f"@{fn.name}: unreachable block(s) {', '.join(unreached)}")


# -- text ------------------------------------------------------------------------


def _arg(a) -> str:
    return f"{a.type} {a}"


def _inst_text(i: Inst) -> str:
    lhs = f"{i.result} = " if i.result is not None else ""
    rtype = f" : {i.result.type}" if i.result is not None else ""
    seg = f" #{i.attrs['segment']}" if i.attrs.get("segment") else ""
    args = ", ".join(_arg(a) for a in i.args)
    k = i.kind
    if k == "call":
        return f"{lhs}call @{i.op}({args}){rtype}{seg}"
    if k == "const":
        return f"{lhs}const {_arg(i.args[0])}"
    if k == "arith":
        pred = f" {i.attrs['predicate']}" if "predicate" in i.attrs else ""
        return f"{lhs}{i.op}{pred} {args}{rtype}"
    if k == "alloca":
        n = i.attrs.get("length")
        return f"{lhs}alloca {i.attrs['elem']}{'' if n is None else f' x {n}'}"
    if k == "load":
        if "global" in i.attrs:
            return f"{lhs}load @{i.attrs['global']}{rtype}"
        return f"{lhs}load {args}{rtype}"
    if k == "store":
        return f"store {args}"
    if k == "read_result":
        return f"{lhs}read_result {args}{rtype}"
    if k == "br":
        return f"br ^{i.targets[0]}"
    if k == "cond_br":
        return f"cond_br {_arg(i.args[0])}, ^{i.targets[0]}, ^{i.targets[1]}"
    if k == "ret":
        return f"ret {args}".rstrip()
    raise LirError(f"unknown instruction kind {k}")


def _declarations(symbols: list[str]) -> list[str]:
    # grouped per namespace so each full symbol name appears only at its calls
    out = []
    for prefix in (QIS, RT):
        names = [s[len(prefix):] for s in symbols if s.startswith(prefix)]
        if names:
            out.append(f"declare @{prefix}{{{', '.join(names)}}}")
    return out


def emit_text(lir: LirModule) -> str:
    lines = _declarations(lir.declared_symbols())
    if lines:
        lines.append("")
    for name, imm in lir.globals.items():
        lines.append(f"global @{name} = {_arg(imm)}")
    if lir.globals:
        lines.append("")
    for fn in lir.functions.values():
        params = ", ".join(_arg(p) for p in fn.params)
        res = f" -> ({', '.join(fn.result_types)})" if fn.result_types else ""
        lines.append(f"define @{fn.name}({params}){res} {{")
        for b in fn.blocks:
            lines.append(f"^{b.label}:")
            lines.extend("  " + _inst_text(i) for i in b.insts)
        lines.append("}")
        lines.append("")
    return "\n".join(lines)
