"""SSA containers: values, operations, blocks, regions, functions, modules.

Every :class:`Value` keeps an explicit ``uses`` list with one entry per
operand slot that references it.  All operand mutation goes through
:class:`Operation` methods so the lists stay exact; the verifier recomputes
them from scratch and compares.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

_uid = itertools.count()


class Value:
    __slots__ = ("type", "owner", "index", "uses", "uid")

    def __init__(self, type_: str, owner: "Operation | Block", index: int):
        self.type = type_
        self.owner = owner
        self.index = index
        self.uses: list[Operation] = []
        self.uid = next(_uid)

    @property
    def defining_op(self) -> "Operation | None":
        return self.owner if isinstance(self.owner, Operation) else None

    @property
    def users(self) -> list["Operation"]:
        return self.uses

    def has_uses(self) -> bool:
        return bool(self.uses)

    def replace_all_uses_with(self, new: "Value") -> None:
        if new is self:
            return
        for op in list(self.uses):
            op.replace_operand(self, new)

    def __repr__(self) -> str:
        return f"<Value #{self.uid} : {self.type}>"


class Operation:
    __slots__ = ("name", "operands", "results", "attrs", "regions", "parent")

    def __init__(
        self,
        name: str,
        operands: Iterable[Value] = (),
        result_types: Iterable[str] = (),
        attrs: dict[str, Any] | None = None,
        regions: Iterable["Region"] = (),
    ):
        self.name = name
        self.operands: list[Value] = []
        for v in operands:
            self.operands.append(v)
            v.uses.append(self)
        self.results = [Value(t, self, i) for i, t in enumerate(result_types)]
        self.attrs: dict[str, Any] = dict(attrs or {})
        self.regions: list[Region] = []
        for r in regions:
            self.add_region(r)
        self.parent: Block | None = None

    # -- operands ---------------------------------------------------------

    def set_operand(self, i: int, new: Value) -> None:
        old = self.operands[i]
        if old is new:
            return
        old.uses.remove(self)
        self.operands[i] = new
        new.uses.append(self)

    def replace_operand(self, old: Value, new: Value) -> None:
        for i, v in enumerate(self.operands):
            if v is old:
                self.set_operand(i, new)

    def set_operands(self, values: Iterable[Value]) -> None:
        for v in self.operands:
            v.uses.remove(self)
        self.operands = list(values)
        for v in self.operands:
            v.uses.append(self)

    def drop_operands(self) -> None:
        for v in self.operands:
            v.uses.remove(self)
        self.operands = []

    # -- structure ----------------------------------------------------------

    def add_region(self, region: "Region") -> "Region":
        region.parent = self
        self.regions.append(region)
        return region

    @property
    def result(self) -> Value:
        if len(self.results) != 1:
            raise ValueError(f"{self.name} has {len(self.results)} results")
        return self.results[0]

    @property
    def parent_op(self) -> "Operation | None":
        if self.parent is None or self.parent.parent is None:
            return None
        return self.parent.parent.parent

    def ancestors(self) -> Iterator["Operation"]:
        op = self.parent_op
        while op is not None:
            yield op
            op = op.parent_op

    def walk(self) -> Iterator["Operation"]:
        """Pre-order walk over this op and every nested op."""
        yield self
        for region in self.regions:
            for block in region.blocks:
                for op in list(block.ops):
                    yield from op.walk()

    def erase(self) -> None:
        """Detach from the parent block and drop all operand uses, recursively.

        Results must already be unused.
        """
        for r in self.results:
            if r.uses:
                raise ValueError(f"erasing {self.name} whose result still has {len(r.uses)} use(s)")
        self._drop_all()
        if self.parent is not None:
            self.parent.ops.remove(self)
            self.parent = None

    def _drop_all(self) -> None:
        for region in self.regions:
            for block in region.blocks:
                for op in block.ops:
                    op._drop_all()
        self.drop_operands()

    def is_gate(self) -> bool:
        return self.name.startswith("qvs.") and self.name not in ("qvs.mz", "qvs.reset")

    @property
    def gate(self) -> str:
        return self.name[4:]

    @property
    def segment(self) -> str | None:
        return self.attrs.get("segment")

    def __repr__(self) -> str:
        return f"<Operation {self.name} {self.attrs}>"


class Block:
    __slots__ = ("args", "ops", "parent")

    def __init__(self, arg_types: Iterable[str] = ()):
        self.args = [Value(t, self, i) for i, t in enumerate(arg_types)]
        self.ops: list[Operation] = []
        self.parent: Region | None = None

    def append(self, op: Operation) -> Operation:
        op.parent = self
        self.ops.append(op)
        return op

    def insert(self, index: int, op: Operation) -> Operation:
        op.parent = self
        self.ops.insert(index, op)
        return op

    def insert_before(self, anchor: Operation, op: Operation) -> Operation:
        return self.insert(self.ops.index(anchor), op)

    def insert_after(self, anchor: Operation, op: Operation) -> Operation:
        return self.insert(self.ops.index(anchor) + 1, op)

    def add_arg(self, type_: str) -> Value:
        v = Value(type_, self, len(self.args))
        self.args.append(v)
        return v

    @property
    def terminator(self) -> Operation | None:
        if self.ops and self.ops[-1].name in TERMINATORS:
            return self.ops[-1]
        return None


class Region:
    __slots__ = ("blocks", "parent")

    def __init__(self, blocks: Iterable[Block] = ()):
        self.blocks: list[Block] = []
        self.parent: Operation | None = None
        for b in blocks:
            self.add_block(b)

    def add_block(self, block: Block) -> Block:
        block.parent = self
        self.blocks.append(block)
        return block

    @property
    def block(self) -> Block:
        return self.blocks[0]

    @classmethod
    def single(cls, arg_types: Iterable[str] = ()) -> "Region":
        return cls([Block(arg_types)])


TERMINATORS = frozenset({"func.return", "scf.condition"})


@dataclass
class Global:
    name: str
    type: str
    value: int | float | bool


@dataclass
class FunctionDef:
    name: str
    arg_types: list[str]
    result_types: list[str]
    body: Region | None = None  # None for extern declarations
    arg_names: list[str] = field(default_factory=list)

    @property
    def is_extern(self) -> bool:
        return self.body is None

    @property
    def entry(self) -> Block:
        assert self.body is not None
        return self.body.block

    @property
    def args(self) -> list[Value]:
        return self.entry.args

    def walk(self) -> Iterator[Operation]:
        if self.body is None:
            return
        for block in self.body.blocks:
            for op in list(block.ops):
                yield from op.walk()


@dataclass
class IrModule:
    functions: dict[str, FunctionDef] = field(default_factory=dict)
    globals: dict[str, Global] = field(default_factory=dict)

    def add_function(self, fn: FunctionDef) -> FunctionDef:
        self.functions[fn.name] = fn
        return fn

    def walk(self) -> Iterator[Operation]:
        for fn in self.functions.values():
            yield from fn.walk()

    def op_count(self) -> int:
        return sum(1 for _ in self.walk())


# -- cloning ------------------------------------------------------------------


def clone_op(op: Operation, mapping: dict[Value, Value]) -> Operation:
    """Deep-copy ``op``; operands are remapped through ``mapping`` and new
    results / block arguments are recorded in it."""
    new = Operation(
        op.name,
        [mapping.get(v, v) for v in op.operands],
        [r.type for r in op.results],
        _copy_attrs(op.attrs),
    )
    for old_r, new_r in zip(op.results, new.results):
        mapping[old_r] = new_r
    for region in op.regions:
        new_region = Region()
        for block in region.blocks:
            new_block = Block([a.type for a in block.args])
            for old_a, new_a in zip(block.args, new_block.args):
                mapping[old_a] = new_a
            for inner in block.ops:
                new_block.append(clone_op(inner, mapping))
            new_region.add_block(new_block)
        new.add_region(new_region)
    return new


def _copy_attrs(attrs: dict[str, Any]) -> dict[str, Any]:
    return {k: (list(v) if isinstance(v, list) else v) for k, v in attrs.items()}


def block_of(value: Value) -> Block | None:
    owner = value.owner
    return owner if isinstance(owner, Block) else owner.parent


def clone_function(fn: FunctionDef) -> FunctionDef:
    if fn.is_extern:
        return FunctionDef(fn.name, list(fn.arg_types), list(fn.result_types), None, list(fn.arg_names))
    mapping: dict[Value, Value] = {}
    entry = Block(fn.arg_types)
    for old, new in zip(fn.args, entry.args):
        mapping[old] = new
    for op in fn.entry.ops:
        entry.append(clone_op(op, mapping))
    return FunctionDef(fn.name, list(fn.arg_types), list(fn.result_types), Region([entry]), list(fn.arg_names))


def clone_module(module: IrModule) -> IrModule:
    out = IrModule()
    for g in module.globals.values():
        out.globals[g.name] = Global(g.name, g.type, g.value)
    for fn in module.functions.values():
        out.add_function(clone_function(fn))
    return out
