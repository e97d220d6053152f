"""Parser for the textual IR produced by :mod:`qasm_forge.ir.printer`.

Grammar (informal):

    module   := (global | func)*
    global   := 'global' @name ':' type '=' attr
    func     := 'func' 'private'? @name '(' params ')' ('->' '(' types ')')? ('{' op* '}')?
    op       := 'return' (values ':' types)?
              | (values '=')? opname '(' values? ')' attrdict? ':' '(' types ')' '->' '(' types ')' regions?
    regions  := '(' '{' region '}' (',' '{' region '}')* ')'
    region   := ('^bbN' '(' (value ':' type),* ')' ':')? op*
"""
from __future__ import annotations

import json
import re
from typing import Any

from ..frontend.diagnostics import CompileError, SourceLocation, error
from . import types as T
from .core import Block, FunctionDef, Global, IrModule, Operation, Region, Value

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<value>%\d+)
  | (?P<sym>@[A-Za-z_][\w.$]*)
  | (?P<block>\^bb\d+)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<type>![a-z]+(?:<[^>]*>)?)
  | (?P<num>-?(?:\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+|inf\b|nan\b))
  | (?P<ident>[A-Za-z_][\w.]*)
  | (?P<punct>->|[(){}\[\],:=])
    """,
    re.VERBOSE,
)


class _Reader:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str, SourceLocation]] = []
        pos, line, line_start = 0, 1, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            loc = SourceLocation(line, pos - line_start + 1, pos)
            if m is None:
                raise CompileError([error(f"unexpected character {text[pos]!r} in IR", loc)])
            kind = m.lastgroup
            if kind != "ws":
                self.toks.append((kind, m.group(), loc))
            nl = m.group().count("\n")
            if nl:
                line += nl
                line_start = pos + m.group().rfind("\n") + 1
            pos = m.end()
        self.toks.append(("eof", "", SourceLocation(line, pos - line_start + 1, pos)))
        self.i = 0
        self.values: dict[str, Value] = {}

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, msg: str):
        kind, text, loc = self.tok
        return CompileError([error(f"{msg}, found {text or 'end of input'!r}", loc)])

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok[1] == text and self.tok[0] in ("punct", "ident")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.fail(f"expected '{text}'")

    def expect_kind(self, kind: str) -> str:
        if self.tok[0] != kind:
            raise self.fail(f"expected {kind}")
        return self.next()[1]

    # -- pieces --------------------------------------------------------------

    def type_(self) -> str:
        kind, text, _ = self.tok
        if kind in ("type", "ident"):
            self.i += 1
            if not T.is_valid(text):
                raise CompileError([error(f"unknown type {text!r}", self.toks[self.i - 1][2])])
            return text
        raise self.fail("expected type")

    def type_list(self) -> list[str]:
        self.expect("(")
        out: list[str] = []
        if not self.at(")"):
            out.append(self.type_())
            while self.accept(","):
                out.append(self.type_())
        self.expect(")")
        return out

    def attr(self) -> Any:
        kind, text, _ = self.tok
        if kind == "num":
            self.i += 1
            if re.fullmatch(r"-?\d+", text):
                return int(text)
            return float(text)
        if kind == "str":
            self.i += 1
            return json.loads(text)
        if kind == "ident" and text in ("true", "false", "none"):
            self.i += 1
            return {"true": True, "false": False, "none": None}[text]
        if self.accept("["):
            items = []
            if not self.at("]"):
                items.append(self.attr())
                while self.accept(","):
                    items.append(self.attr())
            self.expect("]")
            return items
        raise self.fail("expected attribute value")

    def use(self) -> Value:
        kind, text, loc = self.next()
        if kind != "value":
            self.i -= 1
            raise self.fail("expected SSA value")
        if text not in self.values:
            raise CompileError([error(f"use of undefined value {text}", loc)])
        return self.values[text]

    def define(self, name: str, v: Value, loc: SourceLocation) -> None:
        if name in self.values:
            raise CompileError([error(f"redefinition of {name}", loc)])
        self.values[name] = v

    # -- module ------------------------------------------------------------

    def module(self) -> IrModule:
        m = IrModule()
        while self.tok[0] != "eof":
            if self.accept("global"):
                name = self.expect_kind("sym")[1:]
                self.expect(":")
                t = self.type_()
                self.expect("=")
                m.globals[name] = Global(name, t, self.attr())
            elif self.accept("func"):
                m.add_function(self.function())
            else:
                raise self.fail("expected 'func' or 'global'")
        return m

    def function(self) -> FunctionDef:
        private = self.accept("private")
        name = self.expect_kind("sym")[1:]
        self.values = {}
        self.expect("(")
        arg_types: list[str] = []
        arg_names: list[tuple[str, SourceLocation]] = []
        if not self.at(")"):
            while True:
                if self.tok[0] == "value":
                    _, vname, loc = self.next()
                    self.expect(":")
                    arg_names.append((vname, loc))
                    arg_types.append(self.type_())
                else:
                    arg_types.append(self.type_())
                if not self.accept(","):
                    break
        self.expect(")")
        results: list[str] = []
        if self.accept("->"):
            if self.at("("):
                results = self.type_list()
            else:
                results = [self.type_()]
        fn = FunctionDef(name, arg_types, results)
        if private or not self.at("{"):
            if arg_names:
                raise self.fail("declaration-only function cannot name arguments")
            return fn
        self.expect("{")
        block = Block(arg_types)
        for (vname, loc), v in zip(arg_names, block.args):
            self.define(vname, v, loc)
        fn.body = Region([block])
        while not self.at("}"):
            block.append(self.op())
        self.expect("}")
        return fn

    def op(self) -> Operation:
        start = self.tok[2]
        result_names: list[tuple[str, SourceLocation]] = []
        if self.tok[0] == "value":
            while True:
                _, vname, loc = self.next()
                result_names.append((vname, loc))
                if not self.accept(","):
                    break
            self.expect("=")
        if self.tok[0] != "ident":
            raise self.fail("expected operation name")
        name = self.next()[1]
        if name == "return" and not result_names:
            operands: list[Value] = []
            if self.tok[0] == "value":
                operands.append(self.use())
                while self.accept(","):
                    operands.append(self.use())
                self.expect(":")
                self.type_()
                while self.accept(","):
                    self.type_()
            return Operation("func.return", operands)
        self.expect("(")
        operands = []
        if not self.at(")"):
            operands.append(self.use())
            while self.accept(","):
                operands.append(self.use())
        self.expect(")")
        attrs: dict[str, Any] = {}
        if self.accept("{"):
            if not self.at("}"):
                while True:
                    key = self.expect_kind("ident")
                    self.expect("=")
                    attrs[key] = self.attr()
                    if not self.accept(","):
                        break
            self.expect("}")
        self.expect(":")
        operand_types = self.type_list()
        self.expect("->")
        result_types = self.type_list()
        if len(operand_types) != len(operands):
            raise CompileError([error(f"{name}: {len(operands)} operands but {len(operand_types)} operand types", start)])
        for v, t in zip(operands, operand_types):
            if v.type != t:
                raise CompileError([error(f"{name}: operand type {v.type} does not match annotation {t}", start)])
        if len(result_types) != len(result_names):
            raise CompileError([error(f"{name}: {len(result_names)} results but {len(result_types)} result types", start)])
        op = Operation(name, operands, result_types, attrs)
        for (vname, loc), r in zip(result_names, op.results):
            self.define(vname, r, loc)
        if self.accept("("):
            while True:
                self.expect("{")
                op.add_region(self.region())
                self.expect("}")
                if not self.accept(","):
                    break
            self.expect(")")
        return op

    def region(self) -> Region:
        region = Region()
        block = Block()
        first = True
        while True:
            if self.tok[0] == "block":
                if not first or block.ops:
                    region.add_block(block)
                    block = Block()
                self.next()
                self.expect("(")
                if not self.at(")"):
                    while True:
                        _, vname, loc = self.next()
                        self.expect(":")
                        self.define(vname, block.add_arg(self.type_()), loc)
                        if not self.accept(","):
                            break
                self.expect(")")
                self.expect(":")
            first = False
            if self.at("}"):
                break
            if self.tok[0] == "block":
                continue
            block.append(self.op())
        region.add_block(block)
        return region


def parse_ir(text: str) -> IrModule:
    """Parse printed IR back into an :class:`IrModule`; raises CompileError."""
    return _Reader(text).module()
