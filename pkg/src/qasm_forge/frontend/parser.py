"""Recursive-descent parser producing :mod:`qasm_forge.frontend.ast` trees.

Besides the OpenQASM 3 subset, the parser accepts C-like typedefs
(``int``, ``int64_t``, ``float``, ``double``), C-style ``for`` headers and
``compute { ... } action { ... }`` blocks.
"""
from __future__ import annotations

import json

from . import ast
from .diagnostics import CompileError, Diagnostic, SourceLocation, error
from .lexer import Token, TokenKind, tokenize

# (kind, default width) after desugaring of C-like spellings
_TYPE_KEYWORDS = {
    "int": ("int", 32),
    "uint": ("uint", 32),
    "float": ("float", 32),
    "double": ("float", 64),
    "int64_t": ("int", 64),
    "bool": ("bool", None),
}

# binary operator -> (precedence, right associative)
_BINARY = {
    "||": (1, False),
    "&&": (2, False),
    "|": (3, False),
    "^": (4, False),
    "&": (5, False),
    "==": (6, False), "!=": (6, False),
    "<": (7, False), "<=": (7, False), ">": (7, False), ">=": (7, False),
    "<<": (8, False), ">>": (8, False),
    "+": (9, False), "-": (9, False),
    "*": (10, False), "/": (10, False), "%": (10, False),
}
_POWER_PREC = 12
_COMPOUND = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}


class _ParseError(Exception):
    def __init__(self, diag: Diagnostic):
        self.diag = diag


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self._scopes: list[dict[str, SourceLocation]] = [{}]

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.text == text and tok.kind in (TokenKind.PUNCT, TokenKind.OP, TokenKind.KEYWORD)

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        raise self._error(f"expected '{text}'")

    def expect_ident(self) -> Token:
        if self.tok.kind is TokenKind.IDENT:
            return self.advance()
        raise self._error("expected identifier")

    def _error(self, message: str, tok: Token | None = None) -> _ParseError:
        tok = tok or self.tok
        found = "end of file" if tok.kind is TokenKind.EOF else f"'{tok.text}'"
        return _ParseError(error(f"{message}, found {found}", tok.loc))

    # -- scopes (duplicate declaration detection) -----------------------------

    def _declare(self, name: str, loc: SourceLocation) -> None:
        scope = self._scopes[-1]
        if name in scope:
            prev = scope[name]
            self.diagnostics.append(
                error(f"redeclaration of '{name}' (previously declared at {prev.line}:{prev.column})", loc)
            )
        else:
            scope[name] = loc

    def _push(self) -> None:
        self._scopes.append({})

    def _pop(self) -> None:
        self._scopes.pop()

    # -- program -------------------------------------------------------------

    def parse_program(self) -> ast.Program:
        loc = self.tok.loc
        version = None
        if self.tok.is_(TokenKind.KEYWORD, "OPENQASM"):
            try:
                self.advance()
                if self.tok.kind not in (TokenKind.INT, TokenKind.FLOAT):
                    raise self._error("expected version number")
                version = self.advance().text
                self.expect(";")
            except _ParseError as exc:
                self.diagnostics.append(exc.diag)
                self._synchronize()
        statements: list[ast.Stmt] = []
        while self.tok.kind is not TokenKind.EOF:
            start = self.pos
            try:
                statements.extend(self.parse_statement())
            except _ParseError as exc:
                self.diagnostics.append(exc.diag)
                self._synchronize()
                if self.pos == start:
                    self.advance()
        return ast.Program(statements, version, loc=loc)

    def _synchronize(self) -> None:
        depth = 0
        while self.tok.kind is not TokenKind.EOF:
            if self.at("{"):
                depth += 1
            elif self.at("}"):
                if depth == 0:
                    self.advance()
                    return
                depth -= 1
                if depth == 0:
                    self.advance()
                    return
            elif self.at(";") and depth == 0:
                self.advance()
                return
            self.advance()

    # -- statements ------------------------------------------------------------

    def parse_block(self) -> list[ast.Stmt]:
        """``{ stmt* }`` or a single statement, in a fresh scope."""
        self._push()
        try:
            if self.accept("{"):
                body: list[ast.Stmt] = []
                while not self.at("}"):
                    if self.tok.kind is TokenKind.EOF:
                        raise self._error("expected '}'")
                    start = self.pos
                    try:
                        body.extend(self.parse_statement())
                    except _ParseError as exc:
                        self.diagnostics.append(exc.diag)
                        self._synchronize_in_block()
                        if self.pos == start:
                            self.advance()
                self.expect("}")
                return body
            return self.parse_statement()
        finally:
            self._pop()

    def _synchronize_in_block(self) -> None:
        while self.tok.kind is not TokenKind.EOF and not self.at("}"):
            if self.accept(";"):
                return
            if self.at("{"):
                self._synchronize()
                return
            self.advance()

    def parse_statement(self) -> list[ast.Stmt]:
        tok = self.tok
        if tok.kind is TokenKind.KEYWORD:
            kw = tok.text
            handler = {
                "include": self._include,
                "const": self._const,
                "qubit": self._qubit_decl,
                "qreg": self._qreg_decl,
                "bit": self._bit_decl,
                "creg": self._creg_decl,
                "let": self._let,
                "def": self._def,
                "extern": self._extern,
                "measure": self._measure_stmt,
                "reset": self._reset,
                "if": self._if,
                "for": self._for,
                "while": self._while,
                "return": self._return,
                "ctrl": self._gate_call,
                "negctrl": self._gate_call,
                "inv": self._gate_call,
                "pow": self._gate_call,
            }.get(kw)
            if handler is not None:
                result = handler()
                return result if isinstance(result, list) else [result]
            if kw in _TYPE_KEYWORDS:
                return self._classical_decl()
            if kw == "gate":
                raise _ParseError(error("gate definitions are not supported; use 'def' subroutines", tok.loc))
            if kw in ("break", "continue"):
                raise _ParseError(error(f"'{kw}' is not supported", tok.loc))
            if kw == "OPENQASM":
                raise _ParseError(error("OPENQASM version must be the first statement", tok.loc))
            raise self._error("unexpected keyword")
        if tok.kind is TokenKind.IDENT:
            if tok.text == "compute" and self.peek().is_(TokenKind.PUNCT, "{"):
                return [self._compute_action()]
            return [self._ident_statement()]
        if self.at("++") or self.at("--"):
            stmt = self._simple_update()
            self.expect(";")
            return [stmt]
        if self.at("{"):
            raise self._error("unexpected block")
        raise self._error("expected statement")

    def _include(self) -> ast.Include:
        loc = self.advance().loc
        if self.tok.kind is not TokenKind.STRING:
            raise self._error("expected include path string")
        path = _unquote(self.advance().text)
        self.expect(";")
        return ast.Include(path, loc=loc)

    def _const(self) -> ast.ConstDecl:
        loc = self.advance().loc
        type_spec = None
        if self.tok.kind is TokenKind.KEYWORD and self.tok.text in _TYPE_KEYWORDS:
            type_spec = self._type_spec()
        name_tok = self.expect_ident()
        self.expect("=")
        value = self.parse_expr()
        self.expect(";")
        self._declare(name_tok.text, name_tok.loc)
        return ast.ConstDecl(name_tok.text, type_spec, value, loc=loc)

    def _designator(self) -> ast.Expr | None:
        if self.accept("["):
            size = self.parse_expr()
            self.expect("]")
            return size
        return None

    def _qubit_decl(self) -> list[ast.Stmt]:
        loc = self.advance().loc
        type_size = self._designator()
        decls: list[ast.Stmt] = []
        while True:
            name_tok = self.expect_ident()
            size = self._designator()
            if size is not None and type_size is not None:
                raise _ParseError(error("qubit size given twice", name_tok.loc))
            self._declare(name_tok.text, name_tok.loc)
            decls.append(ast.QubitDecl(name_tok.text, size if size is not None else type_size, loc=loc))
            if not self.accept(","):
                break
        self.expect(";")
        return decls

    def _qreg_decl(self) -> list[ast.Stmt]:
        loc = self.advance().loc
        name_tok = self.expect_ident()
        size = self._designator()
        self.expect(";")
        self._declare(name_tok.text, name_tok.loc)
        return [ast.QubitDecl(name_tok.text, size, loc=loc)]

    def _bit_decl(self) -> list[ast.Stmt]:
        loc = self.advance().loc
        type_size = self._designator()
        decls: list[ast.Stmt] = []
        while True:
            name_tok = self.expect_ident()
            size = self._designator()
            if size is not None and type_size is not None:
                raise _ParseError(error("bit size given twice", name_tok.loc))
            init = None
            if self.accept("="):
                init = self._assign_rhs()
            self._declare(name_tok.text, name_tok.loc)
            decls.append(ast.BitDecl(name_tok.text, size if size is not None else type_size, init, loc=loc))
            if not self.accept(","):
                break
        self.expect(";")
        return decls

    def _creg_decl(self) -> list[ast.Stmt]:
        loc = self.advance().loc
        name_tok = self.expect_ident()
        size = self._designator()
        self.expect(";")
        self._declare(name_tok.text, name_tok.loc)
        return [ast.BitDecl(name_tok.text, size, None, loc=loc)]

    def _type_spec(self) -> ast.TypeSpec:
        tok = self.advance()
        if tok.text == "bit":
            return ast.TypeSpec("bit", self._designator(), loc=tok.loc)
        kind, default_width = _TYPE_KEYWORDS[tok.text]
        width = None
        if tok.text in ("int", "uint", "float") and self.at("["):
            width = self._designator()
        elif default_width is not None:
            width = ast.IntLit(default_width, loc=tok.loc)
        return ast.TypeSpec(kind, width, loc=tok.loc)

    def _classical_decl(self) -> list[ast.Stmt]:
        loc = self.tok.loc
        type_spec = self._type_spec()
        decls: list[ast.Stmt] = []
        while True:
            name_tok = self.expect_ident()
            init = None
            if self.accept("="):
                init = self._assign_rhs()
            self._declare(name_tok.text, name_tok.loc)
            decls.append(ast.ClassicalDecl(type_spec, name_tok.text, init, loc=loc))
            if not self.accept(","):
                break
        self.expect(";")
        return decls

    def _let(self) -> ast.AliasDecl:
        loc = self.advance().loc
        name_tok = self.expect_ident()
        self.expect("=")
        value = self.parse_expr()
        self.expect(";")
        self._declare(name_tok.text, name_tok.loc)
        return ast.AliasDecl(name_tok.text, value, loc=loc)

    def _param(self) -> ast.Param | ast.QubitParam:
        tok = self.tok
        if tok.is_(TokenKind.KEYWORD, "qubit") or tok.is_(TokenKind.KEYWORD, "qreg"):
            self.advance()
            size = self._designator()
            self.accept(":")
            name_tok = self.expect_ident()
            if size is None:
                size = self._designator()
            self._declare(name_tok.text, name_tok.loc)
            return ast.QubitParam(name_tok.text, size, loc=tok.loc)
        if tok.kind is TokenKind.KEYWORD and (tok.text in _TYPE_KEYWORDS or tok.text == "bit"):
            type_spec = self._type_spec()
            self.accept(":")
            name_tok = self.expect_ident()
            self._declare(name_tok.text, name_tok.loc)
            return ast.Param(name_tok.text, type_spec, loc=tok.loc)
        raise self._error("expected parameter type")

    def _def(self) -> ast.SubroutineDef:
        loc = self.advance().loc
        name_tok = self.expect_ident()
        self._declare(name_tok.text, name_tok.loc)
        params: list[ast.Param] = []
        qubit_params: list[ast.QubitParam] = []
        self._push()
        try:
            if self.accept("("):
                if not self.at(")"):
                    while True:
                        p = self._param()
                        (qubit_params if isinstance(p, ast.QubitParam) else params).append(p)
                        if not self.accept(","):
                            break
                self.expect(")")
            while self.tok.is_(TokenKind.KEYWORD, "qubit") or self.tok.is_(TokenKind.KEYWORD, "qreg"):
                p = self._param()
                qubit_params.append(p)
                if not self.accept(","):
                    break
            return_type = None
            if self.accept("->"):
                if not (self.tok.kind is TokenKind.KEYWORD and (self.tok.text in _TYPE_KEYWORDS or self.tok.text == "bit")):
                    raise self._error("expected return type")
                return_type = self._type_spec()
            if not self.at("{"):
                raise self._error("expected '{'")
            body = self.parse_block()
        finally:
            self._pop()
        return ast.SubroutineDef(name_tok.text, params, qubit_params, return_type, body, loc=loc)

    def _extern(self) -> ast.ExternDecl:
        loc = self.advance().loc
        name_tok = self.expect_ident()
        self._declare(name_tok.text, name_tok.loc)
        self.expect("(")
        types: list[ast.TypeSpec] = []
        if not self.at(")"):
            while True:
                if not (self.tok.kind is TokenKind.KEYWORD and (self.tok.text in _TYPE_KEYWORDS or self.tok.text == "bit")):
                    raise self._error("expected parameter type")
                types.append(self._type_spec())
                if self.tok.kind is TokenKind.IDENT:
                    self.advance()
                if not self.accept(","):
                    break
        self.expect(")")
        return_type = None
        if self.accept("->"):
            return_type = self._type_spec()
        self.expect(";")
        return ast.ExternDecl(name_tok.text, types, return_type, loc=loc)

    def _measure_stmt(self) -> ast.Measure:
        loc = self.advance().loc
        qubit = self.parse_postfix()
        target = None
        if self.accept("->"):
            target = self.parse_postfix()
        self.expect(";")
        return ast.Measure(qubit, target, loc=loc)

    def _reset(self) -> ast.Reset:
        loc = self.advance().loc
        qubit = self.parse_postfix()
        self.expect(";")
        return ast.Reset(qubit, loc=loc)

    def _if(self) -> ast.If:
        loc = self.advance().loc
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then_body = self.parse_block()
        else_body = None
        if self.accept("else"):
            else_body = self.parse_block()
        return ast.If(cond, then_body, else_body, loc=loc)

    def _for(self) -> ast.Stmt:
        loc = self.advance().loc
        if self.accept("("):
            return self._for_cstyle(loc)
        if self.tok.kind is TokenKind.KEYWORD and self.tok.text in _TYPE_KEYWORDS:
            self._type_spec()
        var_tok = self.expect_ident()
        self.expect("in")
        if not self.at("["):
            raise self._error("expected '[' range")
        self.advance()
        start = self.parse_expr()
        self.expect(":")
        first = self.parse_expr()
        step = None
        if self.accept(":"):
            step, stop = first, self.parse_expr()
        else:
            stop = first
        self.expect("]")
        self._push()
        try:
            self._declare(var_tok.text, var_tok.loc)
            body = self.parse_block()
        finally:
            self._pop()
        return ast.ForRange(var_tok.text, start, step, stop, body, loc=loc)

    def _for_cstyle(self, loc: SourceLocation) -> ast.ForCStyle:
        self._push()
        try:
            init: ast.Stmt | None = None
            if not self.at(";"):
                if self.tok.kind is TokenKind.KEYWORD and self.tok.text in _TYPE_KEYWORDS:
                    type_spec = self._type_spec()
                    name_tok = self.expect_ident()
                    self.expect("=")
                    value = self.parse_expr()
                    self._declare(name_tok.text, name_tok.loc)
                    init = ast.ClassicalDecl(type_spec, name_tok.text, value, loc=type_spec.loc)
                else:
                    init = self._simple_update()
            self.expect(";")
            cond = None if self.at(";") else self.parse_expr()
            self.expect(";")
            update = None if self.at(")") else self._simple_update()
            self.expect(")")
            body = self.parse_block()
        finally:
            self._pop()
        return ast.ForCStyle(init, cond, update, body, loc=loc)

    def _simple_update(self) -> ast.Stmt:
        """``i++``, ``++i``, ``i += e`` or ``i = e`` (no trailing ';')."""
        loc = self.tok.loc
        if self.at("++") or self.at("--"):
            op = "+" if self.advance().text == "++" else "-"
            target = self.parse_postfix()
            return ast.CompoundAssignment(target, op, ast.IntLit(1, loc=loc), loc=loc)
        target = self.parse_postfix()
        if self.at("++") or self.at("--"):
            op = "+" if self.advance().text == "++" else "-"
            return ast.CompoundAssignment(target, op, ast.IntLit(1, loc=loc), loc=loc)
        if self.tok.kind is TokenKind.OP and self.tok.text in _COMPOUND:
            op = _COMPOUND[self.advance().text]
            return ast.CompoundAssignment(target, op, self.parse_expr(), loc=loc)
        self.expect("=")
        return ast.Assignment(target, self.parse_expr(), loc=loc)

    def _while(self) -> ast.While:
        loc = self.advance().loc
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        return ast.While(cond, self.parse_block(), loc=loc)

    def _compute_action(self) -> ast.ComputeAction:
        loc = self.advance().loc
        if not self.at("{"):
            raise self._error("expected '{' after 'compute'")
        compute = self.parse_block()
        if not self.tok.is_(TokenKind.IDENT, "action"):
            raise self._error("expected 'action' block after 'compute' block")
        self.advance()
        if not self.at("{"):
            raise self._error("expected '{' after 'action'")
        action = self.parse_block()
        return ast.ComputeAction(compute, action, loc=loc)

    def _return(self) -> ast.Return:
        loc = self.advance().loc
        value = None
        if not self.at(";"):
            if self.at("measure"):
                mloc = self.advance().loc
                value = ast.MeasureExpr(self.parse_postfix(), loc=mloc)
            else:
                value = self.parse_expr()
        self.expect(";")
        return ast.Return(value, loc=loc)

    def _modifiers(self) -> list[ast.Modifier]:
        mods: list[ast.Modifier] = []
        while self.tok.kind is TokenKind.KEYWORD and self.tok.text in ("ctrl", "negctrl", "inv", "pow"):
            tok = self.advance()
            arg = None
            if self.accept("("):
                arg = self.parse_expr()
                self.expect(")")
            elif tok.text == "pow":
                raise self._error("expected '(' after 'pow'")
            self.expect("@")
            mods.append(ast.Modifier(tok.text, arg, loc=tok.loc))
        return mods

    def _qubit_args(self) -> list[ast.Expr]:
        args = [self.parse_postfix()]
        while self.accept(","):
            args.append(self.parse_postfix())
        return args

    def _gate_call(self) -> ast.GateCall:
        loc = self.tok.loc
        modifiers = self._modifiers()
        name_tok = self.expect_ident()
        params: list[ast.Expr] = []
        if self.accept("("):
            params = self._expr_list(")")
        qubits = self._qubit_args()
        self.expect(";")
        return ast.GateCall(name_tok.text, params, qubits, modifiers, loc=loc)

    def _expr_list(self, close: str) -> list[ast.Expr]:
        items: list[ast.Expr] = []
        if not self.at(close):
            while True:
                items.append(self.parse_expr())
                if not self.accept(","):
                    break
        self.expect(close)
        return items

    def _assign_rhs(self) -> ast.Expr:
        if self.at("measure"):
            loc = self.advance().loc
            return ast.MeasureExpr(self.parse_postfix(), loc=loc)
        return self.parse_expr()

    def _ident_statement(self) -> ast.Stmt:
        name_tok = self.tok
        nxt = self.peek()
        if nxt.is_(TokenKind.PUNCT, "("):
            self.advance()
            self.advance()
            args = self._expr_list(")")
            if name_tok.text == "print" and self.at(";"):
                self.advance()
                return ast.Print(args, loc=name_tok.loc)
            if self.at(";"):
                self.advance()
                return ast.ExpressionStatement(ast.CallExpr(name_tok.text, args, loc=name_tok.loc), loc=name_tok.loc)
            qubits = self._qubit_args()
            self.expect(";")
            return ast.GateCall(name_tok.text, args, qubits, [], loc=name_tok.loc)
        if nxt.kind is TokenKind.IDENT:
            self.advance()
            qubits = self._qubit_args()
            self.expect(";")
            return ast.GateCall(name_tok.text, [], qubits, [], loc=name_tok.loc)
        target = self.parse_postfix()
        tok = self.tok
        if self.at("="):
            self.advance()
            value = self._assign_rhs()
            self.expect(";")
            if isinstance(value, ast.MeasureExpr):
                return ast.Measure(value.qubit, target, loc=name_tok.loc)
            return ast.Assignment(target, value, loc=name_tok.loc)
        if tok.kind is TokenKind.OP and tok.text in _COMPOUND:
            self.advance()
            value = self.parse_expr()
            self.expect(";")
            return ast.CompoundAssignment(target, _COMPOUND[tok.text], value, loc=name_tok.loc)
        if self.at("++") or self.at("--"):
            op = "+" if self.advance().text == "++" else "-"
            self.expect(";")
            return ast.CompoundAssignment(target, op, ast.IntLit(1, loc=tok.loc), loc=name_tok.loc)
        if self.at(";"):
            self.advance()
            return ast.ExpressionStatement(target, loc=name_tok.loc)
        raise self._error("expected assignment or gate arguments")

    # -- expressions -------------------------------------------------------

    def parse_expr(self, min_prec: int = 0) -> ast.Expr:
        lhs = self._unary()
        while True:
            tok = self.tok
            if tok.kind is not TokenKind.OP or tok.text not in _BINARY:
                return lhs
            prec, right = _BINARY[tok.text]
            if prec < min_prec:
                return lhs
            self.advance()
            rhs = self.parse_expr(prec if right else prec + 1)
            lhs = ast.Binary(tok.text, lhs, rhs, loc=tok.loc)

    def _unary(self) -> ast.Expr:
        tok = self.tok
        if tok.kind is TokenKind.OP and tok.text in ("-", "!", "~", "+"):
            self.advance()
            operand = self._unary()
            if tok.text == "+":
                return operand
            return ast.Unary(tok.text, operand, loc=tok.loc)
        return self._power()

    def _power(self) -> ast.Expr:
        base = self.parse_postfix()
        if self.at("**"):
            tok = self.advance()
            exponent = self._unary()
            return ast.Binary("**", base, exponent, loc=tok.loc)
        return base

    def parse_postfix(self) -> ast.Expr:
        expr = self._primary()
        while self.at("["):
            tok = self.advance()
            index = self._index_body()
            self.expect("]")
            expr = ast.IndexExpr(expr, index, loc=tok.loc)
        return expr

    def _index_body(self) -> ast.Expr | ast.RangeExpr:
        loc = self.tok.loc
        start = None if self.at(":") else self.parse_expr()
        if not self.accept(":"):
            if start is None:
                raise self._error("expected index")
            return start
        parts = [start]
        parts.append(None if (self.at(":") or self.at("]")) else self.parse_expr())
        if self.accept(":"):
            parts.append(None if self.at("]") else self.parse_expr())
            return ast.RangeExpr(parts[0], parts[1], parts[2], loc=loc)
        return ast.RangeExpr(parts[0], None, parts[1], loc=loc)

    def _primary(self) -> ast.Expr:
        tok = self.tok
        if tok.kind is TokenKind.INT:
            self.advance()
            return ast.IntLit(int(tok.text), loc=tok.loc)
        if tok.kind is TokenKind.FLOAT:
            self.advance()
            return ast.FloatLit(float(tok.text), loc=tok.loc)
        if tok.kind is TokenKind.STRING:
            self.advance()
            return ast.StrLit(_unquote(tok.text), loc=tok.loc)
        if tok.is_(TokenKind.KEYWORD, "true") or tok.is_(TokenKind.KEYWORD, "false"):
            self.advance()
            return ast.BoolLit(tok.text == "true", loc=tok.loc)
        if tok.is_(TokenKind.PUNCT, "("):
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind is TokenKind.IDENT:
            self.advance()
            if self.at("("):
                self.advance()
                args = self._expr_list(")")
                qubits: list[ast.Expr] = []
                if self.tok.kind is TokenKind.IDENT:
                    qubits = self._qubit_args()
                return ast.CallExpr(tok.text, args, qubits, loc=tok.loc)
            return ast.Ident(tok.text, loc=tok.loc)
        if tok.is_(TokenKind.KEYWORD, "measure"):
            self.advance()
            return ast.MeasureExpr(self.parse_postfix(), loc=tok.loc)
        raise self._error("expected expression")


def _unquote(text: str) -> str:
    try:
        return json.loads(text)
    except ValueError:
        return text[1:-1]


def parse_tokens(tokens: list[Token]) -> ast.Program:
    parser = Parser(tokens)
    program = parser.parse_program()
    if parser.diagnostics:
        raise CompileError(parser.diagnostics)
    return program


def parse(source: str, filename: str | None = None) -> ast.Program:
    """Tokenize and parse ``source``; raises :class:`CompileError` on errors."""
    try:
        return parse_tokens(tokenize(source))
    except CompileError as exc:
        if filename:
            exc.diagnostics = [
                type(d)(d.severity, d.message, d.loc, filename) for d in exc.diagnostics
            ]
        raise
