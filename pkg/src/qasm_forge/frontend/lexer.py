"""Tokenizer for the extended OpenQASM 3 dialect."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .diagnostics import CompileError, SourceLocation, error


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    INT = "integer-literal"
    FLOAT = "float-literal"
    STRING = "string-literal"
    PUNCT = "punctuation"
    OP = "operator"
    EOF = "eof"


KEYWORDS = frozenset(
    {
        "OPENQASM", "include", "qubit", "qreg", "bit", "creg", "int", "uint",
        "float", "double", "int64_t", "bool", "const", "let", "def", "extern",
        "return", "if", "else", "for", "in", "while", "measure", "reset", "ctrl",
        "negctrl", "inv", "pow", "true", "false", "gate",
        "break", "continue",
    }
)

# Longest operators first so the alternation is greedy.
_OPERATORS = [
    "**", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "&&", "||",
    "<<", ">>", "++", "--", "->",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^", "@",
]
_PUNCT = "()[]{};,:"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_π][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<op>"""
    + "|".join(re.escape(op) for op in _OPERATORS)
    + r""")
  | (?P<punct>[""" + re.escape(_PUNCT) + r"""])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    loc: SourceLocation

    def is_(self, kind: TokenKind, text: str | None = None) -> bool:
        return self.kind is kind and (text is None or self.text == text)

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.text!r}, {self.loc})"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace and comments.

    The returned list always ends with an EOF token.  Raises
    :class:`CompileError` on an illegal character or unterminated string.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(source)
    while pos < n:
        loc = SourceLocation(line, pos - line_start + 1, pos)
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            ch = source[pos]
            if ch == '"':
                raise CompileError([error("unterminated string literal", loc)])
            raise CompileError([error(f"illegal character {ch!r}", loc)])
        text = m.group()
        kind = m.lastgroup
        if kind == "op" and source.startswith("/*", pos):
            raise CompileError([error("unterminated block comment", loc)])
        if kind == "ident":
            if text == "π":
                text = "pi"
            tok_kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(tok_kind, text, loc))
        elif kind == "int":
            tokens.append(Token(TokenKind.INT, text, loc))
        elif kind == "float":
            tokens.append(Token(TokenKind.FLOAT, text, loc))
        elif kind == "string":
            tokens.append(Token(TokenKind.STRING, text, loc))
        elif kind == "op":
            tokens.append(Token(TokenKind.OP, text, loc))
        elif kind == "punct":
            tokens.append(Token(TokenKind.PUNCT, text, loc))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token(TokenKind.EOF, "", SourceLocation(line, pos - line_start + 1, pos)))
    return tokens
