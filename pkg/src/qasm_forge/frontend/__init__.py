from .diagnostics import CompileError, Diagnostic, InternalCompilerError, SourceLocation
from .lexer import Token, TokenKind, tokenize
from .parser import parse, parse_tokens

__all__ = [
    "CompileError", "Diagnostic", "InternalCompilerError", "SourceLocation",
    "Token", "TokenKind", "tokenize", "parse", "parse_tokens",
]
