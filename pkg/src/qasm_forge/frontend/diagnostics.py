"""Source locations and compiler diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceLocation:
    line: int = 1
    column: int = 1
    offset: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    loc: SourceLocation = field(default_factory=SourceLocation)
    filename: str | None = None

    def format(self, filename: str | None = None) -> str:
        name = filename or self.filename or "<input>"
        return f"{name}:{self.loc.line}:{self.loc.column}: {self.severity}: {self.message}"

    __str__ = format


class CompileError(Exception):
    """Raised when compilation produced one or more error diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(d.format() for d in self.diagnostics))


class InternalCompilerError(CompileError):
    """A broken compiler invariant (verifier failure, bad pass output)."""


def error(message: str, loc: SourceLocation | None = None) -> Diagnostic:
    return Diagnostic("error", message, loc or SourceLocation())
