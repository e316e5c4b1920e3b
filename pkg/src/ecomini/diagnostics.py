"""Positioned compiler diagnostics and the error codes used across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple


class Pos(NamedTuple):
    file: str
    line: int
    col: int


# Static codes (frontend + analysis).
E_UNKNOWN_NAME = "E001"
E_UNTERMINATED_STRING = "E002"
E_ILLEGAL_CHAR = "E003"
E_SYNTAX = "E004"
E_RESERVED = "E005"
E_INT_RANGE = "E006"
E_CYCLIC_BASE = "E007"
E_THIS_IN_STATIC = "E008"
E_NOT_EXTENSIBLE = "E010"
E_BEHAVIOR_NO_SIG = "E011"
E_BAD_CALL_E_METHOD = "E012"
E_EXT_CTOR_PARAM = "E013"
E_PRIVATE_CTOR = "E014"
E_CTOR_ARITY = "E015"
E_ARITY = "E016"
E_DYNAMIC_NO_EXTEND = "E020"
E_CLASSER_PUBLIC_CTOR = "E021"
E_NOT_A_CLASSER = "E022"
E_SIG_NOT_EXTENSIBLE = "E023"
E_DUPLICATE = "E030"

# Runtime codes.
R_CLASSER_OCCUPIED = "R100"
R_LIVE_EXTENSIONS = "R101"
R_WRITE_BARRIER = "R102"
R_CLASSER_ABSENT = "R103"
R_EVAL = "R104"
R_PHASE_THROW = "R105"


@dataclass(frozen=True, order=True)
class Diagnostic:
    file: str
    line: int
    col: int
    code: str
    message: str

    @classmethod
    def at(cls, pos: Pos, code: str, message: str) -> "Diagnostic":
        return cls(pos.file, pos.line, pos.col, code, message)

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}: error[{self.code}]: {self.message}"


class CompileError(Exception):
    """Raised by a pipeline stage that produced one or more diagnostics."""

    def __init__(self, diagnostics: Iterable[Diagnostic], file_order: list[str] | None = None):
        self.diagnostics = sort_diagnostics(diagnostics, file_order)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


def sort_diagnostics(diagnostics: Iterable[Diagnostic], file_order: list[str] | None = None) -> list[Diagnostic]:
    """Order by input file (command-line order when given), then line and column."""
    rank = {name: i for i, name in enumerate(file_order or [])}
    return sorted(
        set(diagnostics),
        key=lambda d: (rank.get(d.file, len(rank)), d.file, d.line, d.col, d.code, d.message),
    )
