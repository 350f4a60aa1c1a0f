"""Shared diagnostic value types.

Every check in the toolkit (taxonomy shape, model validation, parsing,
chain lint) reports problems as Diagnostic values rather than raising,
so callers can collect and display all of them at once.
"""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    line: int  # 1-based
    column: int  # 1-based
    length: int = 1


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    location: str | None = None
    span: SourceSpan | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "location": self.location,
        }
        if self.span is not None:
            out["line"] = self.span.line
            out["column"] = self.span.column
        return out
