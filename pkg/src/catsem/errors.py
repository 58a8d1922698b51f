"""Exception types and validation reports shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class CatsemError(Exception):
    """Base class for all errors raised by catsem."""


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: tuple = ()

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    """Every violated law found while validating one structure."""

    kind: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def add(self, code: str, message: str, *witness) -> None:
        self.violations.append(Violation(code, message, tuple(witness)))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)

    def raise_if_failed(self) -> None:
        if self.violations:
            raise ValidationError(self)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "ok": self.ok,
                "violations": [v.to_dict() for v in self.violations]}

    def __str__(self) -> str:
        if self.ok:
            return f"{self.kind}: valid"
        lines = [f"{self.kind}: {len(self.violations)} violation(s)"]
        lines += [f"  {v.code}: {v.message}" for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        return "\n".join(lines)


class ValidationError(CatsemError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report

    @property
    def code(self) -> str:
        return self.report.violations[0].code if self.report.violations else ""

    @property
    def codes(self) -> list[str]:
        return self.report.codes


class BudgetExceeded(CatsemError):
    def __init__(self, count: int, budget: int, what: str = "candidates"):
        super().__init__(f"budget exceeded: {count} {what} > {budget}")
        self.count = count
        self.budget = budget


class NonCospan(CatsemError):
    pass


class NotAFibration(CatsemError):
    pass


class NotDiscrete(CatsemError):
    pass


class NotSubcategorical(CatsemError):
    pass


class NotFull(CatsemError):
    pass


class NotLex(CatsemError):
    pass


class NotRepresentable(CatsemError):
    pass


class NotContextual(CatsemError):
    pass


class SliceInfinite(CatsemError):
    def __init__(self, depth: int, message: str = ""):
        super().__init__(message or f"contextual slice does not close (depth {depth})")
        self.depth = depth


class PreconditionFailed(CatsemError):
    pass


class ConstructionInapplicable(CatsemError):
    pass


class CyclicGraph(CatsemError):
    pass


class NotAPartialOrder(CatsemError):
    pass


class NotAMonoid(CatsemError):
    pass


class DocumentSyntaxError(CatsemError):
    def __init__(self, message: str, line: int = 1):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownKind(CatsemError):
    pass


class VersionMismatch(CatsemError):
    pass
