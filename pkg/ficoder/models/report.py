"""
Result objects: validation issues, validation reports and command reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class Severity(str, Enum):
    """Severity levels for validation issues."""
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class ErrorCodes:
    """
    Error code ranges:
    - 0xx: Parse errors (file / JSON level)
    - 1xx: Document structure errors (Pydantic level)
    - 2xx: Expression compilation errors
    - 3xx: Instance rule errors
    - 4xx: Instance rule warnings
    - 5xx: Instance notes
    """

    # Parse errors (0xx)
    PARSE_ERROR = "FIC001"
    EMPTY_DOCUMENT = "FIC002"
    FILE_ERROR = "FIC003"

    # Document structure errors (1xx)
    DOCUMENT_ERROR = "FIC101"
    UNKNOWN_FIELD = "FIC102"
    TYPE_ERROR = "FIC103"
    STRUCTURE_ERROR = "FIC104"

    # Expression compilation errors (2xx)
    EXPR_SYNTAX = "FIC201"
    BAD_VARIABLE = "FIC202"
    BOOLEAN_OPERATOR_FIELD = "FIC203"

    # Instance rule errors (3xx)
    RULE_FAILURE = "FIC300"
    EMPTY_WANT_SET = "FIC301"

    # Instance rule warnings (4xx)
    VACUOUS_DEMAND = "FIC401"
    VERTEX_BUDGET = "FIC402"

    # Notes (5xx)
    ARITY_RELAXED = "FIC501"
    LINEARITY_CLASS = "FIC502"
    CONFUSABILITY_NOTE = "FIC503"


# Mapping for error code descriptions (for --list-rules)
ERROR_CODE_DESCRIPTIONS = {
    "FIC001": "Instance file is not valid JSON",
    "FIC002": "Instance file is empty",
    "FIC003": "Instance file cannot be read",
    "FIC101": "Instance document failed validation",
    "FIC102": "Unknown field in instance document",
    "FIC103": "Wrong type for field",
    "FIC104": "Invalid structure (expected an object)",
    "FIC201": "Expression syntax error",
    "FIC202": "Variable outside the instance",
    "FIC203": "maj()/not() used over a field other than F_2",
    "FIC300": "Instance rule crashed",
    "FIC301": "Receiver has an empty Want-set",
    "FIC401": "Demand is decodable from side information alone",
    "FIC402": "Confusion graph exceeds the vertex budget",
    "FIC501": "Function output arity differs from block length",
    "FIC502": "Linearity classification of the instance",
    "FIC503": "Confusability compares Want-values of both vectors",
}


def severity_for_code(code: str) -> Severity:
    number = int(code[3:])
    if number < 400:
        return Severity.ERROR
    if number < 500:
        return Severity.WARNING
    return Severity.INFO


@dataclass
class Issue:
    """A single validation finding."""
    severity: Severity
    code: str
    message: str
    path: List[str] = field(default_factory=list)
    line: Optional[int] = None
    suggestion: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "path": self.path,
            "line": self.line,
            "suggestion": self.suggestion,
        }

    def format_path(self) -> str:
        return ".".join(self.path) if self.path else "(root)"

    def __str__(self) -> str:
        line_info = f" (line {self.line})" if self.line else ""
        base = f"[{self.code}] {self.format_path()}{line_info}: {self.message}"
        if self.suggestion:
            base += f"\n    → {self.suggestion}"
        return base


@dataclass
class ValidationReport:
    """Complete result of validating an instance."""
    success: bool
    errors: List[Issue] = field(default_factory=list)
    warnings: List[Issue] = field(default_factory=list)
    notes: List[Issue] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    instance: Any = None

    @classmethod
    def from_issues(cls, issues: List[Issue], summary=None, instance=None) -> "ValidationReport":
        errors = [i for i in issues if i.severity == Severity.ERROR]
        warnings = [i for i in issues if i.severity == Severity.WARNING]
        notes = [i for i in issues if i.severity == Severity.INFO]
        return cls(
            success=not errors,
            errors=errors,
            warnings=warnings,
            notes=notes,
            summary=summary or {},
            instance=instance if not errors else None,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "success": self.success,
            "summary": self.summary,
            "error_count": len(self.errors),
            "warning_count": len(self.warnings),
            "errors": [e.to_dict() for e in self.errors],
            "warnings": [w.to_dict() for w in self.warnings],
            "notes": [n.to_dict() for n in self.notes],
        }

    @property
    def error_count(self) -> int:
        return len(self.errors)

    @property
    def warning_count(self) -> int:
        return len(self.warnings)

    def codes(self) -> List[str]:
        return [i.code for i in self.errors + self.warnings + self.notes]


@dataclass
class ParseResult:
    """Result of the parsing phase."""
    success: bool
    data: Optional[Any] = None
    line_map: Dict[str, int] = field(default_factory=dict)
    error: Optional[Issue] = None


def create_error(
    code: str,
    message: str,
    path: Optional[List[str]] = None,
    line: Optional[int] = None,
    suggestion: Optional[str] = None,
) -> Issue:
    return Issue(Severity.ERROR, code, message, path or [], line, suggestion)


def create_warning(
    code: str,
    message: str,
    path: Optional[List[str]] = None,
    line: Optional[int] = None,
    suggestion: Optional[str] = None,
) -> Issue:
    return Issue(Severity.WARNING, code, message, path or [], line, suggestion)


def create_info(
    code: str,
    message: str,
    path: Optional[List[str]] = None,
    line: Optional[int] = None,
) -> Issue:
    return Issue(Severity.INFO, code, message, path or [], line)


# =============================================================================
# Command reports
# =============================================================================

@dataclass
class CommandReport:
    """
    Structured output of one CLI command.

    Sections keep insertion order so that text and JSON renderings are
    deterministic.
    """
    command: str
    status: str
    sections: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    artifacts: Dict[str, str] = field(default_factory=dict)
    listing: List[str] = field(default_factory=list)
    validation: Optional[ValidationReport] = field(default=None, repr=False)

    def section(self, title: str) -> Dict[str, Any]:
        return self.sections.setdefault(title, {})

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"command": self.command, "status": self.status}
        data.update(self.sections)
        if self.artifacts:
            data["artifacts"] = dict(self.artifacts)
        if self.listing:
            data["listing"] = list(self.listing)
        return data
