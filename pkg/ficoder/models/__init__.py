"""
Data models for the toolkit.

- report.py: Issue, ValidationReport, CommandReport, ErrorCodes
- document.py: InstanceDocument, ReceiverDocument (Pydantic models)
- expressions.py: expression AST and parser
- instance.py: FuncDef, Receiver, FicpInstance
- linear.py: LinearForm, NotAffine, extract_linear
"""

from ficoder.models.report import (
    Severity,
    ErrorCodes,
    Issue,
    ValidationReport,
    ParseResult,
    CommandReport,
    create_error,
    create_warning,
    create_info,
)
from ficoder.models.document import InstanceDocument, ReceiverDocument
from ficoder.models.expressions import Expr, parse_expr
from ficoder.models.instance import (
    FuncDef,
    Receiver,
    FicpInstance,
    eval_func,
    has_value,
    want_value,
    lift_instance,
)
from ficoder.models.linear import LinearForm, NotAffine, extract_linear

__all__ = [
    "Severity",
    "ErrorCodes",
    "Issue",
    "ValidationReport",
    "ParseResult",
    "CommandReport",
    "create_error",
    "create_warning",
    "create_info",
    "InstanceDocument",
    "ReceiverDocument",
    "Expr",
    "parse_expr",
    "FuncDef",
    "Receiver",
    "FicpInstance",
    "eval_func",
    "has_value",
    "want_value",
    "lift_instance",
    "LinearForm",
    "NotAffine",
    "extract_linear",
]
