"""
Instance loader: parsed documents into compiled FicpInstance objects.

Structure errors come from the Pydantic document models; expression errors
come from the expression parser. Both are collected as located issues.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from ..exceptions import (
    BadVariableError,
    ExprSyntaxError,
    LoadError,
    MajUnsupportedError,
)
from ..field import PrimeField
from ..models import (
    ErrorCodes,
    FicpInstance,
    FuncDef,
    InstanceDocument,
    Issue,
    Receiver,
    create_error,
    parse_expr,
)
from .instance_parser import get_line_for_path


def _format_pydantic_error(error: dict) -> Tuple[str, str, List[str]]:
    """
    Turn one Pydantic error into (code, message, path).
    """
    error_type = error.get("type", "")
    msg = error.get("msg", "Validation error")
    loc = error.get("loc", ())
    path = [str(item) for item in loc]
    code = ErrorCodes.DOCUMENT_ERROR

    if error_type == "extra_forbidden":
        code = ErrorCodes.UNKNOWN_FIELD
        msg = f"Unknown field '{loc[-1] if loc else 'unknown'}' is not allowed"
    elif error_type == "missing":
        msg = f"Required field '{loc[-1] if loc else 'unknown'}' is missing"
    elif error_type in ("int_type", "int_parsing", "string_type", "list_type"):
        code = ErrorCodes.TYPE_ERROR
    elif error_type == "value_error":
        msg = msg.replace("Value error, ", "")

    # union members add their own loc suffix ("str", "list[str]")
    path = [p for p in path if p not in ("str", "list[str]")]
    return code, msg, path


_EXPR_CODES = {
    ExprSyntaxError: ErrorCodes.EXPR_SYNTAX,
    BadVariableError: ErrorCodes.BAD_VARIABLE,
    MajUnsupportedError: ErrorCodes.BOOLEAN_OPERATOR_FIELD,
}


def _compile_functions(
    entries: List[Any],
    doc: InstanceDocument,
    base_path: List[str],
    line_map: Dict[str, int],
    issues: List[Issue],
) -> Tuple[FuncDef, ...]:
    funcs = []
    for j, entry in enumerate(entries):
        texts = [entry] if isinstance(entry, str) else list(entry)
        outputs = []
        for k, text in enumerate(texts):
            path = base_path + [str(j)] if isinstance(entry, str) else base_path + [str(j), str(k)]
            try:
                outputs.append(parse_expr(text, doc.q, doc.n, doc.K))
            except (ExprSyntaxError, BadVariableError, MajUnsupportedError) as e:
                issues.append(create_error(
                    code=_EXPR_CODES[type(e)],
                    message=str(e),
                    path=path,
                    line=get_line_for_path(line_map, path),
                ))
        funcs.append(FuncDef(tuple(outputs)))
    return tuple(funcs)


def load_instance(
    data: Any,
    line_map: Optional[Dict[str, int]] = None,
) -> Tuple[Optional[FicpInstance], List[Issue]]:
    """
    Convert a parsed document into a FicpInstance.

    Args:
        data: Parsed JSON as plain Python data
        line_map: Path to line mapping from the parser

    Returns:
        Tuple of (instance, issues); instance is None when any error occurred
    """
    line_map = line_map or {}
    issues: List[Issue] = []

    if not isinstance(data, dict):
        issues.append(create_error(
            code=ErrorCodes.STRUCTURE_ERROR,
            message=f"Top level must be an object, got {type(data).__name__}",
            suggestion='Use {"q": ..., "n": ..., "K": ..., "receivers": [...]}',
        ))
        return None, issues

    try:
        doc = InstanceDocument.model_validate(data)
    except ValidationError as e:
        for error in e.errors():
            code, msg, path = _format_pydantic_error(error)
            issues.append(create_error(
                code=code,
                message=msg,
                path=path,
                line=get_line_for_path(line_map, path),
            ))
        return None, issues

    receivers = []
    for i, rdoc in enumerate(doc.receivers):
        has = _compile_functions(rdoc.has, doc, ["receivers", str(i), "has"], line_map, issues)
        wants = _compile_functions(rdoc.wants, doc, ["receivers", str(i), "wants"], line_map, issues)
        receivers.append(Receiver(has=has, wants=wants))

    if issues:
        return None, issues

    instance = FicpInstance(
        field=PrimeField(doc.q),
        n=doc.n,
        K=doc.K,
        receivers=tuple(receivers),
        name=doc.name,
    )
    return instance, []


def instance_from_dict(data: Dict[str, Any]) -> FicpInstance:
    """
    Build an instance from a plain dictionary.

    Raises:
        LoadError: carrying the collected issues
    """
    instance, issues = load_instance(data)
    if instance is None:
        detail = "; ".join(str(i) for i in issues)
        raise LoadError(f"invalid instance: {detail}", issues)
    return instance
