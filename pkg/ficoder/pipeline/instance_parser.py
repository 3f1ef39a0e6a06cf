"""
Instance file parser with line number preservation.

Instance files are JSON documents. They are read with ruamel.yaml (JSON is
a subset of YAML 1.2) so that every key and list item keeps its source line
for error reporting.
"""

from __future__ import annotations

from io import StringIO
from typing import Any, Dict, List, Optional, Tuple

from ruamel.yaml import YAML
from ruamel.yaml.comments import CommentedMap, CommentedSeq
from ruamel.yaml.error import YAMLError

from ..models import ErrorCodes, ParseResult, create_error


def _build_line_map(data: Any, prefix: str = "") -> Dict[str, int]:
    """
    Recursively map dotted paths to 1-based line numbers.

    List items are addressed by index: "receivers.0.has.1".
    """
    line_map: Dict[str, int] = {}

    if isinstance(data, CommentedMap):
        for key in data:
            path = f"{prefix}.{key}" if prefix else str(key)
            try:
                position = data.lc.key(key)
            except (AttributeError, KeyError, TypeError):
                position = None
            if position:
                line_map[path] = position[0] + 1
            value = data[key]
            if isinstance(value, (CommentedMap, CommentedSeq)):
                line_map.update(_build_line_map(value, path))

    elif isinstance(data, CommentedSeq):
        for i, item in enumerate(data):
            path = f"{prefix}.{i}"
            try:
                position = data.lc.item(i)
            except (AttributeError, KeyError, TypeError):
                position = None
            if position:
                line_map[path] = position[0] + 1
            if isinstance(item, (CommentedMap, CommentedSeq)):
                line_map.update(_build_line_map(item, path))

    return line_map


def _convert_to_plain(data: Any) -> Any:
    if isinstance(data, CommentedMap):
        return {k: _convert_to_plain(v) for k, v in data.items()}
    if isinstance(data, CommentedSeq):
        return [_convert_to_plain(item) for item in data]
    return data


def _extract_error_info(error: YAMLError) -> Tuple[Optional[int], str]:
    line = None
    message = str(error)
    mark = getattr(error, "problem_mark", None)
    if mark is not None:
        line = mark.line + 1
    problem = getattr(error, "problem", None)
    if problem:
        message = problem
        context = getattr(error, "context", None)
        if context:
            message = f"{context}: {message}"
    return line, message


def parse_instance_text(text: str) -> ParseResult:
    """
    Parse instance text, keeping line numbers.

    Returns:
        ParseResult with plain data and a line map, or a located error
    """
    yaml = YAML(typ="rt")
    try:
        data = yaml.load(StringIO(text))
    except YAMLError as e:
        line, message = _extract_error_info(e)
        return ParseResult(
            success=False,
            error=create_error(ErrorCodes.PARSE_ERROR, message, line=line),
        )

    if data is None:
        return ParseResult(
            success=False,
            error=create_error(
                ErrorCodes.EMPTY_DOCUMENT,
                "instance file is empty",
                suggestion='Start from {"q": 2, "n": 1, "K": 1, "receivers": [...]}',
            ),
        )

    return ParseResult(
        success=True,
        data=_convert_to_plain(data),
        line_map=_build_line_map(data),
    )


def get_line_for_path(line_map: Dict[str, int], path: List[str]) -> Optional[int]:
    """Line of the path, or of its nearest ancestor that has one."""
    for i in range(len(path), 0, -1):
        key = ".".join(str(p) for p in path[:i])
        if key in line_map:
            return line_map[key]
    return None
