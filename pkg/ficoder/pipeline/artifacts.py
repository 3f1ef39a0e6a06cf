"""
Reading and writing code artifacts.

Code-export (assignment) files list one class per line:

    {0,7} -> 00
    {1,6} -> 01

Matrix files start with "q rows cols" followed by one row per line:

    2 4 3
    1 0 0
    0 1 1
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ParseError
from ..field import format_symbols

Assignment = List[Tuple[Tuple[int, ...], Tuple[int, ...]]]


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _parse_symbols(text: str, line: int) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    tokens = text.replace(",", " ").split()
    if len(tokens) == 1:
        tokens = list(tokens[0])
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise ParseError(f"bad codeword symbols {text!r}", line) from None


def parse_assignment(text: str) -> Assignment:
    """
    Parse code-export text into (vertex labels, codeword symbols) pairs.

    Braces, commas and whitespace around labels are all accepted.
    """
    entries: Assignment = []
    for number, line in _content_lines(text):
        if "->" not in line:
            raise ParseError(f"expected '<labels> -> <codeword>', got {line!r}", number)
        left, right = line.split("->", 1)
        label_text = left.replace("{", " ").replace("}", " ").replace(",", " ")
        try:
            labels = tuple(int(t) for t in label_text.split())
        except ValueError:
            raise ParseError(f"bad vertex labels {left.strip()!r}", number) from None
        if not labels:
            raise ParseError("a class needs at least one vertex label", number)
        entries.append((labels, _parse_symbols(right, number)))
    if not entries:
        raise ParseError("assignment file contains no classes")
    return entries


def format_assignment(entries: Sequence[Tuple[Sequence[int], Sequence[int]]], q: int) -> str:
    lines = []
    for labels, symbols in entries:
        joined = ",".join(str(int(v)) for v in labels)
        lines.append(f"{{{joined}}} -> {format_symbols(symbols, q)}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> Tuple[int, np.ndarray]:
    """
    Parse matrix-file text.

    Returns:
        Tuple of (q, rows x cols integer matrix)
    """
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("matrix file is empty")
    number, header = lines[0]
    try:
        q, rows, cols = (int(t) for t in header.split())
    except ValueError:
        raise ParseError(f"header must be 'q rows cols', got {header!r}", number) from None
    body = lines[1:]
    # zero-length codes: format_matrix writes blank rows
    if cols == 0 and not body:
        return q, np.zeros((rows, 0), dtype=np.int64)
    if len(body) != rows:
        raise ParseError(f"header declares {rows} rows, found {len(body)}", number)
    matrix = np.zeros((rows, cols), dtype=np.int64)
    for r, (line_no, line) in enumerate(body):
        symbols = _parse_symbols(line, line_no)
        if len(symbols) != cols:
            raise ParseError(f"row {r + 1} has {len(symbols)} entries, expected {cols}", line_no)
        if any(not 0 <= s < q for s in symbols):
            raise ParseError(f"row {r + 1} has entries outside F_{q}", line_no)
        matrix[r] = symbols
    return q, matrix


def format_matrix(matrix: np.ndarray, q: int) -> str:
    matrix = np.asarray(matrix, dtype=np.int64).reshape(np.shape(matrix)[0], -1)
    rows, cols = matrix.shape
    lines = [f"{q} {rows} {cols}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in matrix)
    return "\n".join(lines) + "\n"


def read_assignment(path: Union[str, Path]) -> Assignment:
    return parse_assignment(_read(path))


def read_matrix(path: Union[str, Path]) -> Tuple[int, np.ndarray]:
    return parse_matrix(_read(path))


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
