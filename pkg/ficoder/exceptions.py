"""
Custom exceptions for the functional index coding toolkit.
"""

from __future__ import annotations

from typing import Any, Optional


class FicoderError(Exception):
    """Base exception for all toolkit errors."""
    pass


# =============================================================================
# Field arithmetic
# =============================================================================

class FieldError(FicoderError):
    """Raised for invalid field parameters or symbols."""
    pass


class ZeroInverseError(FieldError):
    """Raised when inverting the zero element."""

    def __init__(self, q: int):
        self.q = q
        super().__init__(f"0 has no multiplicative inverse in F_{q}")


class LengthMismatchError(FieldError):
    """Raised when two words of different lengths are compared."""

    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"word lengths differ: {left} != {right}")


class OutOfRangeError(FieldError):
    """Raised when a vertex label lies outside [0, q^len)."""

    def __init__(self, value: int, limit: int):
        self.value = value
        self.limit = limit
        super().__init__(f"label {value} outside [0, {limit})")


# =============================================================================
# Instance ingestion
# =============================================================================

class InstanceError(FicoderError):
    """Raised for malformed instances."""
    pass


class ParseError(InstanceError):
    """Raised when an instance file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(message)


class LoadError(InstanceError):
    """Raised when a parsed document does not form a valid instance."""

    def __init__(self, message: str, issues: Optional[list] = None):
        self.issues = issues or []
        super().__init__(message)


class ExprSyntaxError(InstanceError):
    """Raised when an expression does not match the grammar."""

    def __init__(self, message: str, text: str = "", column: Optional[int] = None):
        self.text = text
        self.column = column
        where = f" at column {column}" if column else ""
        super().__init__(f"{message}{where}: {text!r}")


class BadVariableError(InstanceError):
    """Raised when a variable names a message or sub-packet that does not exist."""
    pass


class MajUnsupportedError(InstanceError):
    """Raised when a Boolean-only operator is used over a field other than F_2."""
    pass


# =============================================================================
# Graphs and search
# =============================================================================

class GraphError(FicoderError):
    """Raised for invalid graph operations."""
    pass


class SizeLimitError(GraphError):
    """Raised when a graph would exceed the configured vertex budget."""

    def __init__(self, vcount: int, budget: int):
        self.vcount = vcount
        self.budget = budget
        super().__init__(f"{vcount} vertices exceed the vertex budget of {budget}")


class VertexMismatchError(GraphError):
    """Raised when combining graphs on different vertex sets."""
    pass


class NotLinearReceiverError(GraphError):
    """Raised when a connection set is requested for a nonlinear receiver."""

    def __init__(self, receiver: int, reason: str = ""):
        self.receiver = receiver
        detail = f": {reason}" if reason else ""
        super().__init__(f"receiver R{receiver + 1} is not linear{detail}")


class BadConnectionSetError(GraphError):
    """Raised when a connection set contains zero or is not closed under negation."""
    pass


class SameVertexError(GraphError):
    """Raised when a confusability test is asked about a vertex and itself."""
    pass


class SearchTimeout(FicoderError):
    """Raised when a budgeted search stops before certifying its answer."""

    def __init__(
        self,
        message: str,
        lower: Optional[int] = None,
        upper: Optional[int] = None,
        best: Any = None,
        nodes: int = 0,
    ):
        self.lower = lower
        self.upper = upper
        self.best = best
        self.nodes = nodes
        super().__init__(f"{message} (bounds [{lower}, {upper}] after {nodes} nodes)")


class MissingAlphaError(FicoderError):
    """Raised when a fractional bound is requested without an independence number."""
    pass


# =============================================================================
# Codes
# =============================================================================

class CodecError(FicoderError):
    """Raised for invalid encodings and assignments."""
    pass


class ImproperColoringError(CodecError):
    """Raised when a coloring puts two adjacent vertices in one class."""

    def __init__(self, u: int, v: int):
        self.u = u
        self.v = v
        super().__init__(f"adjacent vertices {u} and {v} share a color class")


class AssignmentCollisionError(CodecError):
    """Raised when two classes are given the same codeword."""
    pass


class UnknownKeyError(CodecError, KeyError):
    """Raised when decoding a (codeword, Has-value) pair that never occurs."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown decoder key"


class EccError(FicoderError):
    """Raised for invalid error-correction parameters."""
    pass


class DimensionMismatchError(EccError):
    """Raised when an outer code cannot carry the inner codewords."""
    pass


class UnknownCodeError(EccError):
    """Raised for an unknown built-in code name."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown code: {name}")


class BudgetExceededError(EccError):
    """Raised when an exhaustive simulation exceeds its trial budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"simulation needs {required} trials, budget is {budget}")


class NotLinearInstanceError(EccError):
    """Raised when a linear-only check is run on a nonlinear instance."""
    pass


# =============================================================================
# Profiles
# =============================================================================

class ProfileNotFoundError(FicoderError):
    """Raised when a requested profile doesn't exist."""

    def __init__(self, profile_name: str):
        self.profile_name = profile_name
        super().__init__(f"Profile not found: {profile_name}")


class ProfileConfigError(FicoderError):
    """Raised when a profile configuration is invalid."""
    pass


# =============================================================================
# Command line
# =============================================================================

class UsageError(FicoderError):
    """Raised when a command is missing an input it needs."""
    pass
