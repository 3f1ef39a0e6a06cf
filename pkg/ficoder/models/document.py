"""
Pydantic models for instance documents.

These mirror the JSON file layout before expressions are compiled:

    {"q": 2, "n": 1, "K": 3,
     "receivers": [{"has": ["x1"], "wants": ["x2 + x3", "x1 + x3"]}, ...]}

A string is a single-output function; an inner list of strings is one
multi-output function, e.g. ["x1_1", "x1_2"].
"""

from __future__ import annotations

from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..field import is_prime

FunctionSpec = Union[str, List[str]]


class ReceiverDocument(BaseModel):
    """One receiver: Has-set and Want-set as expression text."""
    model_config = ConfigDict(extra="forbid")

    has: List[FunctionSpec] = Field(default_factory=list)
    wants: List[FunctionSpec] = Field(default_factory=list)

    @field_validator("has", "wants")
    @classmethod
    def validate_functions(cls, v):
        """Multi-output functions need at least one output."""
        for item in v:
            if isinstance(item, list) and len(item) == 0:
                raise ValueError("a multi-output function needs at least one expression")
        return v


class InstanceDocument(BaseModel):
    """Top-level instance document."""
    model_config = ConfigDict(extra="forbid")

    q: int = Field(ge=2)
    n: int = Field(default=1, ge=1)
    K: int = Field(ge=1)
    receivers: List[ReceiverDocument] = Field(min_length=1)
    name: Optional[str] = None
    description: Optional[str] = None

    @field_validator("q")
    @classmethod
    def validate_prime(cls, v):
        """Only prime field sizes are supported."""
        if not is_prime(v):
            raise ValueError(f"q must be prime, got {v}")
        return v
