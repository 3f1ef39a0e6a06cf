"""
Rule engine base classes for instance checks.

This module provides:
- Rule: Abstract base class for all instance rules
- RuleRegistry: Registry for managing and executing rules
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Dict, List

from ..models import ErrorCodes, FicpInstance, Issue, Severity, create_error

logger = logging.getLogger(__name__)


class Rule(ABC):
    """
    Abstract base class for all instance rules.

    Each rule should:
    - Have a unique ID (its FICxxx issue code)
    - Have a human-readable description
    - Implement validate() to check the compiled instance and return issues
    """

    @property
    @abstractmethod
    def id(self) -> str:
        """
        Unique rule identifier.

        Convention:
        - Errors: FIC300-399
        - Warnings: FIC400-499
        - Notes: FIC500-599
        """
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """Human-readable description of what this rule checks."""
        pass

    @property
    def severity(self) -> Severity:
        """Default severity for issues from this rule."""
        return Severity.ERROR

    @abstractmethod
    def validate(
        self,
        instance: FicpInstance,
        line_map: Dict[str, int]
    ) -> List[Issue]:
        """
        Run the check and return any issues found.

        Args:
            instance: The compiled instance
            line_map: Mapping of paths to line numbers

        Returns:
            List of Issue instances (can be empty)
        """
        pass

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} id={self.id}>"


class RuleRegistry:
    """
    Registry for managing and executing instance rules.
    """

    def __init__(self):
        self._core_rules: List[Rule] = []

    def register_core(self, rule: Rule) -> None:
        """Register a rule that always runs."""
        self._core_rules.append(rule)

    def get_core_rules(self) -> List[Rule]:
        return self._core_rules.copy()

    def run_core_rules(
        self,
        instance: FicpInstance,
        line_map: Dict[str, int]
    ) -> List[Issue]:
        """
        Run all rules and collect issues.

        A rule that raises is reported as FIC300 instead of aborting the run.
        """
        issues = []
        for rule in self._core_rules:
            try:
                issues.extend(rule.validate(instance, line_map))
            except Exception as e:
                logger.debug("rule %s crashed", rule.id, exc_info=True)
                issues.append(create_error(
                    code=ErrorCodes.RULE_FAILURE,
                    message=f"Rule {rule.id} failed: {e}",
                ))
        return issues

    def __repr__(self) -> str:
        return f"<RuleRegistry core={len(self._core_rules)}>"
