"""
Core instance rules.

These run on a compiled FicpInstance after the document loaded and every
expression compiled.
"""

from __future__ import annotations

from typing import Dict, List, Optional

import numpy as np

from ..models import (
    ErrorCodes,
    FicpInstance,
    Issue,
    Severity,
    create_error,
    create_info,
    create_warning,
)
from ..models.linear import classify_instance
from ..pipeline.instance_parser import get_line_for_path
from ..profiles.profile_loader import ProfileConfig, default_settings
from .rule_base import Rule, RuleRegistry


class WantSetNonEmptyRule(Rule):
    """Every receiver must demand something."""

    @property
    def id(self) -> str:
        return ErrorCodes.EMPTY_WANT_SET

    @property
    def description(self) -> str:
        return "Every receiver must have a non-empty Want-set"

    def validate(self, instance: FicpInstance, line_map: Dict[str, int]) -> List[Issue]:
        issues = []
        for i, receiver in enumerate(instance.receivers):
            if not receiver.wants:
                path = ["receivers", str(i), "wants"]
                issues.append(create_error(
                    code=self.id,
                    message=f"Receiver R{i + 1} has an empty Want-set",
                    path=path,
                    line=get_line_for_path(line_map, path),
                    suggestion='Add at least one demanded function, e.g. "wants": ["x1"]',
                ))
        return issues


class VertexBudgetRule(Rule):
    """Warn when the confusion graph would not fit in the vertex budget."""

    def __init__(self, settings: Optional[ProfileConfig] = None):
        self.settings = settings or default_settings()

    @property
    def id(self) -> str:
        return ErrorCodes.VERTEX_BUDGET

    @property
    def description(self) -> str:
        return "Warn when q^{nK} exceeds the vertex budget"

    @property
    def severity(self) -> Severity:
        return Severity.WARNING

    def validate(self, instance: FicpInstance, line_map: Dict[str, int]) -> List[Issue]:
        budget = self.settings.vertex_budget
        if instance.vcount <= budget:
            return []
        return [create_warning(
            code=self.id,
            message=(
                f"confusion graph has {instance.vcount} vertices, "
                f"more than the vertex budget of {budget}"
            ),
            suggestion="Graph commands will refuse this instance; raise vertex_budget in a profile",
        )]


class VacuousDemandRule(Rule):
    """
    Warn when a receiver's demand is a function of its Has-value alone.

    Such a receiver is never confused: its Want-value is constant on every
    Has-fiber.
    """

    def __init__(self, settings: Optional[ProfileConfig] = None):
        self.settings = settings or default_settings()

    @property
    def id(self) -> str:
        return ErrorCodes.VACUOUS_DEMAND

    @property
    def description(self) -> str:
        return "Warn when a demand is decodable from side information alone"

    @property
    def severity(self) -> Severity:
        return Severity.WARNING

    def validate(self, instance: FicpInstance, line_map: Dict[str, int]) -> List[Issue]:
        if instance.vcount > self.settings.vertex_budget:
            return []
        issues = []
        for i, receiver in enumerate(instance.receivers):
            if not receiver.wants:
                continue
            hc = instance.has_classes(i)
            wc = instance.want_classes(i)
            pairs = np.unique(np.stack([hc, wc], axis=1), axis=0).shape[0]
            if pairs == np.unique(hc).size:
                path = ["receivers", str(i), "wants"]
                issues.append(create_warning(
                    code=self.id,
                    message=f"Receiver R{i + 1} can compute its Want-set from its Has-set alone",
                    path=path,
                    line=get_line_for_path(line_map, path),
                    suggestion="This receiver adds no edges to the confusion graph",
                ))
        return issues


class ArityRelaxedRule(Rule):
    """Note functions whose output count differs from the block length."""

    @property
    def id(self) -> str:
        return ErrorCodes.ARITY_RELAXED

    @property
    def description(self) -> str:
        return "Note functions whose output arity differs from n"

    @property
    def severity(self) -> Severity:
        return Severity.INFO

    def validate(self, instance: FicpInstance, line_map: Dict[str, int]) -> List[Issue]:
        issues = []
        for i, receiver in enumerate(instance.receivers):
            for kind, funcs in (("has", receiver.has), ("wants", receiver.wants)):
                for j, f in enumerate(funcs):
                    if f.arity_out != instance.n:
                        path = ["receivers", str(i), kind, str(j)]
                        issues.append(create_info(
                            code=self.id,
                            message=(
                                f"{f.render(instance.n)} has {f.arity_out} output(s) "
                                f"with block length n={instance.n}"
                            ),
                            path=path,
                            line=get_line_for_path(line_map, path),
                        ))
        return issues


class LinearClassificationRule(Rule):
    """Report whether the instance is linear, affine or nonlinear."""

    def __init__(self, settings: Optional[ProfileConfig] = None):
        self.settings = settings or default_settings()

    @property
    def id(self) -> str:
        return ErrorCodes.LINEARITY_CLASS

    @property
    def description(self) -> str:
        return "Classify the instance as linear, affine or nonlinear"

    @property
    def severity(self) -> Severity:
        return Severity.INFO

    def validate(self, instance: FicpInstance, line_map: Dict[str, int]) -> List[Issue]:
        kind = classify_instance(instance, self.settings.linearity_limit)
        return [create_info(code=self.id, message=f"instance is {kind}")]


class ConfusabilityNoteRule(Rule):
    """State how confusability is evaluated."""

    @property
    def id(self) -> str:
        return ErrorCodes.CONFUSABILITY_NOTE

    @property
    def description(self) -> str:
        return "Confusability compares Want-values of both message vectors"

    @property
    def severity(self) -> Severity:
        return Severity.INFO

    def validate(self, instance: FicpInstance, line_map: Dict[str, int]) -> List[Issue]:
        return [create_info(
            code=self.id,
            message="x and x' are confusable for R_i when H_i(x) = H_i(x') and W_i(x) != W_i(x')",
        )]


# List of all core rule classes
CORE_RULES = [
    WantSetNonEmptyRule,
    VertexBudgetRule,
    VacuousDemandRule,
    ArityRelaxedRule,
    LinearClassificationRule,
    ConfusabilityNoteRule,
]

_CONFIGURED = (VertexBudgetRule, VacuousDemandRule, LinearClassificationRule)


def register_core_rules(registry: RuleRegistry, settings: Optional[ProfileConfig] = None) -> None:
    """Register all core rules with the given registry."""
    for rule_class in CORE_RULES:
        if rule_class in _CONFIGURED:
            registry.register_core(rule_class(settings))
        else:
            registry.register_core(rule_class())


def get_core_rule_by_id(rule_id: str) -> Optional[Rule]:
    for rule_class in CORE_RULES:
        rule = rule_class()
        if rule.id == rule_id:
            return rule
    return None
