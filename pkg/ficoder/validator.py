"""
Instance validation orchestrator.

Runs the ingestion pipeline in phases:
1. Parse the instance file (JSON, line numbers kept)
2. Load into document models and compile expressions
3. Run the instance rules
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional, Union

from .exceptions import LoadError, ParseError
from .models import ErrorCodes, FicpInstance, Issue, ValidationReport, create_error
from .pipeline.instance_loader import load_instance
from .pipeline.instance_parser import parse_instance_text
from .profiles.profile_loader import ProfileConfig, default_settings
from .rules import RuleRegistry, register_core_rules

logger = logging.getLogger(__name__)


def validate_instance_text(text: str, settings: Optional[ProfileConfig] = None) -> ValidationReport:
    """
    Validate instance text and compile it.

    Parse and load problems stop the pipeline; rule issues are collected.

    Returns:
        ValidationReport whose ``instance`` is set when there are no errors
    """
    settings = settings or default_settings()

    # =========================================================================
    # Phase 1: Parse
    # =========================================================================
    parsed = parse_instance_text(text)
    if not parsed.success:
        return ValidationReport.from_issues([parsed.error])

    # =========================================================================
    # Phase 2: Load and compile
    # =========================================================================
    instance, load_issues = load_instance(parsed.data, parsed.line_map)
    if instance is None:
        return ValidationReport.from_issues(load_issues)

    # =========================================================================
    # Phase 3: Instance rules
    # =========================================================================
    registry = RuleRegistry()
    register_core_rules(registry, settings)
    issues: List[Issue] = registry.run_core_rules(instance, parsed.line_map)
    logger.debug("%d rule issue(s) for %s", len(issues), instance.name or "instance")

    return ValidationReport.from_issues(issues, summary=instance.describe(), instance=instance)


def validate_instance_file(
    path: Union[str, Path],
    settings: Optional[ProfileConfig] = None,
) -> ValidationReport:
    """Read and validate an instance file; unreadable files become FIC003."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        return ValidationReport.from_issues([create_error(
            ErrorCodes.FILE_ERROR,
            f"cannot read {path}: {e.strerror or e}",
        )])
    return validate_instance_text(text, settings)


def validate_instance(instance: FicpInstance, settings: Optional[ProfileConfig] = None) -> ValidationReport:
    """Run the instance rules on an already compiled instance."""
    registry = RuleRegistry()
    register_core_rules(registry, settings or default_settings())
    issues = registry.run_core_rules(instance, {})
    return ValidationReport.from_issues(issues, summary=instance.describe(), instance=instance)


def load_instance_file(
    path: Union[str, Path],
    settings: Optional[ProfileConfig] = None,
) -> FicpInstance:
    """
    Load an instance for the algorithm commands.

    Raises:
        ParseError: the file is unreadable or not valid JSON
        LoadError: the document or a rule reported errors
    """
    report = validate_instance_file(path, settings)
    if report.success:
        return report.instance
    first = report.errors[0]
    if first.code.startswith("FIC0"):
        raise ParseError(str(first), first.line)
    detail = "; ".join(str(e) for e in report.errors)
    raise LoadError(f"invalid instance {path}: {detail}", report.errors)
