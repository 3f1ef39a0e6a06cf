"""
Instance rules.

- rule_base.py: Abstract Rule class and RuleRegistry
- instance_rules.py: core checks run on every compiled instance
"""

from ficoder.rules.rule_base import Rule, RuleRegistry
from ficoder.rules.instance_rules import CORE_RULES, register_core_rules

__all__ = ["Rule", "RuleRegistry", "CORE_RULES", "register_core_rules"]
