from .catalog import base_rules, derived_rules, get_rule, rule_catalog
from .match import Match, StaleMatch, apply, apply_rule, find_matches
from .rule import CertifyReport, RewriteRule, certify_rule

__all__ = [
    "RewriteRule",
    "CertifyReport",
    "certify_rule",
    "Match",
    "StaleMatch",
    "find_matches",
    "apply",
    "apply_rule",
    "base_rules",
    "derived_rules",
    "rule_catalog",
    "get_rule",
]
