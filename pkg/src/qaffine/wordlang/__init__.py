"""Formal words in the generating 1-morphisms: syntax, weight flow, rewrite rules and proof replay."""

from .flow import (UnsupportedFactor, Zero, factor_sources, left_adjoint, net_shift, normalize_shifts,
                   right_adjoint, target_weight, weight_flow)
from .rules import RULES, PatternMismatch, RuleResult, WeightFlowZero, apply_rule, sl3_family
from .syntax import GenSymbol, IndexOutOfRange, WordExpr, WordSyntaxError, parse

__all__ = [
    "GenSymbol",
    "WordExpr",
    "WordSyntaxError",
    "IndexOutOfRange",
    "parse",
    "Zero",
    "UnsupportedFactor",
    "weight_flow",
    "factor_sources",
    "target_weight",
    "right_adjoint",
    "left_adjoint",
    "net_shift",
    "normalize_shifts",
    "RULES",
    "RuleResult",
    "PatternMismatch",
    "WeightFlowZero",
    "apply_rule",
    "sl3_family",
]
