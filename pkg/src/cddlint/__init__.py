"""cddlint: Intrinsic Complexity Point (ICP) counting and budget enforcement
for Java sources, with @ICP annotation reconciliation and repository-history
evolution metrics."""

from .annotations import (
    DeclaredIcp,
    DriftReport,
    DriftStatus,
    MalformedIcp,
    RewriteConflict,
    apply_fix,
    extract_declared,
    reconcile,
)
from .engine import IcpSite, UnitAnalysis, Verdict, analyze_unit, verdict
from .methods import MethodStats, method_stats
from .rules import ConfigError, IcpCategory, RuleSet, default_rules, load_rules
from .syntax import ParseError, SourceUnit, parse_unit, physical_loc, tokenize

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DeclaredIcp",
    "DriftReport",
    "DriftStatus",
    "IcpCategory",
    "IcpSite",
    "MalformedIcp",
    "MethodStats",
    "ParseError",
    "RewriteConflict",
    "RuleSet",
    "SourceUnit",
    "UnitAnalysis",
    "Verdict",
    "analyze_unit",
    "apply_fix",
    "default_rules",
    "extract_declared",
    "load_rules",
    "method_stats",
    "parse_unit",
    "physical_loc",
    "reconcile",
    "tokenize",
    "verdict",
]
