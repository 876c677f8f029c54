"""OWL 2 profile compatibility and OWL 2 RL consistency checks."""

from .profiles import Profile, ProfileRule, ProfileViolation, check_profile, class_expression_positions, load_rule_table
from .reasoner import (
    DEFAULT_MAX_ITERATIONS,
    ConsistencyResult,
    InconsistencyEvidence,
    IterationLimitExceeded,
    check_consistency,
    find_clashes,
    saturate_rl,
)

__all__ = [
    "DEFAULT_MAX_ITERATIONS",
    "ConsistencyResult",
    "InconsistencyEvidence",
    "IterationLimitExceeded",
    "Profile",
    "ProfileRule",
    "ProfileViolation",
    "check_consistency",
    "check_profile",
    "class_expression_positions",
    "find_clashes",
    "load_rule_table",
    "saturate_rl",
]
