"""Criterion registry and the three built-in test suites."""

from .criteria import CRITERIA, TestCriterion, criterion, is_known_criterion
from .outcomes import (
    FAILS,
    REPORT_ORDER,
    Assertion,
    Assertor,
    Outcome,
    OutcomeType,
    Pointer,
    apply_severity,
    finalize,
)
from .runner import (
    CustomTest,
    RunResult,
    load_custom_tests,
    profile_compatibility,
    run_data_suite,
    run_model_suite,
    run_project,
    run_query_suite,
)

__all__ = [
    "CRITERIA",
    "FAILS",
    "REPORT_ORDER",
    "Assertion",
    "Assertor",
    "CustomTest",
    "Outcome",
    "OutcomeType",
    "Pointer",
    "RunResult",
    "TestCriterion",
    "apply_severity",
    "criterion",
    "finalize",
    "is_known_criterion",
    "load_custom_tests",
    "profile_compatibility",
    "run_data_suite",
    "run_model_suite",
    "run_project",
    "run_query_suite",
]
