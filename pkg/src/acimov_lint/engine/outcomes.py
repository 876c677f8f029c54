from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

from ..project import Parameters, TestSubject, VersionDescriptor
from .criteria import TestCriterion


class OutcomeType(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"  # only before severity is applied
    MINOR_FAIL = "MinorFail"
    MAJOR_FAIL = "MajorFail"
    CANNOT_TELL = "CannotTell"
    NOT_TESTED = "NotTested"


# report section order, most severe first
REPORT_ORDER = (
    OutcomeType.MAJOR_FAIL,
    OutcomeType.MINOR_FAIL,
    OutcomeType.CANNOT_TELL,
    OutcomeType.NOT_TESTED,
    OutcomeType.PASS,
)
FAILS = frozenset({OutcomeType.FAIL, OutcomeType.MINOR_FAIL, OutcomeType.MAJOR_FAIL})


@dataclass(frozen=True)
class Pointer:
    kind: str  # uri | snippet | message
    value: str

    @classmethod
    def uri(cls, v: str) -> "Pointer":
        return cls("uri", v)

    @classmethod
    def message(cls, v: str) -> "Pointer":
        return cls("message", v)

    @classmethod
    def snippet(cls, v: str) -> "Pointer":
        return cls("snippet", v)


@dataclass(frozen=True)
class Outcome:
    type: OutcomeType
    title: str
    description: str
    pointers: tuple[Pointer, ...] = ()
    # identity of the finding, used to recognise the same finding on merged subjects
    key: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class Assertor:
    project: VersionDescriptor
    test_suite: VersionDescriptor
    developer: str
    trigger: str


@dataclass(frozen=True)
class Assertion:
    subject: TestSubject
    criterion: TestCriterion
    outcomes: tuple[Outcome, ...]
    assertor: Optional[Assertor] = None

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise ValueError("an assertion needs at least one outcome")

    def types(self) -> set[OutcomeType]:
        return {o.type for o in self.outcomes}

    def has_fail(self) -> bool:
        return bool(self.types() & FAILS)


def apply_severity(outcomes: Iterable[Outcome], criterion_id: str, params: Parameters) -> list[Outcome]:
    """Fail becomes MajorFail for blocking criteria and MinorFail otherwise."""
    blocking = criterion_id in params.blocking_errors
    out = []
    for o in outcomes:
        if o.type == OutcomeType.FAIL:
            o = replace(o, type=OutcomeType.MAJOR_FAIL if blocking else OutcomeType.MINOR_FAIL)
        out.append(o)
    return out


def finalize(assertions: Iterable[Assertion], params: Parameters) -> list[Assertion]:
    return [
        replace(a, outcomes=tuple(apply_severity(a.outcomes, a.criterion.id, params)))
        for a in assertions
    ]
