"""Runs the model, data and query suites over assembled test subjects."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from ..errors import ParseError
from ..owl import Profile, check_profile
from ..owl.reasoner import IterationLimitExceeded
from ..project import (
    GraphCache,
    Parameters,
    ProjectLayout,
    TestSubject,
    assemble_data_subjects,
    assemble_model_subjects,
    assemble_query_subjects,
    infer_namespace,
    ontology_graph,
    scan_repository,
    with_namespace,
)
from ..rdf.ops import merge_graphs
from ..rdf.terms import Graph
from ..shacl import Shape, ShapeFileError, load_shapes
from ..sparql import parse_query_file
from ..turtle import parse_turtle_file
from . import checks
from .criteria import CRITERIA, DATA_KINDS, MODEL_KINDS, TestCriterion, custom_criterion
from .outcomes import Assertion, Outcome, OutcomeType, Pointer, finalize

log = logging.getLogger(__name__)

Check = Callable[[], list[Outcome]]


@dataclass(frozen=True)
class CustomTest:
    criterion: TestCriterion
    file: str
    shapes: tuple[Shape, ...] = ()
    unsupported: tuple[str, ...] = ()
    error: Optional[str] = None


def load_custom_tests(root: Union[str, Path], files: Sequence[str], kind: str) -> list[CustomTest]:
    """One criterion ``custom-{kind}:{stem}`` per shape file."""
    out = []
    for rel in files:
        cid = f"custom-{kind}:{Path(rel).stem}"
        crit = custom_criterion(cid, f"Custom {kind} test {Path(rel).stem}", f"Shapes from {rel}")
        try:
            res = load_shapes(parse_turtle_file(Path(root) / rel).graph)
        except (ParseError, ShapeFileError) as e:
            out.append(CustomTest(crit, rel, error=f"{rel}: {e}"))
            continue
        out.append(CustomTest(crit, rel, tuple(res.shapes), tuple(res.unsupported)))
    return out


def _pass(c: TestCriterion, pointers: tuple[Pointer, ...] = ()) -> Outcome:
    return Outcome(OutcomeType.PASS, "Pass", c.description, pointers)


def _not_tested(c: TestCriterion, failed: str, why: str = "") -> Outcome:
    msg = why or f"prerequisite {failed} did not pass"
    return Outcome(OutcomeType.NOT_TESTED, "Not tested", msg, (Pointer.message(f"prerequisite: {failed}"),))


def _engine_error(exc: Exception) -> Outcome:
    return Outcome(
        OutcomeType.CANNOT_TELL,
        "Check failed to run",
        f"{type(exc).__name__}: {exc}",
        (Pointer.message(repr(exc)),),
    )


def _evaluate(
    subject: TestSubject,
    plan: Sequence[tuple[TestCriterion, Optional[Check]]],
    params: Parameters,
    gate: Optional[str],
    gate_failed: bool,
    extra_gates: Optional[dict[str, str]] = None,
) -> list[Assertion]:
    """Assertions for one subject; ``None`` checks are the gate itself."""
    out = []
    for crit, fn in plan:
        if params.is_skipped(crit.id, subject.files):
            continue
        if crit.id != gate and gate_failed:
            outcomes = [_not_tested(crit, gate or "")]
        elif extra_gates and crit.id in extra_gates:
            outcomes = [_not_tested(crit, "ontology-available", extra_gates[crit.id])]
        else:
            try:
                outcomes = fn() if fn else []
            except Exception as exc:  # engine failures surface as CannotTell
                log.exception("check %s failed on %s", crit.id, subject.id)
                outcomes = [_engine_error(exc)]
            if not outcomes:
                outcomes = [_pass(crit)]
        out.append(Assertion(subject, crit, tuple(outcomes)))
    return out


_MERGE_RANK = {"ModuleModeletMerge": 1, "ModulesMerge": 2, "WholeMerge": 3}


def _dedup_merges(assertions: list[Assertion]) -> list[Assertion]:
    """Drop findings on merged subjects already reported on one of their inputs.

    A merged subject re-detects every problem of its inputs; reporting
    them again would count one defect several times.
    """
    keys: dict[tuple[str, str], set] = {}
    files: dict[str, frozenset] = {}
    rank: dict[str, int] = {}
    for a in assertions:
        files[a.subject.id] = frozenset(a.subject.files)
        rank[a.subject.id] = _MERGE_RANK.get(a.subject.kind, 0)
        keys.setdefault((a.subject.id, a.criterion.id), set()).update(
            o.key for o in a.outcomes if o.key is not None and o.type != OutcomeType.PASS
        )
    out = []
    for a in assertions:
        me = a.subject.id
        mine = files[me]
        if rank[me] == 0:
            out.append(a)
            continue
        inherited_from = sorted(
            sid
            for sid, fs in files.items()
            if (fs < mine or (fs == mine and rank[sid] < rank[me])) and keys.get((sid, a.criterion.id))
        )
        seen = set().union(*(keys[(sid, a.criterion.id)] for sid in inherited_from)) if inherited_from else set()
        kept = [o for o in a.outcomes if o.key is None or o.key not in seen or o.type == OutcomeType.PASS]
        dropped = len(a.outcomes) - len(kept)
        if dropped and not kept:
            where = ", ".join(inherited_from)
            kept = [_pass(a.criterion, (Pointer.message(f"{dropped} finding(s) already reported on {where}"),))]
        out.append(replace(a, outcomes=tuple(kept)) if dropped else a)
    return out


def _namespace(params: Parameters) -> Optional[str]:
    return params.ontology_namespace


def _needs_ns(crit: TestCriterion, fn: Callable[[str], list[Outcome]], params: Parameters) -> Check:
    def run() -> list[Outcome]:
        ns = _namespace(params)
        if not ns:
            return [
                Outcome(
                    OutcomeType.CANNOT_TELL,
                    "Ontology namespace unknown",
                    "Set ontology_namespace in the parameters file.",
                    (Pointer.message("ontology_namespace not set and not inferable"),),
                    key=("no-namespace",),
                )
            ]
        return fn(ns)

    return run


def run_model_suite(
    subjects: Iterable[TestSubject],
    params: Parameters,
    custom: Sequence[CustomTest] = (),
) -> list[Assertion]:
    out: list[Assertion] = []
    for s in subjects:
        if s.kind not in MODEL_KINDS:
            continue
        g = s.graph
        C = CRITERIA
        plan: list[tuple[TestCriterion, Optional[Check]]] = []
        if g is None:
            err = s.error or ParseError("unreadable file", 1, 1)
            plan.append((C["syntax-error"], lambda err=err: [checks.syntax_outcome(err, s.files[0])]))
        else:
            plan.append((C["syntax-error"], None))
        plan += [
            (C["term-referencing"], _needs_ns(C["term-referencing"], lambda ns: checks.check_term_referencing(g, ns), params)),
            (C["domain-range-vocabulary"], _needs_ns(C["domain-range-vocabulary"], lambda ns: checks.check_domain_range(g, ns), params)),
            (C["subset-property-misuse"], lambda: checks.check_subset_misuse(g)),
            (
                C["term-differentiation"],
                _needs_ns(
                    C["term-differentiation"],
                    lambda ns: checks.check_term_differentiation(g, ns, params.term_distance_threshold),
                    params,
                ),
            ),
            (C["english-labels"], _needs_ns(C["english-labels"], lambda ns: checks.check_english_labels(g, ns), params)),
            (
                C["owl-rl-consistency"],
                lambda: checks.check_consistency_outcomes(g, params.max_iterations) + checks.imports_outcomes(g),
            ),
        ]
        for p in Profile:
            plan.append((C[f"profile-compatibility-{p.value}"], lambda p=p: checks.check_profile_outcomes(g, p)))
        closure = checks.saturated(g, params.max_iterations) if custom and g is not None else None
        for ct in custom:
            plan.append((ct.criterion, _custom_check(ct, lambda: closure)))
        out.extend(_evaluate(s, plan, params, "syntax-error", g is None))
    if not params.report_inherited_findings:
        out = _dedup_merges(out)
    return _sorted(out)


def _custom_check(ct: CustomTest, graph: Callable[[], Graph]) -> Check:
    def run() -> list[Outcome]:
        if ct.error:
            return [
                Outcome(
                    OutcomeType.CANNOT_TELL,
                    "Shape file could not be used",
                    ct.error,
                    (Pointer.uri(ct.file), Pointer.message(ct.error)),
                    key=("shape-file", ct.file),
                )
            ]
        return checks.check_shapes(graph(), list(ct.shapes), ct.unsupported)

    return run


def known_namespaces(params: Parameters, ontology: Optional[Graph]) -> set[str]:
    known = set(checks.load_prefix_registry(params.prefix_registry_path).values())
    if params.ontology_namespace:
        known.add(params.ontology_namespace)
    if ontology is not None:
        known |= checks.used_namespaces(ontology)
    return known


def run_data_suite(
    subjects: Iterable[TestSubject],
    params: Parameters,
    ontology: Optional[Graph],
    custom: Sequence[CustomTest] = (),
) -> list[Assertion]:
    C = CRITERIA
    known = known_namespaces(params, ontology)
    inherited: set = set()
    if ontology is not None and not params.report_inherited_findings:
        # contradictions inside the ontology alone belong to the model report
        try:
            base = [o.key for o in checks.check_consistency_outcomes(ontology, params.max_iterations)]
            inherited = {k for k in base if k != ("limit",)}
        except IterationLimitExceeded:
            pass
    out: list[Assertion] = []
    for s in subjects:
        if s.kind not in DATA_KINDS:
            continue
        g = s.graph
        plan: list[tuple[TestCriterion, Optional[Check]]] = []
        if g is None:
            err = s.error or ParseError("unreadable file", 1, 1)
            plan.append((C["syntax-error"], lambda err=err, s=s: [checks.syntax_outcome(err, s.files[0])]))
        else:
            plan.append((C["syntax-error"], None))
        combined = merge_graphs([g, ontology]) if g is not None and ontology is not None else g

        def consistency(combined=combined) -> list[Outcome]:
            found = checks.check_consistency_outcomes(combined, params.max_iterations)
            return [o for o in found if o.key not in inherited]

        plan.append((C["owl-rl-consistency"], consistency))
        plan.append(
            (C["known-terms"], _needs_ns(C["known-terms"], lambda ns, g=g: checks.check_known_terms(g, ontology, ns), params))
        )
        plan.append(
            (
                C["namespace-typo"],
                lambda g=g: checks.check_namespace_typos(checks.used_namespaces(g), known, params.namespace_distance_max),
            )
        )
        closure = checks.saturated(combined, params.max_iterations) if custom and combined is not None else None
        for ct in custom:
            plan.append((ct.criterion, _custom_check(ct, lambda closure=closure: closure)))
        extra = None
        if ontology is None:
            extra = {"known-terms": "no parse-valid ontology to check against"}
        out.extend(_evaluate(s, plan, params, "syntax-error", g is None, extra))
    return _sorted(out)


def run_query_suite(
    subjects: Iterable[TestSubject],
    params: Parameters,
    root: Union[str, Path],
    known: Optional[set[str]] = None,
) -> list[Assertion]:
    C = CRITERIA
    known = known if known is not None else known_namespaces(params, None)
    out: list[Assertion] = []
    for s in subjects:
        if s.kind != "Query":
            continue
        rel = s.files[0]
        info = None
        failure: list[Outcome] = []
        try:
            info = parse_query_file(Path(root) / rel)
        except ParseError as e:
            failure = [checks.syntax_outcome(e, rel)]
        except OSError as e:
            failure = [_engine_error(e)]
        plan: list[tuple[TestCriterion, Optional[Check]]] = [
            (C["query-syntax"], (lambda f=failure: f) if info is None else (lambda i=info: checks.check_services(i))),
            (C["query-form"], lambda i=info: checks.check_query_form(i)),
            (C["uri-validity"], lambda i=info: checks.check_uri_validity(i)),
            (
                C["namespace-typo"],
                lambda i=info: checks.check_namespace_typos(checks.query_namespaces(i), known, params.namespace_distance_max),
            ),
        ]
        out.extend(_evaluate(s, plan, params, "query-syntax", info is None))
    return _sorted(out)


def _sorted(assertions: list[Assertion]) -> list[Assertion]:
    return sorted(assertions, key=lambda a: (a.subject.id, a.criterion.id))


def profile_compatibility(subjects: Iterable[TestSubject]) -> dict[Profile, bool]:
    """Per-profile verdict for the merge of all valid modules."""
    for s in subjects:
        if s.kind == "ModulesMerge" and s.graph is not None:
            return {p: not check_profile(s.graph, p) for p in Profile}
    return {}


# -- whole-project run ---------------------------------------------------------


@dataclass
class RunResult:
    layout: ProjectLayout
    params: Parameters
    assertions: list[Assertion]
    subjects: list[TestSubject] = field(default_factory=list)
    profile_results: dict = field(default_factory=dict)


def _relative(root: Path, f: str) -> str:
    p = Path(f)
    if p.is_absolute():
        try:
            p = p.resolve().relative_to(root.resolve())
        except ValueError:
            pass
    return p.as_posix()


def _touches(s: TestSubject, staged: set[str]) -> bool:
    return any(f in staged for f in s.files)


def run_project(
    root: Union[str, Path],
    params: Parameters,
    suites: Iterable[str] = ("model", "data", "query"),
    staged: Optional[Iterable[str]] = None,
) -> RunResult:
    """Scan, assemble, run the requested suites and apply severity."""
    root = Path(root)
    suites = set(suites)
    layout = scan_repository(root, params)
    cache = GraphCache(root)
    model_subjects = assemble_model_subjects(layout, cache)
    if not params.ontology_namespace:
        graphs = [s.graph for s in model_subjects if s.kind == "Module" and s.graph is not None]
        graphs = graphs or [s.graph for s in model_subjects if s.kind == "Modelet" and s.graph is not None]
        params = with_namespace(params, infer_namespace(graphs))
    ontology = ontology_graph(layout, cache)
    staged_set = {_relative(root, f) for f in staged} if staged is not None else None

    def keep(subs: list[TestSubject]) -> list[TestSubject]:
        return subs if staged_set is None else [s for s in subs if _touches(s, staged_set)]

    assertions: list[Assertion] = []
    all_subjects: list[TestSubject] = []
    if "model" in suites:
        subs = keep(model_subjects)
        custom = load_custom_tests(root, layout.custom_model_tests, "model")
        assertions += run_model_suite(subs, params, custom)
        all_subjects += subs
    if "data" in suites:
        subs = keep(assemble_data_subjects(layout, cache))
        custom = load_custom_tests(root, layout.custom_data_tests, "data")
        assertions += run_data_suite(subs, params, ontology, custom)
        all_subjects += subs
    if "query" in suites:
        subs = keep(assemble_query_subjects(layout))
        assertions += run_query_suite(subs, params, root, known_namespaces(params, ontology))
        all_subjects += subs
    return RunResult(
        layout=layout,
        params=params,
        assertions=_sorted(finalize(assertions, params)),
        subjects=all_subjects,
        profile_results=profile_compatibility(model_subjects),
    )
