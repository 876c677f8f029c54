from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acimov_lint.engine import (
    CRITERIA,
    Assertion,
    Outcome,
    OutcomeType,
    apply_severity,
    run_data_suite,
    run_model_suite,
    run_project,
    run_query_suite,
)
from acimov_lint.engine.checks import check_namespace_typos, check_term_differentiation
from acimov_lint.owl import Profile
from acimov_lint.project import Parameters, TestSubject, assemble_model_subjects, parameters_from_text, scan_repository
from acimov_lint.turtle import parse_turtle

from . import fixtures as fx

NS = "https://example.org/onto#"
PARAMS = Parameters(ontology_namespace=NS)
T = OutcomeType


def module(text: str, name: str = "src/a.ttl") -> TestSubject:
    return TestSubject(f"module:{name}", "Module", (name,), parse_turtle(text).graph)


def by_criterion(assertions: list[Assertion]) -> dict[str, Assertion]:
    return {a.criterion.id: a for a in assertions}


def types(a: Assertion) -> list[OutcomeType]:
    return [o.type for o in a.outcomes]


# -- severity --------------------------------------------------------------


@pytest.mark.parametrize(
    "criterion,blocking,before,after",
    [
        ("syntax-error", {"syntax-error"}, T.FAIL, T.MAJOR_FAIL),
        ("english-labels", {"syntax-error"}, T.FAIL, T.MINOR_FAIL),
        ("english-labels", {"english-labels"}, T.FAIL, T.MAJOR_FAIL),
        ("syntax-error", {"syntax-error"}, T.PASS, T.PASS),
        ("syntax-error", {"syntax-error"}, T.CANNOT_TELL, T.CANNOT_TELL),
        ("syntax-error", {"syntax-error"}, T.NOT_TESTED, T.NOT_TESTED),
    ],
)
def test_apply_severity(criterion, blocking, before, after):
    params = Parameters(blocking_errors=frozenset(blocking))
    (o,) = apply_severity([Outcome(before, "t", "d")], criterion, params)
    assert o.type == after


@given(st.lists(st.sampled_from(list(T)), max_size=8), st.sets(st.sampled_from(sorted(CRITERIA))), st.sampled_from(sorted(CRITERIA)))
def test_severity_only_touches_fails(kinds, blocking, cid):
    out = apply_severity([Outcome(k, "t", "d") for k in kinds], cid, Parameters(blocking_errors=frozenset(blocking)))
    for k, o in zip(kinds, out):
        if k == T.FAIL:
            assert o.type == (T.MAJOR_FAIL if cid in blocking else T.MINOR_FAIL)
        else:
            assert o.type == k


# -- model suite -----------------------------------------------------------

MODEL_CRITERIA = sorted(c.id for c in CRITERIA.values() if "Module" in c.applicable_kinds)


def test_missing_is_defined_by():
    text = fx.CLEAN_MODULE + "ex:Orphan a owl:Class ; rdfs:label \"orphan\"@en .\n"
    a = by_criterion(run_model_suite([module(text)], PARAMS))["term-referencing"]
    (o,) = a.outcomes
    assert o.type == T.FAIL
    assert any("Orphan" in p.value for p in o.pointers)


def test_term_differentiation_pair():
    g = parse_turtle(fx.HMAS_MODULE).graph
    (o,) = check_term_differentiation(g, fx.HMAS_NS, 3)
    values = " ".join(p.value for p in o.pointers)
    assert "isMembershipOf" in values and "isMembershipIn" in values
    assert "distance 2" in values


@pytest.mark.parametrize("threshold,flagged", [(1, False), (2, False), (3, True), (10, True)])
def test_threshold_is_strict(threshold, flagged):
    g = parse_turtle(fx.HMAS_MODULE).graph
    pairs = [o for o in check_term_differentiation(g, fx.HMAS_NS, threshold) if "isMembershipOf" in str(o.pointers)]
    assert bool(pairs) == flagged


def test_english_label_variants():
    text = fx.PREFIXES + f"""@prefix ex: <{NS}> .
ex:A rdfs:label "a"@en ; rdfs:isDefinedBy <https://example.org/onto> .
ex:B rdfs:label "b"@en-GB ; rdfs:isDefinedBy <https://example.org/onto> .
ex:C rdfs:label "c"@fr ; rdfs:isDefinedBy <https://example.org/onto> .
ex:D rdfs:label "d" ; rdfs:isDefinedBy <https://example.org/onto> .
"""
    outcomes = by_criterion(run_model_suite([module(text)], PARAMS))["english-labels"].outcomes
    assert [o.type for o in outcomes] == [T.FAIL, T.FAIL]
    shown = " ".join(p.value for o in outcomes for p in o.pointers)
    assert "#C" in shown or "ex:C" in shown
    assert "#D" in shown or "ex:D" in shown
    assert "ex:A" not in shown and "ex:B" not in shown


def test_domain_range_and_subset_misuse():
    text = fx.PREFIXES + f"""@prefix ex: <{NS}> .
ex:p rdfs:domain [ owl:unionOf ( ex:A ex:B ) ] ; rdfs:range ex:C .
ex:q a rdf:Property ; rdfs:subClassOf ex:C .
"""
    res = by_criterion(run_model_suite([module(text)], PARAMS))
    assert types(res["domain-range-vocabulary"]) == [T.FAIL]
    assert types(res["subset-property-misuse"]) == [T.FAIL]


def test_profiles_and_consistency_in_model_suite():
    res = by_criterion(run_model_suite([module(fx.DISJOINT_UNION)], PARAMS))
    for p in Profile:
        assert types(res[f"profile-compatibility-{p.value}"]) == [T.FAIL]
    res = by_criterion(run_model_suite([module(fx.SAME_DIFFERENT)], PARAMS))
    assert T.FAIL in types(res["owl-rl-consistency"])


def test_gating_soundness():
    s = TestSubject("module:src/broken.ttl", "Module", ("src/broken.ttl",), None, None)
    out = run_model_suite([s], PARAMS)
    res = by_criterion(out)
    assert types(res["syntax-error"]) == [T.FAIL]
    downstream = [a for a in out if a.criterion.id != "syntax-error"]
    assert len(downstream) == len(MODEL_CRITERIA) - 1
    assert all(types(a) == [T.NOT_TESTED] for a in downstream)
    assert all("syntax-error" in a.outcomes[0].pointers[0].value for a in downstream)


def test_completeness(tmp_path):
    root = fx.write_project(tmp_path, fx.hmas_project())
    res = run_project(root, Parameters())
    expected = 0
    for s in res.subjects:
        expected += sum(1 for c in CRITERIA.values() if s.kind in c.applicable_kinds)
    assert len(res.assertions) == expected
    pairs = [(a.subject.id, a.criterion.id) for a in res.assertions]
    assert len(set(pairs)) == len(pairs)
    assert pairs == sorted(pairs)


def test_skipping_is_absence(tmp_path):
    root = fx.write_project(tmp_path, fx.hmas_project())
    params = parameters_from_text('{"skipped_tests": [{"criterion": "english-labels", "files": "src/*"}]}')
    res = run_project(root, params, ["model"])
    hit = [a for a in res.assertions if a.criterion.id == "english-labels"]
    assert hit and all(not any(f.startswith("src/") for f in a.subject.files) for a in hit)
    full = run_project(root, Parameters(), ["model"])
    assert len(full.assertions) - len(res.assertions) == sum(
        1 for a in full.assertions if a.criterion.id == "english-labels" and any(f.startswith("src/") for f in a.subject.files)
    )


def test_determinism(tmp_path):
    root = fx.write_project(tmp_path, fx.hmas_project())
    assert run_project(root, Parameters()).assertions == run_project(root, Parameters()).assertions


def test_merge_dedup(tmp_path):
    root = fx.write_project(tmp_path, fx.hmas_project())
    deduped = run_project(root, Parameters(), ["model"])
    raw = run_project(root, Parameters(report_inherited_findings=True), ["model"])
    fails = lambda r: sum(1 for a in r.assertions if a.has_fail())  # noqa: E731
    assert fails(deduped) == 3
    assert fails(raw) > fails(deduped)
    # a dropped finding leaves a Pass pointing at where it was reported
    merged = [a for a in deduped.assertions if a.subject.kind != "Module" and a.criterion.id == "term-referencing"]
    assert any("already reported" in p.value for a in merged for o in a.outcomes for p in o.pointers)


def test_namespace_missing_is_cannot_tell():
    res = by_criterion(run_model_suite([module(fx.CLEAN_MODULE)], Parameters()))
    assert types(res["term-referencing"]) == [T.CANNOT_TELL]
    assert types(res["subset-property-misuse"]) == [T.PASS]


def test_custom_model_shape(tmp_path):
    files = fx.clean_project()
    files[".acimov/custom-tests/model/labels.ttl"] = f"""@prefix sh: <http://www.w3.org/ns/shacl#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix ex: <{NS}> .
ex:CommentShape sh:targetClass owl:Class ; sh:property [ sh:path rdfs:comment ; sh:minCount 1 ] .
"""
    files[".acimov/custom-tests/data/sparql.ttl"] = """@prefix sh: <http://www.w3.org/ns/shacl#> .
@prefix ex: <http://e/> .
ex:S sh:targetClass ex:C ; sh:sparql [ sh:select "SELECT $this {}" ] .
"""
    root = fx.write_project(tmp_path, files)
    res = run_project(root, Parameters())
    model = [a for a in res.assertions if a.criterion.id == "custom-model:labels"]
    assert model and any(a.has_fail() for a in model)
    data = [a for a in res.assertions if a.criterion.id == "custom-data:sparql"]
    assert data and all(T.CANNOT_TELL in types(a) for a in data)


# -- data suite ------------------------------------------------------------


def dataset(text: str, name: str = "domains/d/s/dataset.ttl") -> TestSubject:
    return TestSubject(f"dataset:{name}", "Dataset", (name,), parse_turtle(text).graph)


ONTOLOGY = parse_turtle(fx.CLEAN_MODULE).graph


def test_known_terms_fail():
    text = fx.PREFIXES + f"@prefix ex: <{NS}> .\n<http://d/x> a ex:UndefinedTerm ."
    (o,) = by_criterion(run_data_suite([dataset(text)], PARAMS, ONTOLOGY))["known-terms"].outcomes
    assert o.type == T.FAIL
    assert any("UndefinedTerm" in p.value for p in o.pointers)


def test_known_terms_without_ontology_not_tested():
    res = by_criterion(run_data_suite([dataset(fx.CLEAN_DATASET)], PARAMS, None))
    assert types(res["known-terms"]) == [T.NOT_TESTED]


def test_empty_dataset_vacuous_pass():
    res = run_data_suite([dataset("")], PARAMS, ONTOLOGY)
    assert all(types(a) == [T.PASS] for a in res)


def test_namespace_typo_trailing_slash():
    (o,) = check_namespace_typos({"http://schema.org"}, {"http://schema.org/"}, 2)
    assert o.type == T.CANNOT_TELL
    assert check_namespace_typos({"http://schema.org/"}, {"http://schema.org/", "https://schema.org/"}, 2) == []


def test_namespace_typo_in_dataset():
    text = "@prefix s: <http://schema.org> .\n<http://d/x> s:name \"x\" ."
    res = by_criterion(run_data_suite([dataset(text)], PARAMS, ONTOLOGY))
    assert types(res["namespace-typo"]) == [T.CANNOT_TELL]


def test_data_consistency_includes_ontology():
    onto = parse_turtle(fx.PREFIXES + "@prefix ex: <http://example.org/> .\nex:C owl:disjointWith ex:D .").graph
    data = dataset(fx.PREFIXES + "@prefix ex: <http://example.org/> .\nex:x a ex:C , ex:D .")
    res = by_criterion(run_data_suite([data], PARAMS, onto))
    assert T.FAIL in types(res["owl-rl-consistency"])


# -- query suite -----------------------------------------------------------


def query_subjects(tmp_path, texts: dict[str, str]) -> list[TestSubject]:
    fx.write_project(tmp_path, texts)
    return [TestSubject(f"query:{k}", "Query", (k,)) for k in texts]


def test_valid_ask_four_passes(tmp_path):
    subs = query_subjects(tmp_path, {"q.rq": "ASK { <http://example.org/a> ?p ?o }"})
    out = run_query_suite(subs, PARAMS, tmp_path)
    assert len(out) == 4
    assert all(types(a) == [T.PASS] for a in out)


def test_construct_form_fail(tmp_path):
    subs = query_subjects(tmp_path, {"q.rq": "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"})
    res = by_criterion(run_query_suite(subs, PARAMS, tmp_path))
    assert types(res["query-form"]) == [T.FAIL]
    assert types(res["uri-validity"]) == [T.PASS]


def test_iri_with_space(tmp_path):
    subs = query_subjects(tmp_path, {"q.rq": "SELECT ?x WHERE { ?x <http://example.org/a b> ?y }"})
    (o,) = by_criterion(run_query_suite(subs, PARAMS, tmp_path))["uri-validity"].outcomes
    assert o.type == T.FAIL
    assert any("a b" in p.value for p in o.pointers)


def test_query_syntax_gates(tmp_path):
    subs = query_subjects(tmp_path, {"q.rq": "SELECT ?x WHERE { ?x ?p "})
    res = by_criterion(run_query_suite(subs, PARAMS, tmp_path))
    assert types(res["query-syntax"]) == [T.FAIL]
    assert all(types(res[c]) == [T.NOT_TESTED] for c in ("query-form", "uri-validity", "namespace-typo"))


def test_subject_count_in_runner(tmp_path):
    root = fx.write_project(tmp_path, fx.hmas_project())
    res = run_project(root, Parameters(), ["model"])
    assert len(res.subjects) == len(assemble_model_subjects(scan_repository(root)))
