from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acimov_lint.owl import (
    IterationLimitExceeded,
    Profile,
    check_consistency,
    check_profile,
    load_rule_table,
    saturate_rl,
)
from acimov_lint.rdf import Graph, Iri, Triple
from acimov_lint.rdf.namespaces import OWL, RDF, RDFS
from acimov_lint.turtle import parse_turtle

from . import fixtures as fx
from .strategies import graphs

EX = "http://example.org/"


def ttl(body: str) -> Graph:
    return parse_turtle(fx.PREFIXES + f"@prefix ex: <{EX}> .\n" + body).graph


def counts(g: Graph) -> dict[str, int]:
    return {p.value: len(check_profile(g, p)) for p in Profile}


# -- profiles --------------------------------------------------------------

# Each line below was enumerated by hand against the rule table:
#   union superclass      EL/QL union-anywhere, RL union-superclass
#   hasKey                QL
#   property chain        QL
#   maxCardinality 2 sup  EL/QL cardinality-anywhere, RL max-cardinality-superclass
#   maxCardinality 1 sup  EL/QL cardinality-anywhere, RL allowed
#   complement subclass   EL complement-anywhere, QL/RL complement-subclass
MIXED = """
ex:A rdfs:subClassOf [ owl:unionOf ( ex:B ex:C ) ] .
ex:D owl:hasKey ( ex:p ) .
ex:q owl:propertyChainAxiom ( ex:p ex:p ) .
ex:E rdfs:subClassOf [ a owl:Restriction ; owl:onProperty ex:p ; owl:maxCardinality 2 ] .
ex:H rdfs:subClassOf [ a owl:Restriction ; owl:onProperty ex:p ; owl:maxCardinality 1 ] .
[ owl:complementOf ex:F ] rdfs:subClassOf ex:G .
"""


@pytest.mark.parametrize(
    "body,expected",
    [
        ("", {"EL": 0, "QL": 0, "RL": 0}),
        (fx.DISJOINT_UNION, {"EL": 1, "QL": 1, "RL": 1}),
        (fx.REFLEXIVE, {"EL": 0, "QL": 0, "RL": 1}),
        (MIXED, {"EL": 4, "QL": 6, "RL": 3}),
        ("ex:A rdfs:subClassOf [ a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:B ] .", {"EL": 0, "QL": 0, "RL": 1}),
        ("[ a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:B ] rdfs:subClassOf ex:A .", {"EL": 0, "QL": 1, "RL": 0}),
        ("[ a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom owl:Thing ] rdfs:subClassOf ex:A .", {"EL": 0, "QL": 0, "RL": 0}),
        ("ex:p rdfs:range [ owl:unionOf ( ex:B ex:C ) ] .", {"EL": 1, "QL": 1, "RL": 1}),
        ("ex:A owl:equivalentClass [ owl:intersectionOf ( ex:B [ owl:unionOf ( ex:C ex:D ) ] ) ] .", {"EL": 1, "QL": 2, "RL": 1}),
        ("ex:A rdfs:subClassOf [ owl:complementOf [ owl:unionOf ( ex:B ex:C ) ] ] .", {"EL": 2, "QL": 1, "RL": 0}),
    ],
    ids=["empty", "disjoint-union", "reflexive", "mixed", "some-sup", "some-sub", "some-thing-sub", "union-range", "nested-equiv", "complement-flip"],
)
def test_hand_enumerated_counts(body, expected):
    text = body if body.startswith("@prefix") else fx.PREFIXES + f"@prefix ex: <{EX}> .\n" + body
    assert counts(parse_turtle(text).graph) == expected


def test_disjoint_union_names_construct():
    for p in Profile:
        (v,) = check_profile(parse_turtle(fx.DISJOINT_UNION).graph, p)
        assert v.construct == OWL.disjointUnionOf.value
        assert v.focus == Iri(EX + "Person")


def test_reflexive_focus():
    (v,) = check_profile(parse_turtle(fx.REFLEXIVE).graph, Profile.RL)
    assert v.focus == Iri(EX + "knows")
    assert "ReflexiveProperty" in v.explanation


def test_rule_table_covers_required_constructs():
    rules = load_rule_table()
    covered = {(p.value, t) for r in rules for p in r.profiles for t in r.targets}
    for profile, construct in [
        ("EL", OWL.disjointUnionOf),
        ("QL", OWL.disjointUnionOf),
        ("RL", OWL.disjointUnionOf),
        ("RL", OWL.ReflexiveProperty),
        ("QL", OWL.hasKey),
        ("QL", OWL.propertyChainAxiom),
        ("EL", OWL.unionOf),
        ("QL", OWL.unionOf),
        ("RL", OWL.unionOf),
        ("EL", OWL.complementOf),
        ("RL", OWL.complementOf),
    ]:
        assert (profile, str(construct)) in covered, (profile, construct)


def test_custom_rule_table(tmp_path):
    p = tmp_path / "rules.json"
    p.write_text('{"rules": [{"id": "no-label", "profiles": ["EL"], "match": {"kind": "predicate", "predicate": "rdfs:label"}, "message": "x"}]}')
    g = ttl('ex:a rdfs:label "a" .')
    assert len(check_profile(g, Profile.EL, load_rule_table(p))) == 1
    assert check_profile(g, Profile.RL, load_rule_table(p)) == []


@given(graphs)
def test_no_owl_vocabulary_no_violations(g):
    for p in Profile:
        assert check_profile(g, p) == []


# -- saturation ------------------------------------------------------------


def x(name: str) -> Iri:
    return Iri(EX + name)


@pytest.mark.parametrize(
    "premises,conclusion",
    [
        ([(x("a"), RDFS.subClassOf, x("b")), (x("x"), RDF.type, x("a"))], (x("x"), RDF.type, x("b"))),
        ([(x("p"), RDFS.domain, x("C")), (x("s"), x("p"), x("o"))], (x("s"), RDF.type, x("C"))),
        ([(x("p"), RDFS.range, x("C")), (x("s"), x("p"), x("o"))], (x("o"), RDF.type, x("C"))),
        ([(x("a"), OWL.sameAs, x("b")), (x("b"), OWL.sameAs, x("c"))], (x("a"), OWL.sameAs, x("c"))),
        ([(x("a"), OWL.sameAs, x("b"))], (x("b"), OWL.sameAs, x("a"))),
        ([(x("a"), OWL.sameAs, x("b")), (x("a"), x("p"), x("o"))], (x("b"), x("p"), x("o"))),
        ([(x("p"), RDF.type, OWL.SymmetricProperty), (x("a"), x("p"), x("b"))], (x("b"), x("p"), x("a"))),
        ([(x("p"), RDF.type, OWL.TransitiveProperty), (x("a"), x("p"), x("b")), (x("b"), x("p"), x("c"))], (x("a"), x("p"), x("c"))),
        ([(x("p"), OWL.inverseOf, x("q")), (x("a"), x("p"), x("b"))], (x("b"), x("q"), x("a"))),
        ([(x("p"), OWL.inverseOf, x("q")), (x("a"), x("q"), x("b"))], (x("b"), x("p"), x("a"))),
        ([(x("p"), RDF.type, OWL.FunctionalProperty), (x("a"), x("p"), x("b")), (x("a"), x("p"), x("c"))], (x("b"), OWL.sameAs, x("c"))),
        ([(x("p"), RDF.type, OWL.InverseFunctionalProperty), (x("a"), x("p"), x("c")), (x("b"), x("p"), x("c"))], (x("a"), OWL.sameAs, x("b"))),
        ([(x("A"), OWL.equivalentClass, x("B")), (x("i"), RDF.type, x("A"))], (x("i"), RDF.type, x("B"))),
        ([(x("A"), OWL.equivalentClass, x("B")), (x("i"), RDF.type, x("B"))], (x("i"), RDF.type, x("A"))),
        ([(x("A"), RDFS.subClassOf, x("B")), (x("B"), RDFS.subClassOf, x("C"))], (x("A"), RDFS.subClassOf, x("C"))),
        ([(x("p"), RDFS.subPropertyOf, x("q")), (x("q"), RDFS.subPropertyOf, x("r"))], (x("p"), RDFS.subPropertyOf, x("r"))),
        ([(x("p"), RDFS.subPropertyOf, x("q")), (x("a"), x("p"), x("b"))], (x("a"), x("q"), x("b"))),
    ],
    ids=[
        "cax-sco", "prp-dom", "prp-rng", "eq-trans", "eq-sym", "eq-rep-s", "prp-symp", "prp-trp", "prp-inv1",
        "prp-inv2", "prp-fp", "prp-ifp", "cax-eqc1", "cax-eqc2", "scm-sco", "scm-spo", "prp-spo1",
    ],
)
def test_rule_fires(premises, conclusion):
    g = Graph(Triple(*t) for t in premises)
    assert Triple(*conclusion) in saturate_rl(g)


def test_same_as_chain_size():
    g = Graph([Triple(x("a"), OWL.sameAs, x("b")), Triple(x("b"), OWL.sameAs, x("c"))])
    closed = saturate_rl(g)
    same = {(t.subject, t.object) for t in closed.match(None, OWL.sameAs, None)}
    assert same == set(itertools.product([x("a"), x("b"), x("c")], repeat=2))


def test_iteration_limit():
    chain = [Triple(x(f"c{i}"), RDFS.subClassOf, x(f"c{i + 1}")) for i in range(30)]
    with pytest.raises(IterationLimitExceeded):
        saturate_rl(Graph(chain + [Triple(x("i"), RDF.type, x("c0"))]), max_iterations=2)


# Graphs over a small RDFS-style vocabulary, so a naive oracle can close them.
names = st.sampled_from(["a", "b", "c", "d"]).map(x)
rdfs_triples = st.one_of(
    st.builds(lambda s, o: Triple(s, RDFS.subClassOf, o), names, names),
    st.builds(lambda s, o: Triple(s, RDF.type, o), names, names),
    st.builds(lambda s, o: Triple(s, RDFS.domain, o), names, names),
    st.builds(lambda s, o: Triple(s, RDFS.range, o), names, names),
    st.builds(lambda s, p, o: Triple(s, p, o), names, names, names),
)
rdfs_graphs = st.lists(rdfs_triples, max_size=10).map(Graph)


def naive_closure(g: Graph) -> set[Triple]:
    """cax-sco, scm-sco, prp-dom, prp-rng by brute force."""
    out = set(g)
    while True:
        new = set()
        for t1 in out:
            for t2 in out:
                if t1.predicate == RDFS.subClassOf and t2.predicate == RDF.type and t2.object == t1.subject:
                    new.add(Triple(t2.subject, RDF.type, t1.object))
                if t1.predicate == RDFS.subClassOf and t2.predicate == RDFS.subClassOf and t1.object == t2.subject:
                    new.add(Triple(t1.subject, RDFS.subClassOf, t2.object))
                if t1.predicate == RDFS.domain and t2.predicate == t1.subject:
                    new.add(Triple(t2.subject, RDF.type, t1.object))
                if t1.predicate == RDFS.range and t2.predicate == t1.subject and not isinstance(t2.object, type(None)):
                    new.add(Triple(t2.object, RDF.type, t1.object))
        if new <= out:
            return out
        out |= new


@given(rdfs_graphs)
@settings(max_examples=150)
def test_closure_matches_naive_oracle(g):
    assert set(saturate_rl(g)) == naive_closure(g)


@given(graphs)
def test_saturation_monotone_and_idempotent(g):
    once = saturate_rl(g)
    assert set(g) <= set(once)
    assert set(saturate_rl(once)) == set(once)


# -- consistency -----------------------------------------------------------


def test_empty_is_consistent():
    assert check_consistency(Graph()).consistent


@pytest.mark.parametrize("text,rule", [(fx.SAME_DIFFERENT, "eq-diff1"), (fx.DISJOINT_MEMBER, "cax-dw")])
def test_fixture_clash_and_single_premise_removal(text, rule):
    g = parse_turtle(text).graph
    res = check_consistency(g)
    assert not res.consistent
    assert rule in {e.rule_id for e in res.evidence}
    for t in g:
        assert check_consistency(Graph(set(g) - {t})).consistent, t


@pytest.mark.parametrize(
    "body,rule",
    [
        ("ex:x a owl:Nothing .", "cls-nothing2"),
        ("ex:p a owl:IrreflexiveProperty . ex:a ex:p ex:a .", "prp-irp"),
        ("ex:p a owl:AsymmetricProperty . ex:a ex:p ex:b . ex:b ex:p ex:a .", "prp-asyp"),
        ("ex:C owl:disjointWith ex:D . ex:E rdfs:subClassOf ex:D . ex:x a ex:C , ex:E .", "cax-dw"),
        ("ex:p a owl:FunctionalProperty . ex:s ex:p ex:a , ex:b . ex:a owl:differentFrom ex:b .", "eq-diff1"),
    ],
)
def test_falsity_rules(body, rule):
    res = check_consistency(ttl(body))
    assert not res
    assert rule in {e.rule_id for e in res.evidence}


# Small vocabulary mixing class/property axioms with the falsity triggers.
owl_preds = st.sampled_from([RDF.type, RDFS.subClassOf, OWL.sameAs, OWL.differentFrom, OWL.disjointWith, RDFS.subPropertyOf, x("p")])
owl_objs = st.sampled_from([x("a"), x("b"), x("C"), x("D"), x("p"), OWL.Nothing, OWL.IrreflexiveProperty, OWL.AsymmetricProperty, OWL.SymmetricProperty])
owl_graphs = st.lists(st.builds(Triple, st.sampled_from([x("a"), x("b"), x("C"), x("D"), x("p")]), owl_preds, owl_objs), max_size=10).map(Graph)


@given(owl_graphs, st.data())
@settings(max_examples=200)
def test_consistent_graph_subgraphs_consistent(g, data):
    if not check_consistency(g).consistent:
        return
    sub = data.draw(st.sets(st.sampled_from(sorted(g, key=repr))) if len(g) else st.just(set()))
    assert check_consistency(Graph(sub)).consistent


@given(owl_graphs)
@settings(max_examples=200)
def test_inconsistency_survives_additions(g):
    # the contrapositive: adding triples never restores consistency
    if check_consistency(g).consistent:
        return
    extra = Graph(set(g) | {Triple(x("z"), RDF.type, x("C"))})
    assert not check_consistency(extra).consistent
