"""EARL assertions wrapped in a PROV description of the test activity."""

from __future__ import annotations

from typing import Sequence

from ..engine.outcomes import Assertion, Outcome, OutcomeType, Pointer
from ..project import TestSubject, VersionDescriptor
from ..rdf.namespaces import DCTERMS, EARL, FOAF, PROV, RDF, RDFS, XSD, Namespace
from ..rdf.terms import BlankNode, Graph, Iri, Literal, Term, Triple

OUTCOME_CLASS = {
    OutcomeType.PASS: EARL.Pass,
    OutcomeType.CANNOT_TELL: EARL.CannotTell,
    OutcomeType.NOT_TESTED: EARL.NotTested,
}


def outcome_class(t: OutcomeType, vocab: Namespace) -> Iri:
    if t in OUTCOME_CLASS:
        return OUTCOME_CLASS[t]
    if t == OutcomeType.FAIL:
        return EARL.Fail
    return vocab[t.value]


class _Builder:
    def __init__(self) -> None:
        self.triples: list[Triple] = []
        self._n = 0

    def bnode(self, hint: str) -> BlankNode:
        self._n += 1
        return BlankNode(f"{hint}{self._n}")

    def add(self, s: Term, p: Iri, o: Term) -> None:
        self.triples.append(Triple(s, p, o))  # type: ignore[arg-type]

    def items(self, values: Sequence[Term]) -> Term:
        head: Term = RDF.nil
        for v in reversed(values):
            node = self.bnode("list")
            self.add(node, RDF.first, v)
            self.add(node, RDF.rest, head)
            head = node
        return head


def _text(s: str) -> Literal:
    return Literal(s)


def _pointer_term(p: Pointer) -> Term:
    if p.kind == "uri" and ":" in p.value and " " not in p.value:
        return Iri(p.value)
    return Literal(p.value)


def _versioned(b: _Builder, node: Term, v: VersionDescriptor, vocab: Namespace, label: str) -> None:
    b.add(node, RDF.type, PROV.Entity)
    b.add(node, RDF.type, vocab.VersionedEntity)
    b.add(node, RDFS.label, _text(label))
    b.add(node, vocab.hostUrl, _text(v.host_url))
    b.add(node, vocab.version, _text(v.version))
    if v.derived_from_commit:
        b.add(node, vocab.derivedFromCommit, _text(v.derived_from_commit))


def emit_earl(assertions: Sequence[Assertion], ctx) -> Graph:
    """The EARL+PROV report graph for ``assertions``."""
    vocab = Namespace(ctx.vocab_namespace)
    b = _Builder()
    ts = Literal(ctx.iso_timestamp, XSD.dateTime)

    activity = b.bnode("activity")
    developer = b.bnode("developer")
    project = b.bnode("project")
    suite = b.bnode("suite")
    assertor = b.bnode("assertor")

    b.add(activity, RDF.type, PROV.Activity)
    b.add(activity, RDFS.label, _text(f"{ctx.suite_name} {ctx.trigger} run"))
    b.add(activity, PROV.startedAtTime, ts)
    b.add(activity, vocab.trigger, _text(ctx.trigger))
    b.add(activity, PROV.wasAssociatedWith, developer)
    assoc = b.bnode("association")
    b.add(activity, PROV.qualifiedAssociation, assoc)
    b.add(assoc, RDF.type, PROV.Association)
    b.add(assoc, PROV.agent, developer)
    b.add(assoc, PROV.hadRole, vocab.developer)

    b.add(developer, RDF.type, PROV.Person)
    b.add(developer, RDF.type, FOAF.Person)
    b.add(developer, FOAF.name, _text(ctx.developer))

    _versioned(b, project, ctx.project, vocab, "tested project")
    _versioned(b, suite, ctx.test_suite, vocab, f"{ctx.suite_name} test suite")
    for entity, role in ((project, vocab.testSubject), (suite, vocab.testSuiteRole)):
        b.add(activity, PROV.used, entity)
        usage = b.bnode("usage")
        b.add(activity, PROV.qualifiedUsage, usage)
        b.add(usage, RDF.type, PROV.Usage)
        b.add(usage, PROV.entity, entity)
        b.add(usage, PROV.hadRole, role)

    ttl_path, md_path = ctx.report_paths
    for path, role, fmt in ((ttl_path, vocab.turtleReport, "text/turtle"), (md_path, vocab.markdownReport, "text/markdown")):
        report = Iri(ctx.report_iri(path))
        b.add(report, RDF.type, PROV.Entity)
        b.add(report, DCTERMS["format"], _text(fmt))
        b.add(report, PROV.wasGeneratedBy, activity)
        gen = b.bnode("generation")
        b.add(report, PROV.qualifiedGeneration, gen)
        b.add(gen, RDF.type, PROV.Generation)
        b.add(gen, PROV.activity, activity)
        b.add(gen, PROV.hadRole, role)
        b.add(gen, PROV.atTime, ts)

    b.add(assertor, RDF.type, EARL.Assertor)
    b.add(assertor, EARL.mainAssertor, developer)
    b.add(assertor, vocab.testSuite, suite)
    b.add(assertor, vocab.trigger, _text(ctx.trigger))
    b.add(assertor, PROV.wasAssociatedWith, activity)

    subjects: dict[str, Term] = {}
    criteria: set[str] = set()
    for a in assertions:
        subj = subjects.get(a.subject.id)
        if subj is None:
            subj = subjects[a.subject.id] = b.bnode("subject")
            _subject(b, subj, a.subject, ctx, vocab, project)
        crit = Iri(ctx.vocab_namespace + a.criterion.id)
        if a.criterion.id not in criteria:
            criteria.add(a.criterion.id)
            b.add(crit, RDF.type, EARL.TestCriterion)
            b.add(crit, RDF.type, EARL.TestCase)
            b.add(crit, DCTERMS.identifier, _text(a.criterion.id))
            b.add(crit, DCTERMS["title"], _text(a.criterion.title))
            b.add(crit, DCTERMS.description, _text(a.criterion.description))

        node = b.bnode("assertion")
        result = b.bnode("result")
        b.add(node, RDF.type, EARL.Assertion)
        b.add(node, EARL.assertedBy, assertor)
        b.add(node, EARL.subject, subj)
        b.add(node, EARL.test, crit)
        b.add(node, EARL.result, result)
        b.add(node, EARL.mode, EARL.automatic)
        b.add(node, PROV.wasGeneratedBy, activity)
        b.add(result, RDF.type, EARL.TestResult)
        for o in a.outcomes:
            b.add(result, EARL.outcome, _outcome(b, o, vocab))
    return Graph(b.triples, _prefixes(ctx.vocab_namespace))


def _subject(b: _Builder, node: Term, s: TestSubject, ctx, vocab: Namespace, project: Term) -> None:
    b.add(node, RDF.type, EARL.TestSubject)
    b.add(node, DCTERMS.identifier, _text(s.id))
    b.add(node, vocab.subjectKind, _text(s.kind))
    b.add(node, PROV.wasDerivedFrom, project)
    for rel in s.files:
        f = Iri(ctx.file_iri(rel))
        b.add(node, DCTERMS.hasPart, f)
        b.add(f, RDFS.label, _text(rel))


def _outcome(b: _Builder, o: Outcome, vocab: Namespace) -> Term:
    node = b.bnode("outcome")
    b.add(node, RDF.type, outcome_class(o.type, vocab))
    b.add(node, DCTERMS["title"], _text(o.title))
    b.add(node, DCTERMS.description, _text(o.description))
    if o.pointers:
        b.add(node, vocab.pointers, b.items([_pointer_term(p) for p in o.pointers]))
    return node


def _prefixes(vocab_ns: str) -> dict[str, str]:
    return {
        "rdf": str(RDF),
        "rdfs": str(RDFS),
        "xsd": str(XSD),
        "earl": str(EARL),
        "prov": str(PROV),
        "dcterms": str(DCTERMS),
        "foaf": str(FOAF),
        "lint": vocab_ns,
    }


def outcome_counts(g: Graph, vocab_namespace: str) -> dict[OutcomeType, int]:
    """Count outcome nodes per type in an emitted (possibly re-parsed) report."""
    vocab = Namespace(vocab_namespace)
    outcome_nodes = {t.object for t in g.match(None, EARL.outcome, None)}
    counts = {}
    for t in OutcomeType:
        if t == OutcomeType.FAIL:
            continue
        cls = outcome_class(t, vocab)
        counts[t] = sum(1 for n in outcome_nodes if (n, RDF.type, cls) in g)
    return counts
