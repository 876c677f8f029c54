"""Forward-chaining closure under a subset of the OWL 2 RL/RDF rules.

Implemented rules (OWL 2 RL rule names): eq-sym, eq-trans, eq-rep-s,
eq-rep-p, eq-rep-o, prp-dom, prp-rng, prp-symp, prp-trp, prp-spo1,
prp-inv1, prp-inv2, prp-fp, prp-ifp, cax-sco, cax-eqc1, cax-eqc2,
scm-sco, scm-spo. Falsity rules checked after saturation: eq-diff1,
cax-dw, cls-nothing2, prp-irp, prp-asyp.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..rdf.namespaces import OWL, RDF, RDFS
from ..rdf.terms import Graph, Literal, Term, Triple, triple_sort_key

DEFAULT_MAX_ITERATIONS = 10_000

SAME = OWL.sameAs
TYPE = RDF.type


class IterationLimitExceeded(RuntimeError):
    def __init__(self, limit: int) -> None:
        super().__init__(f"no fixpoint after {limit} rule passes")
        self.limit = limit


@dataclass(frozen=True)
class InconsistencyEvidence:
    rule_id: str
    triples: tuple[Triple, ...]


@dataclass
class ConsistencyResult:
    consistent: bool
    evidence: list[InconsistencyEvidence] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.consistent


class _Store:
    def __init__(self, triples) -> None:
        self.all: set[Triple] = set()
        self.by_p: dict[Term, set[tuple[Term, Term]]] = defaultdict(set)
        for t in triples:
            self.add(t)

    def add(self, t: Triple) -> bool:
        if t in self.all:
            return False
        self.all.add(t)
        self.by_p[t.predicate].add((t.subject, t.object))
        return True

    def pairs(self, p: Term) -> set[tuple[Term, Term]]:
        return self.by_p.get(p, set())

    def typed(self, cls: Term) -> list[Term]:
        return [s for s, o in self.pairs(TYPE) if o == cls]


def _valid(s: Term, p: Term, o: Term) -> bool:
    from ..rdf.terms import Iri

    return not isinstance(s, Literal) and isinstance(p, Iri)


def _one_pass(st: _Store) -> list[Triple]:
    new: list[Triple] = []

    def emit(s: Term, p: Term, o: Term) -> None:
        if _valid(s, p, o):
            t = Triple(s, p, o)  # type: ignore[arg-type]
            if t not in st.all:
                new.append(t)

    same = st.pairs(SAME)
    # eq-sym, eq-trans
    same_from: dict[Term, set[Term]] = defaultdict(set)
    for x, y in same:
        emit(y, SAME, x)
        same_from[x].add(y)
    for x, y in same:
        for z in same_from.get(y, ()):
            emit(x, SAME, z)
    # eq-rep-s / eq-rep-p / eq-rep-o
    if same:
        for t in st.all:
            for alt in same_from.get(t.subject, ()):
                emit(alt, t.predicate, t.object)
            for alt in same_from.get(t.predicate, ()):
                emit(t.subject, alt, t.object)
            for alt in same_from.get(t.object, ()):
                emit(t.subject, t.predicate, alt)

    # prp-dom, prp-rng
    for p, c in st.pairs(RDFS.domain):
        for x, _ in st.pairs(p):
            emit(x, TYPE, c)
    for p, c in st.pairs(RDFS.range):
        for _, y in st.pairs(p):
            if not isinstance(y, Literal):
                emit(y, TYPE, c)
    # prp-symp
    for p in st.typed(OWL.SymmetricProperty):
        for x, y in st.pairs(p):
            emit(y, p, x)
    # prp-trp
    for p in st.typed(OWL.TransitiveProperty):
        succ: dict[Term, set[Term]] = defaultdict(set)
        for x, y in st.pairs(p):
            succ[x].add(y)
        for x, y in st.pairs(p):
            for z in succ.get(y, ()):
                emit(x, p, z)
    # prp-spo1
    for p1, p2 in st.pairs(RDFS.subPropertyOf):
        for x, y in st.pairs(p1):
            emit(x, p2, y)
    # prp-inv1, prp-inv2
    for p1, p2 in st.pairs(OWL.inverseOf):
        for x, y in st.pairs(p1):
            emit(y, p2, x)
        for x, y in st.pairs(p2):
            emit(y, p1, x)
    # prp-fp
    for p in st.typed(OWL.FunctionalProperty):
        vals: dict[Term, set[Term]] = defaultdict(set)
        for x, y in st.pairs(p):
            if not isinstance(y, Literal):
                vals[x].add(y)
        for ys in vals.values():
            for y1 in ys:
                for y2 in ys:
                    if y1 != y2:
                        emit(y1, SAME, y2)
    # prp-ifp
    for p in st.typed(OWL.InverseFunctionalProperty):
        subs: dict[Term, set[Term]] = defaultdict(set)
        for x, y in st.pairs(p):
            subs[y].add(x)
        for xs in subs.values():
            for x1 in xs:
                for x2 in xs:
                    if x1 != x2:
                        emit(x1, SAME, x2)
    # cax-sco, cax-eqc1, cax-eqc2
    members: dict[Term, set[Term]] = defaultdict(set)
    for x, c in st.pairs(TYPE):
        members[c].add(x)
    for c1, c2 in st.pairs(RDFS.subClassOf):
        for x in members.get(c1, ()):
            emit(x, TYPE, c2)
    for c1, c2 in st.pairs(OWL.equivalentClass):
        for x in members.get(c1, ()):
            emit(x, TYPE, c2)
        for x in members.get(c2, ()):
            emit(x, TYPE, c1)
    # scm-sco, scm-spo
    for pred in (RDFS.subClassOf, RDFS.subPropertyOf):
        sup: dict[Term, set[Term]] = defaultdict(set)
        for a, b in st.pairs(pred):
            sup[a].add(b)
        for a, b in st.pairs(pred):
            for c in sup.get(b, ()):
                emit(a, pred, c)
    return new


def _saturate_store(g: Graph, max_iterations: int) -> _Store:
    if max_iterations < 1:
        raise ValueError("max_iterations must be positive")
    st = _Store(g)
    passes = 0
    while True:
        new = _one_pass(st)
        added = [t for t in new if st.add(t)]
        if not added:
            return st
        passes += 1
        if passes >= max_iterations:
            if _one_pass(st):
                raise IterationLimitExceeded(max_iterations)
            return st


def saturate_rl(g: Graph, max_iterations: int = DEFAULT_MAX_ITERATIONS) -> Graph:
    """Fixpoint of ``g`` under the implemented rules.

    Raises :class:`IterationLimitExceeded` when ``max_iterations`` passes do
    not reach the fixpoint.
    """
    st = _saturate_store(g, max_iterations)
    return Graph(st.all, g.prefixes, g.warnings)


def find_clashes(g: Graph) -> list[InconsistencyEvidence]:
    """Falsity-rule firings in ``g`` (expected to be saturated already)."""
    st = _Store(g)
    found: set[InconsistencyEvidence] = set()

    def ev(rule: str, *ts: Triple) -> None:
        found.add(InconsistencyEvidence(rule, tuple(sorted(set(ts), key=triple_sort_key))))

    same = st.pairs(SAME)
    for x, y in st.pairs(OWL.differentFrom):
        if (x, y) in same:
            ev("eq-diff1", Triple(x, SAME, y), Triple(x, OWL.differentFrom, y))
        elif (y, x) in same:
            ev("eq-diff1", Triple(y, SAME, x), Triple(x, OWL.differentFrom, y))
    types: dict[Term, set[Term]] = defaultdict(set)
    for x, c in st.pairs(TYPE):
        types[x].add(c)
    for c1, c2 in st.pairs(OWL.disjointWith):
        for x, cs in types.items():
            if c1 in cs and c2 in cs:
                ev(
                    "cax-dw",
                    Triple(c1, OWL.disjointWith, c2),
                    Triple(x, TYPE, c1),
                    Triple(x, TYPE, c2),
                )
    for x, cs in types.items():
        if OWL.Nothing in cs:
            ev("cls-nothing2", Triple(x, TYPE, OWL.Nothing))
    for p in st.typed(OWL.IrreflexiveProperty):
        for x, y in st.pairs(p):
            if x == y:
                ev("prp-irp", Triple(p, TYPE, OWL.IrreflexiveProperty), Triple(x, p, x))
    for p in st.typed(OWL.AsymmetricProperty):
        pairs = st.pairs(p)
        for x, y in pairs:
            if (y, x) in pairs:
                a, b = sorted([(x, y), (y, x)], key=lambda xy: triple_sort_key(Triple(xy[0], p, xy[1])))
                ev("prp-asyp", Triple(p, TYPE, OWL.AsymmetricProperty), Triple(a[0], p, a[1]), Triple(b[0], p, b[1]))
    return sorted(found, key=lambda e: (e.rule_id, [triple_sort_key(t) for t in e.triples]))


def check_consistency(g: Graph, max_iterations: int = DEFAULT_MAX_ITERATIONS) -> ConsistencyResult:
    closure = saturate_rl(g, max_iterations)
    clashes = find_clashes(closure)
    return ConsistencyResult(not clashes, clashes)
