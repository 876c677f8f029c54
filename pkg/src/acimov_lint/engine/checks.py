"""Individual criterion checks.

Each check returns the non-pass outcomes it found (plain ``Fail`` before
severity is applied, or ``CannotTell``); an empty list means Pass.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from ..errors import ParseError
from ..owl import IterationLimitExceeded, Profile, check_consistency, check_profile, saturate_rl
from ..rdf import close_pairs
from ..rdf.distance import bounded_levenshtein
from ..rdf.iri import validate_iri
from ..rdf.namespaces import OWL, RDF, RDFS, local_name, namespace_of, split_iri
from ..rdf.terms import BlankNode, Graph, Iri, Literal, Term, Triple, term_sort_key, triple_sort_key
from ..shacl import Shape, validate
from ..sparql import QueryInfo, query_form_violation
from .outcomes import Outcome, OutcomeType, Pointer

FAIL = OutcomeType.FAIL
CANNOT_TELL = OutcomeType.CANNOT_TELL


def _anon(t: Term) -> object:
    # blank-node labels change when graphs are merged, so keys ignore them
    return "_" if isinstance(t, BlankNode) else t


def _tkey(t: Triple) -> tuple:
    return tuple(_anon(x) for x in t)


def _short(g: Graph, t: Term) -> str:
    if isinstance(t, Iri):
        for pfx, ns in sorted(g.prefixes.items(), key=lambda kv: -len(kv[1])):
            if ns and t.value.startswith(ns) and t.value != ns:
                rest = t.value[len(ns):]
                if all(c.isalnum() or c in "_-." for c in rest):
                    return f"{pfx}:{rest}"
    return t.n3()


def _snippet(g: Graph, t: Triple) -> str:
    return f"{_short(g, t.subject)} {_short(g, t.predicate)} {_short(g, t.object)} ."


def ontology_terms(g: Graph, ns: str) -> list[Iri]:
    """IRIs in ``ns`` that the graph describes (subject position).

    The namespace IRI itself and owl:Ontology resources are not terms.
    """
    ontologies = set(g.subjects(RDF.type, OWL.Ontology))
    bare = {ns, ns.rstrip("#/")}
    found = {
        s
        for s in g.subject_set()
        if isinstance(s, Iri) and s.value.startswith(ns) and s.value not in bare and s not in ontologies
    }
    return sorted(found, key=term_sort_key)


# -- model suite -------------------------------------------------------------


def check_term_referencing(g: Graph, ns: str) -> list[Outcome]:
    out = []
    for t in ontology_terms(g, ns):
        if not g.objects(t, RDFS.isDefinedBy):
            out.append(
                Outcome(
                    FAIL,
                    "Missing rdfs:isDefinedBy",
                    f"{_short(g, t)} has no rdfs:isDefinedBy statement.",
                    (Pointer.uri(t.value),),
                    key=("term", t),
                )
            )
    return out


def check_domain_range(g: Graph, ns: str) -> list[Outcome]:
    out = []
    for pred in (RDFS.domain, RDFS.range):
        for t in sorted(g.match(None, pred, None), key=triple_sort_key):
            if not (isinstance(t.subject, Iri) and t.subject.value.startswith(ns)):
                continue
            if isinstance(t.object, Iri):
                continue
            kind = "a literal" if isinstance(t.object, Literal) else "an anonymous node"
            out.append(
                Outcome(
                    FAIL,
                    f"{local_name(pred)} is not a named IRI",
                    f"The {local_name(pred)} of {_short(g, t.subject)} is {kind}.",
                    (Pointer.uri(t.subject.value), Pointer.snippet(_snippet(g, t))),
                    key=_tkey(t),
                )
            )
    return out


_PROPERTY_TYPES = (
    RDF.Property,
    OWL.ObjectProperty,
    OWL.DatatypeProperty,
    OWL.AnnotationProperty,
    OWL.OntologyProperty,
    OWL.FunctionalProperty,
    OWL.InverseFunctionalProperty,
    OWL.TransitiveProperty,
    OWL.SymmetricProperty,
    OWL.AsymmetricProperty,
    OWL.ReflexiveProperty,
    OWL.IrreflexiveProperty,
)
_CLASS_TYPES = (RDFS.Class, OWL.Class)


def check_subset_misuse(g: Graph) -> list[Outcome]:
    props = {s for c in _PROPERTY_TYPES for s in g.subjects(RDF.type, c)}
    classes = {s for c in _CLASS_TYPES for s in g.subjects(RDF.type, c)}
    out = []
    for pred, wrong, what in ((RDFS.subClassOf, props, "property"), (RDFS.subPropertyOf, classes, "class")):
        for t in sorted(g.match(None, pred, None), key=triple_sort_key):
            bad = [x for x in (t.subject, t.object) if x in wrong]
            if bad:
                names = ", ".join(_short(g, x) for x in bad)
                out.append(
                    Outcome(
                        FAIL,
                        f"{local_name(pred)} used with a {what}",
                        f"rdfs:{local_name(pred)} links {names}, typed as a {what}.",
                        tuple(Pointer.uri(x.value) for x in bad if isinstance(x, Iri)) + (Pointer.snippet(_snippet(g, t)),),
                        key=_tkey(t),
                    )
                )
    return out


def check_term_differentiation(g: Graph, ns: str, threshold: int) -> list[Outcome]:
    terms = ontology_terms(g, ns)
    names = [local_name(t) for t in terms]
    out = []
    for i, j, d in close_pairs(names, threshold):
        a, b = terms[i], terms[j]
        out.append(
            Outcome(
                FAIL,
                "Terms too similar",
                f"{_short(g, a)} and {_short(g, b)} have local names at Levenshtein distance {d}.",
                (
                    Pointer.uri(a.value),
                    Pointer.uri(b.value),
                    Pointer.message(f"distance {d} (threshold {threshold})"),
                ),
                key=("pair", a, b),
            )
        )
    return out


def _is_english(lit: Term) -> bool:
    return isinstance(lit, Literal) and lit.language is not None and lit.language.split("-")[0] == "en"


def check_english_labels(g: Graph, ns: str) -> list[Outcome]:
    out = []
    for t in ontology_terms(g, ns):
        if not any(_is_english(x) for x in g.objects(t, RDFS.label)):
            out.append(
                Outcome(
                    FAIL,
                    "No English label",
                    f"{_short(g, t)} has no rdfs:label tagged @en.",
                    (Pointer.uri(t.value),),
                    key=("term", t),
                )
            )
    return out


def check_consistency_outcomes(g: Graph, max_iterations: int) -> list[Outcome]:
    try:
        res = check_consistency(g, max_iterations)
    except IterationLimitExceeded as e:
        return [Outcome(CANNOT_TELL, "Reasoning did not finish", str(e), (), key=("limit",))]
    out = []
    for ev in res.evidence:
        out.append(
            Outcome(
                FAIL,
                f"Inconsistency ({ev.rule_id})",
                f"OWL 2 RL rule {ev.rule_id} derives a contradiction.",
                tuple(Pointer.snippet(_snippet(g, t)) for t in ev.triples),
                key=(ev.rule_id,) + tuple(_tkey(t) for t in ev.triples),
            )
        )
    return out


def imports_outcomes(g: Graph) -> list[Outcome]:
    return [
        Outcome(
            CANNOT_TELL,
            "Import not resolved",
            f"owl:imports {o.n3()} is not fetched; imported axioms were not considered.",
            (Pointer.uri(o.value),) if isinstance(o, Iri) else (),
            key=("imports", o),
        )
        for o in sorted({t.object for t in g.match(None, OWL.imports, None)}, key=term_sort_key)
    ]


def check_profile_outcomes(g: Graph, profile: Profile) -> list[Outcome]:
    out = []
    for v in check_profile(g, profile):
        ptrs = []
        if isinstance(v.focus, Iri):
            ptrs.append(Pointer.uri(v.focus.value))
        ptrs.append(Pointer.message(v.explanation))
        out.append(
            Outcome(
                FAIL,
                f"Not in OWL 2 {profile.value}",
                f"{_short(g, Iri(v.construct)) if v.construct.startswith('http') else v.construct} is outside OWL 2 {profile.value}.",
                tuple(ptrs),
                key=(v.rule_id, _anon(v.focus), v.explanation if not isinstance(v.focus, BlankNode) else ""),
            )
        )
    return out


def check_shapes(g: Graph, shapes: list[Shape], unsupported: Iterable[str]) -> list[Outcome]:
    out = [
        Outcome(CANNOT_TELL, "Unsupported shape feature", msg, (Pointer.message(msg),), key=("unsupported", msg))
        for msg in unsupported
    ]
    for v in validate(g, shapes):
        otype = {"Violation": FAIL, "Warning": CANNOT_TELL, "Info": OutcomeType.PASS}[v.severity]
        ptrs = []
        if isinstance(v.focus, Iri):
            ptrs.append(Pointer.uri(v.focus.value))
        ptrs.append(Pointer.message(v.message))
        out.append(
            Outcome(
                otype,
                f"Shape constraint {v.constraint.kind}",
                v.message,
                tuple(ptrs),
                key=("shape", _anon(v.shape), _anon(v.focus), _anon(v.value) if v.value else None, v.constraint),
            )
        )
    return out


def saturated(g: Graph, max_iterations: int) -> Graph:
    try:
        return saturate_rl(g, max_iterations)
    except IterationLimitExceeded:
        return g


# -- data suite --------------------------------------------------------------


def check_known_terms(g: Graph, ontology: Graph, ns: str) -> list[Outcome]:
    defined = ontology.subject_set()
    bare = {ns, ns.rstrip("#/")}
    used = sorted(
        {i for i in g.iris() if i.value.startswith(ns) and i.value not in bare},
        key=term_sort_key,
    )
    return [
        Outcome(
            FAIL,
            "Term not defined in the ontology",
            f"{_short(g, t)} is in the ontology namespace but the ontology does not define it.",
            (Pointer.uri(t.value),),
            key=("term", t),
        )
        for t in used
        if t not in defined
    ]


_REGISTRY_CACHE: dict[Optional[str], dict[str, str]] = {}


def load_prefix_registry(path: Optional[str] = None) -> dict[str, str]:
    if path not in _REGISTRY_CACHE:
        if path is None:
            text = resources.files("acimov_lint.data").joinpath("prefixes.json").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
        _REGISTRY_CACHE[path] = dict(doc.get("prefixes", doc))
    return _REGISTRY_CACHE[path]


def used_namespaces(g: Graph) -> set[str]:
    found = {ns for ns in g.prefixes.values() if ns}
    for i in g.iris():
        ns, local = split_iri(i.value)
        if local:
            found.add(ns)
    return found


def check_namespace_typos(used: Iterable[str], known: Iterable[str], max_distance: int) -> list[Outcome]:
    known = sorted(set(known))
    known_set = set(known)
    out = []
    for ns in sorted(set(used)):
        if ns in known_set:
            continue
        best: Optional[tuple[int, str]] = None
        for k in known:
            d = bounded_levenshtein(ns, k, max_distance)
            if 1 <= d <= max_distance and (best is None or (d, k) < best):
                best = (d, k)
        if best is not None:
            d, k = best
            out.append(
                Outcome(
                    CANNOT_TELL,
                    "Possible namespace typo",
                    f"<{ns}> is {d} edit(s) away from the known namespace <{k}>.",
                    (Pointer.uri(ns), Pointer.uri(k), Pointer.message(f"distance {d}")),
                    key=("ns", ns),
                )
            )
    return out


# -- query suite -------------------------------------------------------------


def syntax_outcome(err: ParseError, path: str) -> Outcome:
    return Outcome(
        FAIL,
        "Syntax error",
        f"{path}:{err.line}:{err.column}: {err.message}",
        (Pointer.uri(path), Pointer.message(f"line {err.line}, column {err.column}: {err.message}")),
        key=("syntax", path),
    )


def check_services(info: QueryInfo) -> list[Outcome]:
    return [
        Outcome(
            CANNOT_TELL,
            "Federated query",
            f"SERVICE <{s}> is not contacted; the remote part was only checked syntactically.",
            (Pointer.uri(s),),
            key=("service", s),
        )
        for s in sorted(set(info.services))
    ]


def check_query_form(info: QueryInfo) -> list[Outcome]:
    bad = query_form_violation(info)
    if bad is None:
        return []
    return [
        Outcome(
            FAIL,
            f"{bad} query",
            f"Competency questions must be SELECT or ASK queries, found {bad}.",
            (Pointer.message(bad),),
            key=("form", bad),
        )
    ]


def check_uri_validity(info: QueryInfo) -> list[Outcome]:
    out = []
    for iri in sorted(info.iris):
        v = validate_iri(iri)
        if v is not None:
            out.append(
                Outcome(
                    FAIL,
                    "Invalid IRI",
                    f"<{iri}> is not a valid IRI: {v}",
                    (Pointer.snippet(f"<{iri}>"), Pointer.message(str(v))),
                    key=("iri", iri),
                )
            )
    return out


def query_namespaces(info: QueryInfo) -> set[str]:
    found = {ns for ns in info.prefixes.values() if ns}
    for iri in info.iris:
        ns, local = split_iri(iri)
        if local and validate_iri(iri) is None:
            found.add(ns)
    return found


__all__ = [n for n in dir() if n.startswith("check_")] + [
    "imports_outcomes",
    "load_prefix_registry",
    "namespace_of",
    "ontology_terms",
    "query_namespaces",
    "saturated",
    "syntax_outcome",
    "used_namespaces",
]
