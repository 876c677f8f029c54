"""The criterion registry: ids, titles, which subjects they apply to."""

from __future__ import annotations

from dataclasses import dataclass, field

MODEL_KINDS = frozenset({"Module", "Modelet", "ModuleModeletMerge", "ModulesMerge", "WholeMerge"})
DATA_KINDS = frozenset({"Dataset", "UseCase"})
QUERY_KINDS = frozenset({"Query"})


@dataclass(frozen=True)
class TestCriterion:
    __test__ = False  # not a pytest class

    id: str
    title: str
    description: str
    applicable_kinds: frozenset
    prerequisites: frozenset = field(default_factory=frozenset)


def _c(id: str, title: str, description: str, kinds: frozenset, prereq=("syntax-error",)) -> TestCriterion:
    return TestCriterion(id, title, description, kinds, frozenset(prereq))


_ALL = MODEL_KINDS | DATA_KINDS

CRITERIA: dict[str, TestCriterion] = {
    c.id: c
    for c in [
        _c("syntax-error", "Syntax", "The file parses as Turtle.", _ALL, ()),
        _c(
            "term-referencing",
            "Term referencing",
            "Every term in the ontology namespace carries rdfs:isDefinedBy.",
            MODEL_KINDS,
        ),
        _c(
            "domain-range-vocabulary",
            "Domain and range vocabulary",
            "rdfs:domain and rdfs:range of ontology terms point to named IRIs.",
            MODEL_KINDS,
        ),
        _c(
            "subset-property-misuse",
            "Subclass and subproperty misuse",
            "rdfs:subClassOf never links properties and rdfs:subPropertyOf never links classes.",
            MODEL_KINDS,
        ),
        _c(
            "term-differentiation",
            "Term differentiation",
            "No two ontology terms have local names within the edit-distance threshold.",
            MODEL_KINDS,
        ),
        _c(
            "english-labels",
            "English labels",
            "Every ontology term has an rdfs:label tagged as English.",
            MODEL_KINDS,
        ),
        _c(
            "owl-rl-consistency",
            "OWL 2 RL consistency",
            "No falsity rule fires after OWL 2 RL saturation.",
            _ALL,
        ),
        _c("profile-compatibility-EL", "OWL 2 EL compatibility", "No construct outside OWL 2 EL.", MODEL_KINDS),
        _c("profile-compatibility-QL", "OWL 2 QL compatibility", "No construct outside OWL 2 QL.", MODEL_KINDS),
        _c("profile-compatibility-RL", "OWL 2 RL compatibility", "No construct outside OWL 2 RL.", MODEL_KINDS),
        _c(
            "known-terms",
            "Known terms",
            "Every ontology-namespace term used by the data is defined in the ontology.",
            DATA_KINDS,
            ("syntax-error", "ontology-available"),
        ),
        _c(
            "namespace-typo",
            "Namespace typos",
            "Namespaces close to, but different from, a known namespace are reported for review.",
            DATA_KINDS | QUERY_KINDS,
        ),
        _c("query-syntax", "Query syntax", "The file parses as a SPARQL 1.1 query.", QUERY_KINDS, ()),
        _c("query-form", "Query form", "Competency questions are SELECT or ASK queries.", QUERY_KINDS, ("query-syntax",)),
        _c("uri-validity", "IRI validity", "Every IRI in the query is a valid IRI.", QUERY_KINDS, ("query-syntax",)),
    ]
}

# namespace-typo gates on whichever parse check applies to the subject
PARSE_CRITERION = {**{k: "syntax-error" for k in MODEL_KINDS | DATA_KINDS}, "Query": "query-syntax"}

CUSTOM_PREFIXES = ("custom-model:", "custom-data:")


def is_known_criterion(cid: str) -> bool:
    return cid in CRITERIA or any(cid.startswith(p) and len(cid) > len(p) for p in CUSTOM_PREFIXES)


def custom_criterion(cid: str, title: str, description: str) -> TestCriterion:
    kinds = MODEL_KINDS if cid.startswith("custom-model:") else DATA_KINDS
    return TestCriterion(cid, title, description, kinds, frozenset({"syntax-error"}))


def criterion(cid: str) -> TestCriterion:
    if cid in CRITERIA:
        return CRITERIA[cid]
    if is_known_criterion(cid):
        return custom_criterion(cid, cid.split(":", 1)[1], "Custom shape test")
    raise KeyError(cid)
