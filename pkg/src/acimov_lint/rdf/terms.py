"""RDF terms, triples and immutable graphs."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return self.value

    def n3(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def __str__(self) -> str:
        return f"_:{self.label}"

    def n3(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal. ``language`` is stored lower-cased; when it is set the
    datatype is always rdf:langString."""

    lexical: str
    datatype: Iri = field(default=Iri(XSD_STRING))
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None:
            object.__setattr__(self, "language", self.language.lower())
            if self.datatype.value != RDF_LANGSTRING:
                object.__setattr__(self, "datatype", Iri(RDF_LANGSTRING))
        elif self.datatype.value == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal requires a language tag")

    def __str__(self) -> str:
        return self.lexical

    def n3(self) -> str:
        body = '"' + escape_string(self.lexical) + '"'
        if self.language is not None:
            return f"{body}@{self.language}"
        if self.datatype.value == XSD_STRING:
            return body
        return f"{body}^^<{self.datatype.value}>"


Term = Union[Iri, BlankNode, Literal]
Subject = Union[Iri, BlankNode]

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        esc = _ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


class Triple(NamedTuple):
    subject: Subject
    predicate: Iri
    object: Term


def make_triple(s: Term, p: Term, o: Term) -> Triple:
    if isinstance(s, Literal):
        raise TypeError(f"literal in subject position: {s.n3()}")
    if not isinstance(p, Iri):
        raise TypeError(f"predicate must be an IRI, got {p.n3()}")
    return Triple(s, p, o)


class Graph:
    """Immutable set of triples plus a prefix map.

    Lookup indexes are built lazily on first use; the graph never changes
    after construction, so sharing across threads is safe once built.
    """

    __slots__ = ("_triples", "_prefixes", "_by_p", "_by_s", "_by_o", "warnings")

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        prefixes: Optional[Mapping[str, str]] = None,
        warnings: Iterable[str] = (),
    ) -> None:
        self._triples = frozenset(triples)
        self._prefixes = dict(prefixes or {})
        self._by_p: Optional[dict] = None
        self._by_s: Optional[dict] = None
        self._by_o: Optional[dict] = None
        self.warnings = tuple(warnings)

    @property
    def triples(self) -> frozenset:
        return self._triples

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"<Graph {len(self._triples)} triples>"

    def _index(self) -> None:
        by_p: dict = defaultdict(list)
        by_s: dict = defaultdict(list)
        by_o: dict = defaultdict(list)
        for t in self._triples:
            by_p[t.predicate].append(t)
            by_s[t.subject].append(t)
            by_o[t.object].append(t)
        self._by_p, self._by_s, self._by_o = dict(by_p), dict(by_s), dict(by_o)

    def match(
        self,
        s: Optional[Term] = None,
        p: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        if self._by_p is None:
            self._index()
        if s is not None:
            pool = self._by_s.get(s, ())
        elif o is not None:
            pool = self._by_o.get(o, ())
        elif p is not None:
            pool = self._by_p.get(p, ())
        else:
            return list(self._triples)
        return [
            t
            for t in pool
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        ]

    def objects(self, s: Term, p: Term) -> list[Term]:
        return [t.object for t in self.match(s, p, None)]

    def subjects(self, p: Term, o: Term) -> list[Subject]:
        return [t.subject for t in self.match(None, p, o)]

    def value(self, s: Term, p: Term) -> Optional[Term]:
        objs = self.objects(s, p)
        return min(objs, key=term_sort_key) if objs else None

    def subject_set(self) -> set:
        if self._by_s is None:
            self._index()
        return set(self._by_s)

    def iris(self) -> set[Iri]:
        found: set[Iri] = set()
        for t in self._triples:
            for term in t:
                if isinstance(term, Iri):
                    found.add(term)
        return found

    def collection(self, head: Term) -> Optional[list[Term]]:
        """Items of an rdf:List, or None when ``head`` is not a well-formed list."""
        from .namespaces import RDF

        items: list[Term] = []
        seen = set()
        node = head
        while node != RDF.nil:
            if node in seen:
                return None
            seen.add(node)
            firsts = self.objects(node, RDF.first)
            rests = self.objects(node, RDF.rest)
            if len(firsts) != 1 or len(rests) != 1:
                return None
            items.append(firsts[0])
            node = rests[0]
        return items

    def with_triples(self, extra: Iterable[Triple]) -> "Graph":
        return Graph(self._triples.union(extra), self._prefixes, self.warnings)


_KIND_ORDER = {Iri: 0, BlankNode: 1, Literal: 2}


def term_sort_key(t: Term) -> tuple:
    if isinstance(t, Literal):
        return (2, t.lexical, t.datatype.value, t.language or "")
    if isinstance(t, BlankNode):
        return (1, t.label, "", "")
    return (0, t.value, "", "")


def triple_sort_key(t: Triple) -> tuple:
    return (term_sort_key(t.subject), term_sort_key(t.predicate), term_sort_key(t.object))
