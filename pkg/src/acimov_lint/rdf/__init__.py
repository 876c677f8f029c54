"""In-memory RDF layer shared by every checker."""

from .distance import BACKEND, bounded_levenshtein, close_pairs, levenshtein
from .iri import IriViolation, is_absolute_iri, resolve_iri, validate_iri
from .namespaces import DCTERMS, EARL, OWL, PROV, RDF, RDFS, SH, XSD, Namespace, local_name, namespace_of
from .ops import merge_graphs, relabel_blank_nodes, terms_in_namespace
from .terms import BlankNode, Graph, Iri, Literal, Term, Triple, make_triple, term_sort_key, triple_sort_key

__all__ = [
    "BACKEND",
    "BlankNode",
    "DCTERMS",
    "EARL",
    "Graph",
    "Iri",
    "IriViolation",
    "Literal",
    "Namespace",
    "OWL",
    "PROV",
    "RDF",
    "RDFS",
    "SH",
    "Term",
    "Triple",
    "XSD",
    "bounded_levenshtein",
    "close_pairs",
    "is_absolute_iri",
    "levenshtein",
    "local_name",
    "make_triple",
    "merge_graphs",
    "namespace_of",
    "relabel_blank_nodes",
    "resolve_iri",
    "term_sort_key",
    "terms_in_namespace",
    "triple_sort_key",
    "validate_iri",
]
