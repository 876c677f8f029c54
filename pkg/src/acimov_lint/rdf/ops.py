"""Graph-level operations: merging and namespace scoping."""

from __future__ import annotations

import logging
from typing import Sequence

from .terms import BlankNode, Graph, Iri, Term, Triple

log = logging.getLogger(__name__)


def merge_graphs(graphs: Sequence[Graph]) -> Graph:
    """Union of ``graphs`` with blank nodes standardized apart.

    Blank nodes of the i-th source are relabelled ``g{i}.{label}`` so two
    sources never share a label. For a repeated prefix the later binding
    wins and the conflict is kept in ``Graph.warnings``.
    """
    triples: set[Triple] = set()
    prefixes: dict[str, str] = {}
    warnings: list[str] = []
    for i, g in enumerate(graphs):
        tag = f"g{i}."

        def rename(t: Term) -> Term:
            if isinstance(t, BlankNode):
                return BlankNode(tag + t.label)
            return t

        for s, p, o in g:
            triples.add(Triple(rename(s), p, rename(o)))  # type: ignore[arg-type]
        for pfx, ns in g.prefixes.items():
            old = prefixes.get(pfx)
            if old is not None and old != ns:
                msg = f"prefix {pfx!r} rebound from <{old}> to <{ns}>"
                log.debug(msg)
                warnings.append(msg)
            prefixes[pfx] = ns
    return Graph(triples, prefixes, warnings)


def terms_in_namespace(g: Graph, ns: Iri | str) -> set[Iri]:
    ns = str(ns)
    if not ns:
        raise ValueError("namespace must be non-empty")
    return {iri for iri in g.iris() if iri.value.startswith(ns)}


def relabel_blank_nodes(g: Graph, prefix: str = "b") -> Graph:
    """Relabel blank nodes to ``{prefix}{n}`` in order of first appearance
    in sorted triple order. Used to make serializations stable."""
    from .terms import triple_sort_key

    mapping: dict[BlankNode, BlankNode] = {}

    def rename(t: Term) -> Term:
        if isinstance(t, BlankNode):
            if t not in mapping:
                mapping[t] = BlankNode(f"{prefix}{len(mapping)}")
            return mapping[t]
        return t

    out = [Triple(rename(s), p, rename(o)) for s, p, o in sorted(g, key=triple_sort_key)]  # type: ignore[arg-type]
    return Graph(out, g.prefixes, g.warnings)
