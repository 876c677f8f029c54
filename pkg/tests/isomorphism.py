"""Blank-node-aware graph comparison used as a test oracle.

Colour refinement over blank nodes followed by backtracking over the
remaining ties. Independent of the serializer and of merge relabelling.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict

from acimov_lint.rdf import BlankNode, Graph, Triple


def _h(*parts: str) -> str:
    return hashlib.sha1("\x1f".join(parts).encode()).hexdigest()


def _colour(triples, colours):
    def name(t):
        if isinstance(t, BlankNode):
            return "B" + colours[t]
        return repr(t)

    new = {}
    per_node = defaultdict(list)
    for s, p, o in triples:
        if isinstance(s, BlankNode):
            per_node[s].append(_h("out", repr(p), name(o)))
        if isinstance(o, BlankNode):
            per_node[o].append(_h("in", repr(p), name(s)))
    for b in colours:
        new[b] = _h(colours[b], *sorted(per_node[b]))
    return new


def _refine(triples, bnodes, colours=None):
    colours = colours or {b: "" for b in bnodes}
    while True:
        new = _colour(triples, colours)
        if len(set(new.values())) == len(set(colours.values())):
            return new
        colours = new


def _canon(triples, mapping):
    def n(t):
        return "B" + mapping[t] if isinstance(t, BlankNode) else repr(t)

    return sorted((n(s), repr(p), n(o)) for s, p, o in triples)


def isomorphic(a: Graph, b: Graph) -> bool:
    ta, tb = list(a), list(b)
    if len(ta) != len(tb):
        return False
    ba = {x for t in ta for x in (t.subject, t.object) if isinstance(x, BlankNode)}
    bb = {x for t in tb for x in (t.subject, t.object) if isinstance(x, BlankNode)}
    if len(ba) != len(bb):
        return False
    if not ba:
        return set(ta) == set(tb)
    return _search(ta, tb, ba, bb, {b: "" for b in ba}, {b: "" for b in bb})


def _search(ta, tb, ba, bb, ca, cb) -> bool:
    ca = _refine(ta, ba, ca)
    cb = _refine(tb, bb, cb)
    if sorted(ca.values()) != sorted(cb.values()):
        return False
    if len(set(ca.values())) == len(ba):
        return _canon(ta, ca) == _canon(tb, cb)
    groups = defaultdict(list)
    for x, c in ca.items():
        groups[c].append(x)
    tie = min((c for c, xs in groups.items() if len(xs) > 1), key=lambda c: (len(groups[c]), c))
    pick = sorted(groups[tie], key=lambda x: x.label)[0]
    for cand in sorted((y for y, c in cb.items() if c == tie), key=lambda y: y.label):
        na = dict(ca)
        nb = dict(cb)
        na[pick] = _h(tie, "chosen")
        nb[cand] = _h(tie, "chosen")
        if _search(ta, tb, ba, bb, na, nb):
            return True
    return False


def parse_ntriples(text: str, base: str | None = None) -> Graph:
    # N-Triples is a syntactic subset of Turtle
    from acimov_lint.turtle import parse_turtle

    return parse_turtle(text, base).graph


__all__ = ["isomorphic", "parse_ntriples", "Triple"]
