"""Syntactic OWL 2 EL/QL/RL profile checks over the RDF encoding of axioms."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from ..rdf.namespaces import OWL, RDF, RDFS, STANDARD_PREFIXES
from ..rdf.terms import BlankNode, Graph, Iri, Literal, Term, term_sort_key


class Profile(str, Enum):
    EL = "EL"
    QL = "QL"
    RL = "RL"


@dataclass(frozen=True)
class ProfileRule:
    id: str
    profiles: frozenset
    kind: str
    targets: tuple[str, ...]
    message: str
    position: Optional[str] = None
    value_gt: Optional[int] = None
    filler_not: Optional[str] = None
    unless_type: Optional[str] = None


@dataclass(frozen=True)
class ProfileViolation:
    profile: Profile
    construct: str
    focus: Term
    explanation: str
    rule_id: str


def _expand(curie: str) -> str:
    prefix, sep, local = curie.partition(":")
    if sep and prefix in STANDARD_PREFIXES and not local.startswith("//"):
        return STANDARD_PREFIXES[prefix] + local
    return curie


def _as_tuple(v: Union[str, list]) -> tuple[str, ...]:
    return tuple(_expand(x) for x in ([v] if isinstance(v, str) else v))


def load_rule_table(source: Union[str, Path, None] = None) -> list[ProfileRule]:
    """Load a violation table; ``None`` loads the bundled one."""
    if source is None:
        text = resources.files("acimov_lint.data").joinpath("profile_rules.json").read_text(encoding="utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    rules = []
    for rec in json.loads(text)["rules"]:
        m = rec["match"]
        kind = m["kind"]
        if kind not in ("predicate", "type", "expression"):
            raise ValueError(f"rule {rec['id']}: unknown match kind {kind!r}")
        targets = _as_tuple(m.get("predicate") or m.get("type") or m.get("feature"))
        rules.append(
            ProfileRule(
                id=rec["id"],
                profiles=frozenset(Profile(p) for p in rec["profiles"]),
                kind=kind,
                targets=targets,
                message=rec["message"],
                position=m.get("position"),
                value_gt=m.get("value_gt"),
                filler_not=_expand(m["filler_not"]) if "filler_not" in m else None,
                unless_type=_expand(m["unless_type"]) if "unless_type" in m else None,
            )
        )
    return rules


_DEFAULT_RULES: Optional[list[ProfileRule]] = None


def default_rules() -> list[ProfileRule]:
    global _DEFAULT_RULES
    if _DEFAULT_RULES is None:
        _DEFAULT_RULES = load_rule_table()
    return _DEFAULT_RULES


def class_expression_positions(g: Graph) -> dict[Term, dict[str, Term]]:
    """Map each class-expression node to {position: anchor}.

    The anchor is the named subject of the axiom the expression hangs
    from, used to point users at a term they can find in their files.
    """
    positions: dict[Term, dict[str, Term]] = defaultdict(dict)
    stack: list[tuple[Term, str, Term]] = []

    for t in g.match(None, RDFS.subClassOf, None):
        stack.append((t.subject, "subclass", t.subject))
        stack.append((t.object, "superclass", t.subject))
    for pred in (RDFS.domain, RDFS.range):
        for t in g.match(None, pred, None):
            stack.append((t.object, "superclass", t.subject))
    for t in g.match(None, OWL.equivalentClass, None):
        anchor = t.subject if isinstance(t.subject, Iri) else t.object
        for node in (t.subject, t.object):
            stack.append((node, "subclass", anchor))
            stack.append((node, "superclass", anchor))
    for t in g.match(None, OWL.disjointWith, None):
        stack.append((t.subject, "subclass", t.subject))
        stack.append((t.object, "subclass", t.subject))
    for t in g.match(None, RDF.type, None):
        if isinstance(t.object, BlankNode):
            stack.append((t.object, "superclass", t.subject))

    while stack:
        node, pos, anchor = stack.pop()
        if isinstance(node, Literal) or pos in positions[node]:
            continue
        positions[node][pos] = anchor
        for op in (OWL.intersectionOf, OWL.unionOf):
            for head in g.objects(node, op):
                for member in g.collection(head) or ():
                    stack.append((member, pos, anchor))
        for op in (OWL.someValuesFrom, OWL.allValuesFrom, OWL.onClass):
            for filler in g.objects(node, op):
                stack.append((filler, pos, anchor))
        flipped = "superclass" if pos == "subclass" else "subclass"
        for inner in g.objects(node, OWL.complementOf):
            stack.append((inner, flipped, anchor))
    return {k: v for k, v in positions.items() if v}


def _int_value(t: Term) -> Optional[int]:
    if isinstance(t, Literal):
        try:
            return int(t.lexical.strip())
        except ValueError:
            return None
    return None


def _describe(t: Term) -> str:
    return t.n3()


def _violations(g: Graph, rules: Iterable[ProfileRule], wanted: Iterable[Profile]) -> list[ProfileViolation]:
    wanted = set(wanted)
    positions: Optional[dict] = None
    found: dict[tuple, ProfileViolation] = {}
    for rule in rules:
        profiles = rule.profiles & wanted
        if not profiles:
            continue
        hits: list[tuple[Term, str, str]] = []  # (focus, construct, identity)
        if rule.kind == "predicate":
            for target in rule.targets:
                for t in g.match(None, Iri(target), None):
                    hits.append((t.subject, target, f"{t.subject.n3()} {target} {t.object.n3()}"))
        elif rule.kind == "type":
            for target in rule.targets:
                for s in g.subjects(RDF.type, Iri(target)):
                    if rule.unless_type and (s, RDF.type, Iri(rule.unless_type)) in g:
                        continue
                    hits.append((s, target, s.n3()))
        else:
            if positions is None:
                positions = class_expression_positions(g)
            for node, pos_map in positions.items():
                anchor = pos_map.get(rule.position or "")
                if anchor is None:
                    continue
                for target in rule.targets:
                    values = g.objects(node, Iri(target))
                    if not values:
                        continue
                    if rule.value_gt is not None and not any(
                        (v := _int_value(x)) is not None and v > rule.value_gt for x in values
                    ):
                        continue
                    if rule.filler_not is not None and all(x == Iri(rule.filler_not) for x in values):
                        continue
                    hits.append((anchor, target, node.n3()))
                    break
        for focus, construct, ident in hits:
            for p in profiles:
                key = (p, rule.id, ident)
                if key not in found:
                    expl = f"{rule.message} (at {_describe(focus)})"
                    found[key] = ProfileViolation(p, construct, focus, expl, rule.id)
    return sorted(
        found.values(),
        key=lambda v: (v.profile.value, v.rule_id, term_sort_key(v.focus), v.explanation),
    )


def check_profile(
    g: Graph, profile: Union[Profile, str], rules: Optional[Iterable[ProfileRule]] = None
) -> list[ProfileViolation]:
    """Violations of ``profile``; an empty list means the graph is compatible."""
    p = Profile(profile)
    return _violations(g, rules if rules is not None else default_rules(), [p])
