"""A SHACL-core subset used for project-specific custom tests.

Supported: node shapes and property shapes with sh:targetClass,
sh:targetNode, sh:targetSubjectsOf, sh:targetObjectsOf; predicate paths
and sh:inversePath; constraints minCount, maxCount, class, datatype,
nodeKind, pattern, in, hasValue. Anything else found in a shape file is
reported as an unsupported feature instead of being skipped silently.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .rdf.namespaces import RDF, SH, XSD
from .rdf.terms import BlankNode, Graph, Iri, Literal, Term, term_sort_key


class ShapeFileError(ValueError):
    """A shape file uses a supported feature with an invalid value."""


@dataclass(frozen=True)
class Inverse:
    predicate: Iri

    def n3(self) -> str:
        return f"^{self.predicate.n3()}"


Path = Union[Iri, Inverse]


@dataclass(frozen=True)
class Constraint:
    kind: str  # minCount | maxCount | class | datatype | nodeKind | pattern | in | hasValue
    value: object
    flags: str = ""

    def describe(self) -> str:
        v = self.value
        if isinstance(v, tuple):
            shown = "(" + " ".join(x.n3() for x in v) + ")"
        elif isinstance(v, (Iri, BlankNode, Literal)):
            shown = v.n3()
        else:
            shown = str(v)
        return f"sh:{self.kind} {shown}"


@dataclass(frozen=True)
class Target:
    kind: str  # targetClass | targetNode | targetSubjectsOf | targetObjectsOf
    term: Term


@dataclass(frozen=True)
class Shape:
    id: Term
    targets: tuple[Target, ...]
    path: Optional[Path]
    constraints: tuple[Constraint, ...]
    message: Optional[str] = None
    severity: str = "Violation"  # Violation | Warning | Info


@dataclass(frozen=True)
class ShapeViolation:
    shape: Term
    focus: Term
    value: Optional[Term]
    constraint: Constraint
    message: str
    severity: str = "Violation"


@dataclass
class LoadResult:
    shapes: list[Shape] = field(default_factory=list)
    unsupported: list[str] = field(default_factory=list)


TARGETS = ("targetClass", "targetNode", "targetSubjectsOf", "targetObjectsOf")
CONSTRAINTS = ("minCount", "maxCount", "class", "datatype", "nodeKind", "pattern", "in", "hasValue")
NODE_KINDS = {
    "IRI": (Iri,),
    "Literal": (Literal,),
    "BlankNode": (BlankNode,),
    "BlankNodeOrIRI": (BlankNode, Iri),
    "BlankNodeOrLiteral": (BlankNode, Literal),
    "IRIOrLiteral": (Iri, Literal),
}
# shape-structure predicates that are understood but are not constraints
_STRUCTURAL = {"property", "path", "message", "severity", "name", "description", "flags", "deactivated", "order", "group"}
_SEVERITIES = {SH.Violation: "Violation", SH.Warning: "Warning", SH.Info: "Info"}


def _int(g: Graph, node: Term, p: Iri, kind: str) -> int:
    v = g.value(node, p)
    if not isinstance(v, Literal):
        raise ShapeFileError(f"sh:{kind} on {node.n3()} must be a literal")
    try:
        n = int(v.lexical.strip())
    except ValueError:
        raise ShapeFileError(f"sh:{kind} on {node.n3()} is not an integer: {v.lexical!r}") from None
    if n < 0:
        raise ShapeFileError(f"sh:{kind} on {node.n3()} is negative")
    return n


def _constraints(g: Graph, node: Term) -> list[Constraint]:
    out: list[Constraint] = []
    for kind in ("minCount", "maxCount"):
        if g.objects(node, SH[kind]):
            out.append(Constraint(kind, _int(g, node, SH[kind], kind)))
    for kind in ("class", "datatype"):
        for v in g.objects(node, SH[kind]):
            if not isinstance(v, Iri):
                raise ShapeFileError(f"sh:{kind} on {node.n3()} must be an IRI")
            out.append(Constraint(kind, v))
    for v in g.objects(node, SH.nodeKind):
        name = v.value.rsplit("#", 1)[-1] if isinstance(v, Iri) and v.value.startswith(str(SH)) else None
        if name not in NODE_KINDS:
            raise ShapeFileError(f"sh:nodeKind on {node.n3()} has unknown value {v.n3()}")
        out.append(Constraint("nodeKind", name))
    for v in g.objects(node, SH.pattern):
        if not isinstance(v, Literal):
            raise ShapeFileError(f"sh:pattern on {node.n3()} must be a literal")
        flags = g.value(node, SH.flags)
        flag_s = flags.lexical if isinstance(flags, Literal) else ""
        try:
            re.compile(v.lexical, _re_flags(flag_s))
        except re.error as e:
            raise ShapeFileError(f"sh:pattern on {node.n3()} is not a valid regex: {e}") from None
        out.append(Constraint("pattern", v.lexical, flag_s))
    for head in g.objects(node, SH["in"]):
        members = g.collection(head)
        if members is None:
            raise ShapeFileError(f"sh:in on {node.n3()} must be an RDF list")
        out.append(Constraint("in", tuple(members)))
    for v in g.objects(node, SH.hasValue):
        out.append(Constraint("hasValue", v))
    return out


def _re_flags(s: str) -> int:
    flags = 0
    for ch in s:
        flags |= {"i": re.I, "m": re.M, "s": re.S, "x": re.X}.get(ch, 0)
    return flags


def _path(g: Graph, node: Term) -> Path:
    p = g.value(node, SH.path)
    if isinstance(p, Iri):
        return p
    if isinstance(p, BlankNode):
        inv = g.value(p, SH.inversePath)
        if isinstance(inv, Iri) and len(g.match(p, None, None)) == 1:
            return Inverse(inv)
    raise ShapeFileError(f"unsupported sh:path on {node.n3()}")


def _message(g: Graph, node: Term) -> Optional[str]:
    m = g.value(node, SH.message)
    return m.lexical if isinstance(m, Literal) else None


def _severity(g: Graph, node: Term, default: str) -> str:
    s = g.value(node, SH.severity)
    if s is None:
        return default
    if s not in _SEVERITIES:
        raise ShapeFileError(f"unknown sh:severity {s.n3()} on {node.n3()}")
    return _SEVERITIES[s]


def load_shapes(g: Graph) -> LoadResult:
    """Shapes declared in ``g`` plus diagnostics for unsupported features.

    Raises :class:`ShapeFileError` for supported features with bad values.
    """
    result = LoadResult()
    sh_ns = str(SH)
    node_shapes = sorted(
        {t.subject for t in g if isinstance(t.predicate, Iri) and t.predicate.value in {sh_ns + k for k in TARGETS}},
        key=term_sort_key,
    )
    seen_unsupported: set[str] = set()

    def note_unsupported(node: Term) -> None:
        for t in g.match(node, None, None):
            pv = t.predicate.value
            if pv.startswith(sh_ns):
                local = pv[len(sh_ns):]
                if local not in CONSTRAINTS and local not in TARGETS and local not in _STRUCTURAL:
                    if local not in seen_unsupported:
                        seen_unsupported.add(local)
                        result.unsupported.append(f"unsupported feature sh:{local} (on {node.n3()})")

    for node in node_shapes:
        targets = tuple(
            Target(k, o) for k in TARGETS for o in sorted(g.objects(node, SH[k]), key=term_sort_key)
        )
        note_unsupported(node)
        severity = _severity(g, node, "Violation")
        message = _message(g, node)
        own = _constraints(g, node)
        if own:
            result.shapes.append(Shape(node, targets, None, tuple(own), message, severity))
        for prop in sorted(g.objects(node, SH.property), key=term_sort_key):
            note_unsupported(prop)
            cons = _constraints(g, prop)
            if not cons:
                continue
            result.shapes.append(
                Shape(
                    prop,
                    targets,
                    _path(g, prop),
                    tuple(cons),
                    _message(g, prop) or message,
                    _severity(g, prop, severity),
                )
            )
    return result


def _focus_nodes(data: Graph, shape: Shape) -> list[Term]:
    found: set[Term] = set()
    for t in shape.targets:
        if t.kind == "targetClass":
            found.update(data.subjects(RDF.type, t.term))
        elif t.kind == "targetNode":
            found.add(t.term)
        elif t.kind == "targetSubjectsOf":
            found.update(x.subject for x in data.match(None, t.term, None))
        else:
            found.update(x.object for x in data.match(None, t.term, None))
    return sorted(found, key=term_sort_key)


def value_nodes(data: Graph, focus: Term, path: Optional[Path]) -> list[Term]:
    if path is None:
        return [focus]
    if isinstance(path, Inverse):
        vals = data.subjects(path.predicate, focus)
    else:
        vals = data.objects(focus, path)
    return sorted(set(vals), key=term_sort_key)


def _is_instance(data: Graph, v: Term, cls: Iri) -> bool:
    # rdf:type only, callers pre-saturate when subclass reasoning is wanted
    return (v, RDF.type, cls) in data


def _datatype_ok(v: Term, dt: Iri) -> bool:
    if not isinstance(v, Literal):
        return False
    if v.datatype != dt:
        return False
    if dt == XSD.integer:
        return re.fullmatch(r"[+-]?[0-9]+", v.lexical) is not None
    if dt == XSD.boolean:
        return v.lexical in ("true", "false", "1", "0")
    return True


def _check_value(data: Graph, c: Constraint, v: Term) -> bool:
    if c.kind == "class":
        return _is_instance(data, v, c.value)  # type: ignore[arg-type]
    if c.kind == "datatype":
        return _datatype_ok(v, c.value)  # type: ignore[arg-type]
    if c.kind == "nodeKind":
        return isinstance(v, NODE_KINDS[c.value])  # type: ignore[index]
    if c.kind == "pattern":
        if isinstance(v, BlankNode):
            return False
        text = v.lexical if isinstance(v, Literal) else v.value
        return re.search(c.value, text, _re_flags(c.flags)) is not None  # type: ignore[arg-type]
    if c.kind == "in":
        return v in c.value  # type: ignore[operator]
    raise AssertionError(c.kind)


def _path_text(path: Optional[Path]) -> str:
    return "" if path is None else f" on {path.n3()}"


def validate(data: Graph, shapes: list[Shape]) -> list[ShapeViolation]:
    out: list[ShapeViolation] = []
    for shape in shapes:
        for focus in _focus_nodes(data, shape):
            values = value_nodes(data, focus, shape.path)
            for c in shape.constraints:

                def add(value: Optional[Term], why: str) -> None:
                    msg = shape.message or f"{c.describe()} violated{_path_text(shape.path)}: {why}"
                    out.append(ShapeViolation(shape.id, focus, value, c, msg, shape.severity))

                if c.kind == "minCount":
                    if len(values) < c.value:  # type: ignore[operator]
                        add(None, f"{len(values)} value(s) for {focus.n3()}")
                elif c.kind == "maxCount":
                    if len(values) > c.value:  # type: ignore[operator]
                        add(values[0] if values else None, f"{len(values)} value(s) for {focus.n3()}")
                elif c.kind == "hasValue":
                    if c.value not in values:
                        add(None, f"{focus.n3()} lacks {c.value.n3()}")  # type: ignore[attr-defined]
                else:
                    for v in values:
                        if not _check_value(data, c, v):
                            add(v, f"{v.n3()} at {focus.n3()}")
    return out
