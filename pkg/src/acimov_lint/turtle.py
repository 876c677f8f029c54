"""W3C Turtle (RDF 1.1) parser and deterministic serializer.

The parser is strict: it stops at the first error and raises
:class:`~acimov_lint.errors.ParseError` pointing at the first character it
could not accept.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .errors import LineIndex, ParseError
from .rdf.iri import resolve_iri
from .rdf.namespaces import RDF, XSD
from .rdf.terms import (
    RDF_LANGSTRING,
    XSD_STRING,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    escape_string,
    term_sort_key,
)

_PN_CHARS_BASE = (
    "A-Za-z\u00c0-\u00d6\u00d8-\u00f6\u00f8-\u02ff\u0370-\u037d\u037f-\u1fff"
    "\u200c-\u200d\u2070-\u218f\u2c00-\u2fef\u3001-\ud7ff\uf900-\ufdcf"
    "\ufdf0-\ufffd\U00010000-\U000effff"
)
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + r"\-0-9\u00b7\u0300-\u036f\u203f-\u2040"
_PLX = r"%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]"
PN_PREFIX = f"[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?"
PN_LOCAL = (
    f"(?:[{_PN_CHARS_U}:0-9]|{_PLX})"
    f"(?:(?:[{_PN_CHARS}.:]|{_PLX})*(?:[{_PN_CHARS}:]|{_PLX}))?"
)
_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_ECHAR = r"\\[tbnrf\"'\\]"

RE_PNAME = re.compile(f"({PN_PREFIX})?:({PN_LOCAL})?")
RE_BNODE = re.compile(f"_:((?:[{_PN_CHARS_U}0-9])(?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)")
RE_IRIREF = re.compile(r'<((?:[^\x00-\x20<>"{}|^`\\]|' + _UCHAR + r")*)>")
RE_LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
RE_DOUBLE = re.compile(r"[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)")
RE_DECIMAL = re.compile(r"[+-]?[0-9]*\.[0-9]+")
RE_INTEGER = re.compile(r"[+-]?[0-9]+")
RE_STRINGS = [
    ('"""', re.compile(r'"""((?:(?:"|"")?(?:[^"\\]|' + _ECHAR + "|" + _UCHAR + r'))*)"""')),
    ("'''", re.compile(r"'''((?:(?:'|'')?(?:[^'\\]|" + _ECHAR + "|" + _UCHAR + r"))*)'''")),
    ('"', re.compile(r'"((?:[^"\\\n\r]|' + _ECHAR + "|" + _UCHAR + r')*)"')),
    ("'", re.compile(r"'((?:[^'\\\n\r]|" + _ECHAR + "|" + _UCHAR + r")*)'")),
]
RE_WS = re.compile(r"(?:[ \t\r\n]|#[^\r\n]*)*")
RE_ANON = re.compile(r"\[[ \t\r\n]*\]")
RE_WORD = re.compile(r"[A-Za-z]+")
RE_ESCAPE = re.compile(_UCHAR + "|" + _ECHAR)
RE_LOCAL_ESC = re.compile(r"\\(.)")
_RE_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")

_ECHAR_MAP = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(s: str) -> str:
    def sub(m: re.Match) -> str:
        tok = m.group(0)
        if tok[1] in "uU":
            return chr(int(tok[2:], 16))
        return _ECHAR_MAP[tok[1]]

    return RE_ESCAPE.sub(sub, s) if "\\" in s else s


@dataclass
class ParseResult:
    graph: Graph
    base: Optional[str]
    prefix_directives: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class _Tok:
    kind: str
    value: str
    start: int
    end: int
    extra: object = None


class _TurtleParser:
    def __init__(self, text: str, base: Optional[str]) -> None:
        self.text = text
        self.lines = LineIndex(text)
        self.pos = 0
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.directives: list[tuple[str, str]] = []
        self.triples: set[Triple] = set()
        self.bnodes: dict[str, BlankNode] = {}
        self._fresh = 0
        self._peeked: Optional[_Tok] = None

    # -- lexing -------------------------------------------------------------

    def error(self, offset: int, message: str, expected: Optional[str] = None) -> ParseError:
        return self.lines.error(offset, message, expected)

    def _lex(self) -> _Tok:
        text = self.text
        i = RE_WS.match(text, self.pos).end()
        if i >= len(text):
            self.pos = i
            return _Tok("EOF", "", i, i)
        ch = text[i]
        if ch == "<":
            m = RE_IRIREF.match(text, i)
            if not m:
                bad = self._bad_iri_offset(i)
                raise self.error(bad, "invalid character in IRI", "IRIREF")
            raw = m.group(1)
            value = _unescape(raw)
            if "\\" in raw:
                for c in value:
                    if ord(c) <= 0x20 or c in '<>"{}|^`\\':
                        raise self.error(i, "escaped character not allowed in IRI", "IRIREF")
            return self._emit("IRIREF", value, i, m.end())
        if ch in "\"'":
            for opener, rx in RE_STRINGS:
                if text.startswith(opener, i):
                    m = rx.match(text, i)
                    if not m:
                        raise self.error(self._bad_string_offset(i, opener), "unterminated or malformed string", "String")
                    return self._emit("STRING", _unescape(m.group(1)), i, m.end())
        if text.startswith("_:", i):
            m = RE_BNODE.match(text, i)
            if not m:
                raise self.error(i + 2, "invalid blank node label", "BLANK_NODE_LABEL")
            return self._emit("BNODE", m.group(1), i, m.end())
        if ch == "@":
            m = RE_LANGTAG.match(text, i)
            if not m:
                raise self.error(i + 1, "invalid language tag or directive", "LANGTAG")
            return self._emit("LANGTAG", m.group(1), i, m.end())
        if ch == "[":
            m = RE_ANON.match(text, i)
            if m:
                return self._emit("ANON", "[]", i, m.end())
            return self._emit("[", "[", i, i + 1)
        if ch == "^":
            if text.startswith("^^", i):
                return self._emit("^^", "^^", i, i + 2)
            raise self.error(i, "unexpected '^'", "'^^'")
        if ch in "+-0123456789" or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            for kind, rx in (("DOUBLE", RE_DOUBLE), ("DECIMAL", RE_DECIMAL), ("INTEGER", RE_INTEGER)):
                m = rx.match(text, i)
                if m:
                    return self._emit(kind, m.group(0), i, m.end())
            raise self.error(i, "malformed number", "NumericLiteral")
        if ch in "().,;]":
            return self._emit(ch, ch, i, i + 1)
        m = RE_PNAME.match(text, i)
        if m:
            return self._emit("PNAME", m.group(0), i, m.end(), (m.group(1) or "", m.group(2) or ""))
        m = RE_WORD.match(text, i)
        if m:
            return self._emit("WORD", m.group(0), i, m.end())
        raise self.error(i, f"unexpected character {ch!r}")

    def _bad_iri_offset(self, start: int) -> int:
        text = self.text
        j = start + 1
        while j < len(text):
            c = text[j]
            if c == ">":
                return j
            if c == "\\":
                if re.match(_UCHAR, text[j : j + 10]):
                    j += 6 if text[j + 1] == "u" else 10
                    continue
                return j
            if ord(c) <= 0x20 or c in '<"{}|^`':
                return j
            j += 1
        return j

    def _bad_string_offset(self, start: int, opener: str) -> int:
        text = self.text
        j = start + len(opener)
        while j < len(text):
            if text.startswith(opener, j):
                return j
            c = text[j]
            if c == "\\":
                if text[j + 1 : j + 2] in ("u", "U"):
                    n = 4 if text[j + 1] == "u" else 8
                    if re.fullmatch("[0-9A-Fa-f]{%d}" % n, text[j + 2 : j + 2 + n] or "x"):
                        j += 2 + n
                        continue
                    return j
                if text[j + 1 : j + 2] and text[j + 1] in _ECHAR_MAP:
                    j += 2
                    continue
                return j
            if len(opener) == 1 and c in "\r\n":
                return j
            j += 1
        return j

    def _emit(self, kind: str, value: str, start: int, end: int, extra: object = None) -> _Tok:
        self.pos = end
        return _Tok(kind, value, start, end, extra)

    def peek(self) -> _Tok:
        if self._peeked is None:
            self._peeked = self._lex()
        return self._peeked

    def next(self) -> _Tok:
        tok = self.peek()
        self._peeked = None
        return tok

    def expect(self, kind: str, what: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            raise self.error(tok.start, f"expected {what}, found {self._describe(tok)}", what)
        return tok

    @staticmethod
    def _describe(tok: _Tok) -> str:
        if tok.kind == "EOF":
            return "end of input"
        return repr(tok.value) if tok.kind not in ("STRING",) else "string literal"

    # -- grammar ------------------------------------------------------------

    def parse(self) -> ParseResult:
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                break
            self.statement()
        graph = Graph(self.triples, self.prefixes)
        return ParseResult(graph, self.base, self.directives)

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind == "LANGTAG" and tok.value in ("prefix", "base"):
            self.next()
            if tok.value == "prefix":
                self._prefix_decl()
            else:
                self._base_decl()
            self.expect(".", "'.'")
            return
        if tok.kind == "WORD" and tok.value.upper() in ("PREFIX", "BASE"):
            self.next()
            if tok.value.upper() == "PREFIX":
                self._prefix_decl()
            else:
                self._base_decl()
            return
        self.triples_stmt()
        self.expect(".", "'.'")

    def _prefix_decl(self) -> None:
        tok = self.next()
        if tok.kind != "PNAME" or tok.extra[1]:  # type: ignore[index]
            raise self.error(tok.start, "expected prefix name ending in ':'", "PNAME_NS")
        iri_tok = self.expect("IRIREF", "IRI")
        ns = self._resolve(iri_tok.value, iri_tok.start)
        prefix = tok.extra[0]  # type: ignore[index]
        self.prefixes[prefix] = ns
        self.directives.append((prefix, ns))

    def _base_decl(self) -> None:
        iri_tok = self.expect("IRIREF", "IRI")
        self.base = self._resolve(iri_tok.value, iri_tok.start)

    def _resolve(self, ref: str, offset: int) -> str:
        if _RE_SCHEME.match(ref):
            return ref
        if self.base is None:
            raise self.error(offset, f"relative IRI <{ref}> with no base IRI")
        return resolve_iri(ref, self.base)

    def fresh(self) -> BlankNode:
        node = BlankNode(f"b{self._fresh}")
        self._fresh += 1
        return node

    def triples_stmt(self) -> None:
        tok = self.peek()
        if tok.kind == "[":
            subj = self.blank_node_property_list()
            if self.peek().kind != ".":
                self.predicate_object_list(subj)
            return
        subj = self.subject()
        self.predicate_object_list(subj)

    def subject(self) -> Term:
        tok = self.next()
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri(tok)
        if tok.kind == "BNODE":
            return self._labelled(tok.value)
        if tok.kind == "ANON":
            return self.fresh()
        if tok.kind == "(":
            return self.collection()
        raise self.error(tok.start, f"expected subject, found {self._describe(tok)}", "subject")

    def _labelled(self, label: str) -> BlankNode:
        node = self.bnodes.get(label)
        if node is None:
            node = self.fresh()
            self.bnodes[label] = node
        return node

    def _iri(self, tok: _Tok) -> Iri:
        if tok.kind == "IRIREF":
            return Iri(self._resolve(tok.value, tok.start))
        prefix, local = tok.extra  # type: ignore[misc]
        ns = self.prefixes.get(prefix)
        if ns is None:
            raise self.error(tok.start, f"undeclared prefix {prefix + ':'!r}", "PNAME_NS")
        if "\\" in local:
            local = RE_LOCAL_ESC.sub(r"\1", local)
        return Iri(ns + local)

    def predicate_object_list(self, subj: Term) -> None:
        self._verb_object_list(subj)
        while self.peek().kind == ";":
            while self.peek().kind == ";":
                self.next()
            if self.peek().kind in (".", "]", "EOF"):
                return
            self._verb_object_list(subj)

    def _verb_object_list(self, subj: Term) -> None:
        tok = self.next()
        if tok.kind == "WORD" and tok.value == "a":
            pred = Iri(str(RDF) + "type")
        elif tok.kind in ("IRIREF", "PNAME"):
            pred = self._iri(tok)
        else:
            raise self.error(tok.start, f"expected predicate, found {self._describe(tok)}", "predicate")
        self._add(subj, pred, self.object())
        while self.peek().kind == ",":
            self.next()
            self._add(subj, pred, self.object())
        nxt = self.peek()
        if nxt.kind not in (";", ".", "]", "EOF"):
            raise self.error(nxt.start, f"expected ',', ';' or '.', found {self._describe(nxt)}", "';' or '.'")

    def _add(self, s: Term, p: Iri, o: Term) -> None:
        self.triples.add(Triple(s, p, o))  # type: ignore[arg-type]

    def object(self) -> Term:
        tok = self.next()
        kind = tok.kind
        if kind in ("IRIREF", "PNAME"):
            return self._iri(tok)
        if kind == "BNODE":
            return self._labelled(tok.value)
        if kind == "ANON":
            return self.fresh()
        if kind == "[":
            return self._bnpl_body(tok)
        if kind == "(":
            return self.collection()
        if kind == "STRING":
            nxt = self.peek()
            if nxt.kind == "LANGTAG":
                self.next()
                return Literal(tok.value, Iri(RDF_LANGSTRING), nxt.value)
            if nxt.kind == "^^":
                self.next()
                dt_tok = self.next()
                if dt_tok.kind not in ("IRIREF", "PNAME"):
                    raise self.error(dt_tok.start, "expected datatype IRI after '^^'", "iri")
                return Literal(tok.value, self._iri(dt_tok))
            return Literal(tok.value, Iri(XSD_STRING))
        if kind == "INTEGER":
            return Literal(tok.value, Iri(str(XSD) + "integer"))
        if kind == "DECIMAL":
            return Literal(tok.value, Iri(str(XSD) + "decimal"))
        if kind == "DOUBLE":
            return Literal(tok.value, Iri(str(XSD) + "double"))
        if kind == "WORD" and tok.value in ("true", "false"):
            return Literal(tok.value, Iri(str(XSD) + "boolean"))
        raise self.error(tok.start, f"expected object, found {self._describe(tok)}", "object")

    def blank_node_property_list(self) -> BlankNode:
        tok = self.next()
        return self._bnpl_body(tok)

    def _bnpl_body(self, open_tok: _Tok) -> BlankNode:
        node = self.fresh()
        if self.peek().kind == "]":
            raise self.error(self.peek().start, "empty property list", "predicate")
        self.predicate_object_list(node)
        self.expect("]", "']'")
        return node

    def collection(self) -> Term:
        items: list[Term] = []
        while self.peek().kind != ")":
            if self.peek().kind == "EOF":
                raise self.error(self.peek().start, "unterminated collection", "')'")
            items.append(self.object())
        self.next()
        if not items:
            return RDF.nil
        nodes = [self.fresh() for _ in items]
        for i, (node, item) in enumerate(zip(nodes, items)):
            self._add(node, RDF.first, item)
            self._add(node, RDF.rest, nodes[i + 1] if i + 1 < len(nodes) else RDF.nil)
        return nodes[0]


def parse_turtle(text: str, base: Optional[str] = None) -> ParseResult:
    """Parse a Turtle document; raise :class:`ParseError` on the first error."""
    if text.startswith("\ufeff"):
        text = text[1:]
    return _TurtleParser(text, base).parse()


def decode_utf8(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError(f"invalid UTF-8 byte at offset {exc.start}", line, col) from None


def parse_turtle_bytes(data: bytes, base: Optional[str] = None) -> ParseResult:
    return parse_turtle(decode_utf8(data), base)


def parse_turtle_file(path: Union[str, Path], base: Optional[str] = None) -> ParseResult:
    """Parse a ``.ttl`` file; the default base is the file's ``file:`` IRI."""
    path = Path(path)
    if base is None:
        base = path.resolve().as_uri()
    return parse_turtle_bytes(path.read_bytes(), base)


# -- serialization ----------------------------------------------------------

_RE_SAFE_LOCAL = re.compile(f"[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?$")
_RE_SAFE_PREFIX = re.compile(f"(?:{PN_PREFIX})?$")
_NUMERIC = {
    str(XSD) + "integer": RE_INTEGER,
    str(XSD) + "decimal": RE_DECIMAL,
    str(XSD) + "double": RE_DOUBLE,
}


class _Writer:
    def __init__(self, prefixes: dict[str, str]) -> None:
        self.prefixes = {p: ns for p, ns in prefixes.items() if _RE_SAFE_PREFIX.match(p)}
        # longest namespace first so the most specific prefix wins
        self._ordered = sorted(self.prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    def iri(self, value: str) -> str:
        for prefix, ns in self._ordered:
            if value.startswith(ns):
                local = value[len(ns) :]
                if local == "" or _RE_SAFE_LOCAL.match(local):
                    return f"{prefix}:{local}"
        return "<" + _escape_iri(value) + ">"

    def term(self, t: Term) -> str:
        if isinstance(t, Iri):
            return self.iri(t.value)
        if isinstance(t, BlankNode):
            return "_:" + _safe_label(t.label)
        body = '"' + escape_string(t.lexical) + '"'
        if t.language is not None:
            return f"{body}@{t.language}"
        dt = t.datatype.value
        if dt == XSD_STRING:
            return body
        rx = _NUMERIC.get(dt)
        if rx is not None and rx.fullmatch(t.lexical):
            return t.lexical
        if dt == str(XSD) + "boolean" and t.lexical in ("true", "false"):
            return t.lexical
        return f"{body}^^{self.iri(dt)}"


def _escape_iri(value: str) -> str:
    out = []
    for ch in value:
        if ord(ch) <= 0x20 or ch in '<>"{}|^`\\':
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


_RE_LABEL_OK = re.compile(f"[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?$")


def _safe_label(label: str) -> str:
    if _RE_LABEL_OK.match(label):
        return label
    return "x" + "".join(c if re.match(f"[{_PN_CHARS}]", c) else f"_{ord(c):x}_" for c in label)


def serialize_turtle(g: Graph) -> str:
    """Deterministic Turtle: one predicate-object per line, subjects grouped
    with ``;``, everything sorted. Always ends with exactly one newline."""
    w = _Writer(g.prefixes)
    lines = [f"@prefix {p}: <{_escape_iri(ns)}> ." for p, ns in sorted(w.prefixes.items())]
    by_subject: dict[Term, list[Triple]] = {}
    for t in g:
        by_subject.setdefault(t.subject, []).append(t)
    if lines and by_subject:
        lines.append("")
    for subj in sorted(by_subject, key=term_sort_key):
        rows = sorted(
            ((w.iri(t.predicate.value), w.term(t.object)) for t in by_subject[subj]),
        )
        head = w.term(subj)
        for k, (p, o) in enumerate(rows):
            lead = head + " " if k == 0 else "    "
            tail = " ." if k == len(rows) - 1 else " ;"
            lines.append(f"{lead}{p} {o}{tail}")
    return "\n".join(lines) + "\n"
