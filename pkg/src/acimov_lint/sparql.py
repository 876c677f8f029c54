"""Syntax checker for SPARQL 1.1 queries (competency-question files).

Queries are parsed against the SPARQL 1.1 query grammar but never
evaluated. The parse collects the query form, the declared prefixes and
every IRI mentioned in the query body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .errors import LineIndex, ParseError
from .rdf.iri import resolve_iri
from .turtle import PN_LOCAL, PN_PREFIX, _PN_CHARS_U, decode_utf8

QUERY_FORMS = ("SELECT", "ASK", "CONSTRUCT", "DESCRIBE")
ALLOWED_FORMS = frozenset({"SELECT", "ASK"})
UPDATE_KEYWORDS = frozenset({"INSERT", "DELETE", "LOAD", "CLEAR", "CREATE", "DROP", "COPY", "MOVE", "ADD", "WITH"})

_VARNAME = f"[{_PN_CHARS_U}0-9][{_PN_CHARS_U}0-9\u00b7\u0300-\u036f\u203f-\u2040]*"
_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_ECHAR = r"\\[tbnrf\"'\\]"

_RE_WS = re.compile(r"(?:[ \t\r\n]|#[^\r\n]*)*")
_RE_IRIREF = re.compile(r'<([^<>"{}|^`\\\x00-\x20]*)>')
# Hierarchical IRIs containing characters the grammar forbids; accepted so
# that the URI-validity check can report them.
_RE_LOOSE_IRI = re.compile(r"<([A-Za-z][A-Za-z0-9+.\-]*://[^<>\n\r]*)>")
_RE_VAR = re.compile(f"[?$]({_VARNAME})")
_RE_PNAME = re.compile(f"({PN_PREFIX})?:({PN_LOCAL})?")
_RE_BNODE = re.compile(f"_:((?:[{_PN_CHARS_U}0-9])(?:[{_PN_CHARS_U}\\-0-9\u00b7\u0300-\u036f\u203f-\u2040.]*[{_PN_CHARS_U}\\-0-9\u00b7\u0300-\u036f\u203f-\u2040])?)")
_RE_LANGTAG = re.compile(r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")
_RE_NUMBER = re.compile(r"[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+|[0-9]*\.[0-9]+|[0-9]+")
_RE_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RE_NIL = re.compile(r"\([ \t\r\n]*\)")
_RE_ANON = re.compile(r"\[[ \t\r\n]*\]")
_STRINGS = [
    re.compile(r'"""(?:(?:"|"")?(?:[^"\\]|' + _ECHAR + "|" + _UCHAR + r'))*"""'),
    re.compile(r"'''(?:(?:'|'')?(?:[^'\\]|" + _ECHAR + "|" + _UCHAR + r"))*'''"),
    re.compile(r'"(?:[^"\\\n\r]|' + _ECHAR + "|" + _UCHAR + r')*"'),
    re.compile(r"'(?:[^'\\\n\r]|" + _ECHAR + "|" + _UCHAR + r")*'"),
]
_PUNCT2 = ("||", "&&", "!=", "<=", ">=", "^^")
_PUNCT1 = "{}()[].,;*+-/?!^|=<>"

_BUILTIN_ARITY: dict[str, tuple[int, int]] = {
    **{k: (1, 1) for k in (
        "STR LANG DATATYPE IRI URI ABS CEIL FLOOR ROUND STRLEN UCASE LCASE ENCODE_FOR_URI "
        "YEAR MONTH DAY HOURS MINUTES SECONDS TIMEZONE TZ MD5 SHA1 SHA256 SHA384 SHA512 "
        "ISIRI ISURI ISBLANK ISLITERAL ISNUMERIC"
    ).split()},
    **{k: (2, 2) for k in "LANGMATCHES CONTAINS STRSTARTS STRENDS STRBEFORE STRAFTER STRLANG STRDT SAMETERM".split()},
    **{k: (0, 0) for k in "RAND NOW UUID STRUUID".split()},
    "IF": (3, 3),
    "SUBSTR": (2, 3),
    "REGEX": (2, 3),
    "REPLACE": (3, 4),
    "BNODE": (0, 1),
}
_VARIADIC = frozenset({"CONCAT", "COALESCE"})
_AGGREGATES = frozenset({"COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"})


@dataclass
class QueryInfo:
    form: str
    prefixes: dict[str, str] = field(default_factory=dict)
    iris: set[str] = field(default_factory=set)
    source_path: Optional[str] = None
    base: Optional[str] = None
    services: list[str] = field(default_factory=list)


@dataclass
class _Tok:
    kind: str
    text: str
    start: int
    end: int


class _QueryParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.lines = LineIndex(text)
        self.pos = 0
        self.buf: list[_Tok] = []
        self.prefixes: dict[str, str] = {}
        self.base: Optional[str] = None
        self.iris: set[str] = set()
        self.services: list[str] = []

    # -- lexing ---------------------------------------------------------------

    def error(self, tok_or_offset: Union[_Tok, int], message: str, expected: Optional[str] = None) -> ParseError:
        off = tok_or_offset.start if isinstance(tok_or_offset, _Tok) else tok_or_offset
        return self.lines.error(off, message, expected)

    def _lex(self) -> _Tok:
        text = self.text
        i = _RE_WS.match(text, self.pos).end()
        if i >= len(text):
            self.pos = i
            return _Tok("EOF", "", i, i)
        ch = text[i]
        m = None
        kind = ""
        if ch == "<":
            m = _RE_IRIREF.match(text, i)
            kind = "IRI"
            if not m:
                m = _RE_LOOSE_IRI.match(text, i)
                kind = "LOOSEIRI"
        elif ch in "?$":
            m = _RE_VAR.match(text, i)
            kind = "VAR"
        elif ch in "\"'":
            for rx in _STRINGS:
                m = rx.match(text, i)
                if m:
                    break
            if not m:
                raise self.error(i, "unterminated or malformed string literal", "String")
            kind = "STRING"
        elif text.startswith("_:", i):
            m = _RE_BNODE.match(text, i)
            if not m:
                raise self.error(i, "invalid blank node label", "BLANK_NODE_LABEL")
            kind = "BNODE"
        elif ch == "@":
            m = _RE_LANGTAG.match(text, i)
            if not m:
                raise self.error(i, "invalid language tag", "LANGTAG")
            kind = "LANGTAG"
        elif ch == "(":
            m = _RE_NIL.match(text, i)
            kind = "NIL"
        elif ch == "[":
            m = _RE_ANON.match(text, i)
            kind = "ANON"
        elif ch.isdigit() or (ch == "." and text[i + 1 : i + 2].isdigit()):
            m = _RE_NUMBER.match(text, i)
            kind = "NUMBER"
        if m:
            self.pos = m.end()
            return _Tok(kind, m.group(0), i, m.end())
        two = text[i : i + 2]
        if two in _PUNCT2:
            self.pos = i + 2
            return _Tok(two, two, i, i + 2)
        if ch in _PUNCT1:
            self.pos = i + 1
            return _Tok(ch, ch, i, i + 1)
        m = _RE_PNAME.match(text, i)
        if m:
            self.pos = m.end()
            return _Tok("PNAME", m.group(0), i, m.end())
        m = _RE_WORD.match(text, i)
        if m:
            self.pos = m.end()
            return _Tok("WORD", m.group(0), i, m.end())
        raise self.error(i, f"unexpected character {ch!r}")

    def peek(self, k: int = 0) -> _Tok:
        while len(self.buf) <= k:
            self.buf.append(self._lex())
        return self.buf[k]

    def next(self) -> _Tok:
        tok = self.peek()
        self.buf.pop(0)
        return tok

    def kw(self, k: int = 0) -> str:
        tok = self.peek(k)
        return tok.text.upper() if tok.kind == "WORD" else ""

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def accept(self, kind: str) -> bool:
        if self.peek().kind == kind:
            self.next()
            return True
        return False

    def accept_kw(self, word: str) -> bool:
        if self.kw() == word:
            self.next()
            return True
        return False

    def expect(self, kind: str, what: Optional[str] = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            raise self.unexpected(what or repr(kind))
        return self.next()

    def expect_kw(self, word: str) -> None:
        if not self.accept_kw(word):
            raise self.unexpected(word)

    def unexpected(self, expected: str) -> ParseError:
        tok = self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return self.error(tok, f"expected {expected}, found {found}", expected)

    # -- terms ----------------------------------------------------------------

    def iri(self) -> str:
        tok = self.next()
        if tok.kind == "IRI" or tok.kind == "LOOSEIRI":
            ref = tok.text[1:-1]
            if tok.kind == "IRI" and "\\" not in ref:
                value = resolve_iri(ref, self.base) if self.base and not re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", ref) else ref
            else:
                value = ref
            self.iris.add(value)
            return value
        if tok.kind == "PNAME":
            prefix, _, local = tok.text.partition(":")
            ns = self.prefixes.get(prefix)
            if ns is None:
                raise self.error(tok, f"undeclared prefix {prefix + ':'!r}", "PNAME_NS")
            value = ns + re.sub(r"\\(.)", r"\1", local)
            self.iris.add(value)
            return value
        raise self.error(tok, f"expected IRI, found {tok.text!r}", "iri")

    def at_iri(self, k: int = 0) -> bool:
        return self.peek(k).kind in ("IRI", "LOOSEIRI", "PNAME")

    def var(self) -> None:
        self.expect("VAR", "variable")

    def rdf_literal(self) -> None:
        self.expect("STRING", "string")
        if self.at("LANGTAG"):
            self.next()
        elif self.accept("^^"):
            self.iri()

    def at_literal(self) -> bool:
        tok = self.peek()
        if tok.kind in ("STRING", "NUMBER"):
            return True
        if tok.kind in ("+", "-") and self.peek(1).kind == "NUMBER":
            return True
        return self.kw() in ("TRUE", "FALSE")

    def literal(self) -> None:
        tok = self.peek()
        if tok.kind == "STRING":
            self.rdf_literal()
        elif tok.kind in ("+", "-"):
            self.next()
            self.expect("NUMBER", "number")
        elif tok.kind == "NUMBER":
            self.next()
        elif self.kw() in ("TRUE", "FALSE"):
            self.next()
        else:
            raise self.unexpected("literal")

    def at_var_or_term(self) -> bool:
        tok = self.peek()
        return tok.kind in ("VAR", "BNODE", "ANON", "NIL") or self.at_iri() or self.at_literal()

    def var_or_term(self) -> None:
        tok = self.peek()
        if tok.kind in ("VAR", "BNODE", "ANON", "NIL"):
            self.next()
        elif self.at_iri():
            self.iri()
        elif self.at_literal():
            self.literal()
        else:
            raise self.unexpected("variable or RDF term")

    def var_or_iri(self) -> None:
        if self.at("VAR"):
            self.next()
        else:
            self.iri()

    # -- query ----------------------------------------------------------------

    def parse(self) -> QueryInfo:
        self.prologue()
        word = self.kw()
        if word in UPDATE_KEYWORDS:
            raise self.error(self.peek(), "SPARQL Update is not allowed in a competency question; use SELECT or ASK", "query form")
        if word == "SELECT":
            self.select_query()
        elif word == "CONSTRUCT":
            self.construct_query()
        elif word == "DESCRIBE":
            self.describe_query()
        elif word == "ASK":
            self.ask_query()
        else:
            raise self.unexpected("SELECT, CONSTRUCT, DESCRIBE or ASK")
        self.values_clause()
        if not self.at("EOF"):
            raise self.unexpected("end of query")
        return QueryInfo(form=word, prefixes=dict(self.prefixes), iris=set(self.iris), base=self.base, services=list(self.services))

    def prologue(self) -> None:
        while True:
            if self.accept_kw("BASE"):
                tok = self.expect("IRI", "IRI")
                ref = tok.text[1:-1]
                self.base = resolve_iri(ref, self.base) if self.base else ref
            elif self.accept_kw("PREFIX"):
                tok = self.peek()
                if tok.kind != "PNAME" or tok.text.count(":") != 1 or not tok.text.endswith(":"):
                    raise self.unexpected("prefix name ending in ':'")
                self.next()
                iri_tok = self.expect("IRI", "IRI")
                ref = iri_tok.text[1:-1]
                self.prefixes[tok.text[:-1]] = resolve_iri(ref, self.base) if self.base else ref
            else:
                return

    def select_clause(self) -> None:
        self.expect_kw("SELECT")
        if not self.accept_kw("DISTINCT"):
            self.accept_kw("REDUCED")
        if self.accept("*"):
            return
        count = 0
        while True:
            if self.at("VAR"):
                self.next()
            elif self.at("("):
                self.next()
                self.expression()
                self.expect_kw("AS")
                self.var()
                self.expect(")", "')'")
            else:
                break
            count += 1
        if count == 0:
            raise self.unexpected("variable, '(' or '*'")

    def select_query(self) -> None:
        self.select_clause()
        self.dataset_clauses()
        self.where_clause()
        self.solution_modifier()

    def sub_select(self) -> None:
        self.select_clause()
        self.where_clause()
        self.solution_modifier()
        self.values_clause()

    def construct_query(self) -> None:
        self.expect_kw("CONSTRUCT")
        if self.at("{"):
            self.next()
            if not self.at("}"):
                self.triples_template()
            self.expect("}", "'}'")
            self.dataset_clauses()
            self.where_clause()
        else:
            self.dataset_clauses()
            self.expect_kw("WHERE")
            self.expect("{", "'{'")
            if not self.at("}"):
                self.triples_template()
            self.expect("}", "'}'")
        self.solution_modifier()

    def describe_query(self) -> None:
        self.expect_kw("DESCRIBE")
        if not self.accept("*"):
            n = 0
            while self.at("VAR") or self.at_iri():
                self.var_or_iri()
                n += 1
            if n == 0:
                raise self.unexpected("variable, IRI or '*'")
        self.dataset_clauses()
        if self.kw() == "WHERE" or self.at("{"):
            self.where_clause()
        self.solution_modifier()

    def ask_query(self) -> None:
        self.expect_kw("ASK")
        self.dataset_clauses()
        self.where_clause()
        self.solution_modifier()

    def dataset_clauses(self) -> None:
        while self.accept_kw("FROM"):
            self.accept_kw("NAMED")
            self.iri()

    def where_clause(self) -> None:
        self.accept_kw("WHERE")
        self.group_graph_pattern()

    def solution_modifier(self) -> None:
        if self.kw() == "GROUP":
            self.next()
            self.expect_kw("BY")
            n = 0
            while self._at_group_condition():
                self._group_condition()
                n += 1
            if n == 0:
                raise self.unexpected("group condition")
        if self.accept_kw("HAVING"):
            self.constraint()
            while self._at_constraint():
                self.constraint()
        if self.kw() == "ORDER":
            self.next()
            self.expect_kw("BY")
            n = 0
            while True:
                if self.kw() in ("ASC", "DESC"):
                    self.next()
                    self.bracketted_expression()
                elif self.at("VAR"):
                    self.next()
                elif self._at_constraint():
                    self.constraint()
                else:
                    break
                n += 1
            if n == 0:
                raise self.unexpected("order condition")
        if self.accept_kw("LIMIT"):
            self._integer()
            if self.accept_kw("OFFSET"):
                self._integer()
        elif self.accept_kw("OFFSET"):
            self._integer()
            if self.accept_kw("LIMIT"):
                self._integer()

    def _integer(self) -> None:
        tok = self.expect("NUMBER", "integer")
        if not tok.text.isdigit():
            raise self.error(tok, "expected integer", "INTEGER")

    def _at_group_condition(self) -> bool:
        return self.at("VAR") or self.at("(") or self._at_builtin() or self.at_iri()

    def _group_condition(self) -> None:
        if self.at("VAR"):
            self.next()
        elif self.at("("):
            self.next()
            self.expression()
            if self.accept_kw("AS"):
                self.var()
            self.expect(")", "')'")
        elif self._at_builtin():
            self.builtin_call()
        else:
            self.function_call()

    def values_clause(self) -> None:
        if self.accept_kw("VALUES"):
            self.data_block()

    def data_block(self) -> None:
        if self.at("VAR"):
            self.next()
            self.expect("{", "'{'")
            while self._at_data_value():
                self._data_value()
            self.expect("}", "'}'")
            return
        width = 0
        if self.accept("NIL"):
            width = 0
        else:
            self.expect("(", "'(' or variable")
            while self.accept("VAR"):
                width += 1
            self.expect(")", "')'")
        self.expect("{", "'{'")
        while True:
            if self.at("NIL"):
                tok = self.next()
                if width != 0:
                    raise self.error(tok, f"VALUES row has 0 values, expected {width}")
            elif self.at("("):
                tok = self.next()
                n = 0
                while self._at_data_value():
                    self._data_value()
                    n += 1
                self.expect(")", "')'")
                if n != width:
                    raise self.error(tok, f"VALUES row has {n} values, expected {width}")
            else:
                break
        self.expect("}", "'}'")

    def _at_data_value(self) -> bool:
        return self.at_iri() or self.at_literal() or self.kw() == "UNDEF"

    def _data_value(self) -> None:
        if self.accept_kw("UNDEF"):
            return
        if self.at_iri():
            self.iri()
        else:
            self.literal()

    # -- graph patterns -----------------------------------------------------

    def group_graph_pattern(self) -> None:
        self.expect("{", "'{'")
        if self.kw() == "SELECT":
            self.sub_select()
        else:
            self.group_graph_pattern_sub()
        self.expect("}", "'}'")

    def group_graph_pattern_sub(self) -> None:
        if self._at_triples_start():
            self.triples_block()
        while True:
            if self._at_pattern_not_triples():
                self.graph_pattern_not_triples()
                self.accept(".")
                if self._at_triples_start():
                    self.triples_block()
            else:
                break

    def _at_triples_start(self) -> bool:
        return self.at_var_or_term() or self.at("[") or self.at("(")

    def _at_pattern_not_triples(self) -> bool:
        return self.at("{") or self.kw() in ("OPTIONAL", "MINUS", "GRAPH", "SERVICE", "FILTER", "BIND", "VALUES")

    def graph_pattern_not_triples(self) -> None:
        word = self.kw()
        if self.at("{"):
            self.group_graph_pattern()
            while self.accept_kw("UNION"):
                self.group_graph_pattern()
        elif word in ("OPTIONAL", "MINUS"):
            self.next()
            self.group_graph_pattern()
        elif word == "GRAPH":
            self.next()
            self.var_or_iri()
            self.group_graph_pattern()
        elif word == "SERVICE":
            tok = self.next()
            self.accept_kw("SILENT")
            line, _ = self.lines.position(tok.start)
            target = self.peek().text
            self.var_or_iri()
            self.services.append(f"line {line}: SERVICE {target}")
            self.group_graph_pattern()
        elif word == "FILTER":
            self.next()
            self.constraint()
        elif word == "BIND":
            self.next()
            self.expect("(", "'('")
            self.expression()
            self.expect_kw("AS")
            self.var()
            self.expect(")", "')'")
        elif word == "VALUES":
            self.next()
            self.data_block()

    def triples_block(self) -> None:
        self.triples_same_subject(path=True)
        while self.accept("."):
            if self._at_triples_start():
                self.triples_same_subject(path=True)
            else:
                break

    def triples_template(self) -> None:
        self.triples_same_subject(path=False)
        while self.accept("."):
            if self._at_triples_start():
                self.triples_same_subject(path=False)
            else:
                break

    def triples_same_subject(self, path: bool) -> None:
        if self.at("[") or self.at("("):
            self.triples_node(path)
            if self._at_verb(path):
                self.property_list_not_empty(path)
        else:
            self.var_or_term()
            self.property_list_not_empty(path)

    def _at_verb(self, path: bool) -> bool:
        tok = self.peek()
        if tok.kind == "VAR" or self.at_iri() or (tok.kind == "WORD" and tok.text == "a"):
            return True
        return path and tok.kind in ("^", "(", "!")

    def property_list_not_empty(self, path: bool) -> None:
        self._verb(path)
        self.object_list(path)
        while self.accept(";"):
            if self._at_verb(path):
                self._verb(path)
                self.object_list(path)

    def _verb(self, path: bool) -> None:
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
        elif tok.kind == "WORD" and tok.text == "a" and not path:
            self.next()
        elif path:
            self.path_alternative()
        elif self.at_iri():
            self.iri()
        else:
            raise self.unexpected("predicate")

    def object_list(self, path: bool) -> None:
        self.graph_node(path)
        while self.accept(","):
            self.graph_node(path)

    def graph_node(self, path: bool) -> None:
        if self.at("[") or self.at("("):
            self.triples_node(path)
        else:
            self.var_or_term()

    def triples_node(self, path: bool) -> None:
        if self.accept("["):
            self.property_list_not_empty(path)
            self.expect("]", "']'")
        else:
            self.expect("(", "'('")
            self.graph_node(path)
            while not self.at(")"):
                if self.at("EOF"):
                    raise self.unexpected("')'")
                self.graph_node(path)
            self.next()

    def path_alternative(self) -> None:
        self.path_sequence()
        while self.accept("|"):
            self.path_sequence()

    def path_sequence(self) -> None:
        self._path_elt_or_inverse()
        while self.accept("/"):
            self._path_elt_or_inverse()

    def _path_elt_or_inverse(self) -> None:
        self.accept("^")
        self._path_primary()
        if self.peek().kind in ("?", "*", "+"):
            self.next()

    def _path_primary(self) -> None:
        tok = self.peek()
        if tok.kind == "WORD" and tok.text == "a":
            self.next()
        elif self.at_iri():
            self.iri()
        elif tok.kind == "!":
            self.next()
            if self.accept("("):
                if not self.at(")"):
                    self._path_one_in_set()
                    while self.accept("|"):
                        self._path_one_in_set()
                self.expect(")", "')'")
            elif self.at("NIL"):
                self.next()
            else:
                self._path_one_in_set()
        elif tok.kind == "(":
            self.next()
            self.path_alternative()
            self.expect(")", "')'")
        else:
            raise self.unexpected("property path")

    def _path_one_in_set(self) -> None:
        self.accept("^")
        tok = self.peek()
        if tok.kind == "WORD" and tok.text == "a":
            self.next()
        else:
            self.iri()

    # -- expressions --------------------------------------------------------

    def _at_constraint(self) -> bool:
        return self.at("(") or self._at_builtin() or self.at_iri()

    def constraint(self) -> None:
        if self.at("("):
            self.bracketted_expression()
        elif self._at_builtin():
            self.builtin_call()
        elif self.at_iri():
            self.function_call()
        else:
            raise self.unexpected("constraint")

    def function_call(self) -> None:
        self.iri()
        self.arg_list()

    def arg_list(self) -> None:
        if self.accept("NIL"):
            return
        self.expect("(", "'('")
        self.accept_kw("DISTINCT")
        self.expression()
        while self.accept(","):
            self.expression()
        self.expect(")", "')'")

    def expression_list(self) -> int:
        if self.accept("NIL"):
            return 0
        self.expect("(", "'('")
        self.expression()
        n = 1
        while self.accept(","):
            self.expression()
            n += 1
        self.expect(")", "')'")
        return n

    def bracketted_expression(self) -> None:
        self.expect("(", "'('")
        self.expression()
        self.expect(")", "')'")

    def expression(self) -> None:
        self._and_expr()
        while self.accept("||"):
            self._and_expr()

    def _and_expr(self) -> None:
        self._relational()
        while self.accept("&&"):
            self._relational()

    def _relational(self) -> None:
        self._additive()
        tok = self.peek()
        if tok.kind in ("=", "!=", "<", ">", "<=", ">="):
            self.next()
            self._additive()
        elif self.kw() == "IN":
            self.next()
            self.expression_list()
        elif self.kw() == "NOT" and self.kw(1) == "IN":
            self.next()
            self.next()
            self.expression_list()

    def _additive(self) -> None:
        self._multiplicative()
        while self.peek().kind in ("+", "-"):
            self.next()
            self._multiplicative()

    def _multiplicative(self) -> None:
        self._unary()
        while self.peek().kind in ("*", "/"):
            self.next()
            self._unary()

    def _unary(self) -> None:
        if self.peek().kind in ("!", "+", "-"):
            self.next()
        self._primary()

    def _primary(self) -> None:
        tok = self.peek()
        if tok.kind == "(":
            self.bracketted_expression()
        elif tok.kind == "VAR":
            self.next()
        elif self._at_builtin():
            self.builtin_call()
        elif self.at_iri():
            self.iri()
            if self.at("(") or self.at("NIL"):
                self.arg_list()
        elif tok.kind in ("STRING", "NUMBER") or self.kw() in ("TRUE", "FALSE"):
            self.literal()
        else:
            raise self.unexpected("expression")

    def _at_builtin(self) -> bool:
        word = self.kw()
        if not word:
            return False
        if word in ("EXISTS", "BOUND"):
            return True
        if word == "NOT":
            return self.kw(1) == "EXISTS"
        return word in _BUILTIN_ARITY or word in _VARIADIC or word in _AGGREGATES

    def builtin_call(self) -> None:
        tok = self.next()
        word = tok.text.upper()
        if word == "NOT":
            self.expect_kw("EXISTS")
            self.group_graph_pattern()
        elif word == "EXISTS":
            self.group_graph_pattern()
        elif word == "BOUND":
            self.expect("(", "'('")
            self.var()
            self.expect(")", "')'")
        elif word in _AGGREGATES:
            self._aggregate(word)
        elif word in _VARIADIC:
            self.expression_list()
        else:
            lo, hi = _BUILTIN_ARITY[word]
            if self.at("NIL"):
                self.next()
                n = 0
            else:
                self.expect("(", "'('")
                self.expression()
                n = 1
                while self.accept(","):
                    self.expression()
                    n += 1
                self.expect(")", "')'")
            if not lo <= n <= hi:
                want = str(lo) if lo == hi else f"{lo} to {hi}"
                raise self.error(tok, f"{word} takes {want} argument(s), got {n}")

    def _aggregate(self, word: str) -> None:
        self.expect("(", "'('")
        self.accept_kw("DISTINCT")
        if word == "COUNT" and self.accept("*"):
            self.expect(")", "')'")
            return
        self.expression()
        if word == "GROUP_CONCAT" and self.accept(";"):
            self.expect_kw("SEPARATOR")
            self.expect("=", "'='")
            self.expect("STRING", "string")
        self.expect(")", "')'")


def parse_query(text: str, source_path: Optional[str] = None) -> QueryInfo:
    """Check ``text`` against the SPARQL 1.1 query grammar.

    Raises :class:`ParseError` at the first token that cannot be accepted,
    including uses of undeclared prefixes and SPARQL Update operations.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    info = _QueryParser(text).parse()
    info.source_path = source_path
    return info


def parse_query_file(path: Union[str, Path]) -> QueryInfo:
    return parse_query(decode_utf8(Path(path).read_bytes()), str(path))


def query_form_violation(info: QueryInfo) -> Optional[str]:
    """The offending form when it is neither SELECT nor ASK, else None."""
    return None if info.form in ALLOWED_FORMS else info.form
