"""Absolute IRI validation (RFC 3986/3987 syntax) and reference resolution."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

# Characters the Turtle/SPARQL IRIREF production never allows unescaped.
IRIREF_FORBIDDEN = frozenset('<>"{}|^`\\')

_ALPHA = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_DIGIT = frozenset("0123456789")
_HEX = frozenset("0123456789abcdefABCDEF")
_UNRESERVED = _ALPHA | _DIGIT | frozenset("-._~")
_SUB_DELIMS = frozenset("!$&'()*+,;=")
_SCHEME_TAIL = _ALPHA | _DIGIT | frozenset("+-.")


@dataclass(frozen=True)
class IriViolation:
    index: int
    rule: str
    reason: str

    def __str__(self) -> str:
        return f"{self.reason} (rule {self.rule}, index {self.index})"


def _ucschar(cp: int) -> bool:
    if 0xA0 <= cp <= 0xD7FF or 0xF900 <= cp <= 0xFDCF or 0xFDF0 <= cp <= 0xFFEF:
        return True
    if 0x10000 <= cp <= 0xEFFFD:
        return (cp & 0xFFFF) <= 0xFFFD
    return False


def _iprivate(cp: int) -> bool:
    return 0xE000 <= cp <= 0xF8FF or 0xF0000 <= cp <= 0xFFFFD or 0x100000 <= cp <= 0x10FFFD


class _Scanner:
    def __init__(self, s: str) -> None:
        self.s = s

    def unreserved(self, ch: str) -> bool:
        return ch in _UNRESERVED or _ucschar(ord(ch))

    def component(self, start: int, end: int, rule: str, extra: str, private: bool = False) -> Optional[IriViolation]:
        """Check s[start:end] against *( iunreserved / pct-encoded / sub-delims / extra )."""
        s = self.s
        i = start
        while i < end:
            ch = s[i]
            if ch == "%":
                if i + 2 >= end or s[i + 1] not in _HEX or s[i + 2] not in _HEX:
                    return IriViolation(i, "pct-encoded", "'%' not followed by two hex digits")
                i += 3
                continue
            if self.unreserved(ch) or ch in _SUB_DELIMS or ch in extra:
                i += 1
                continue
            if private and _iprivate(ord(ch)):
                i += 1
                continue
            return IriViolation(i, rule, f"character {ch!r} not allowed in {rule}")
        return None


def _forbidden(s: str) -> Optional[IriViolation]:
    for i, ch in enumerate(s):
        if ch.isspace() or ord(ch) <= 0x20:
            return IriViolation(i, "IRIREF", "whitespace or control character")
        if ch in IRIREF_FORBIDDEN:
            return IriViolation(i, "IRIREF", f"forbidden character {ch!r}")
    return None


def validate_iri(s: str) -> Optional[IriViolation]:
    """Return None when ``s`` is a syntactically valid absolute IRI.

    Otherwise the violation names the first offending character index and
    the grammar rule that rejected it.
    """
    v = _forbidden(s)
    if v is not None:
        return v
    if not s or s[0] not in _ALPHA:
        return IriViolation(0, "scheme", "missing scheme (not an absolute IRI)")
    i = 1
    while i < len(s) and s[i] in _SCHEME_TAIL:
        i += 1
    if i >= len(s) or s[i] != ":":
        if i < len(s) and s[i] not in "/?#":
            return IriViolation(i, "scheme", f"character {s[i]!r} not allowed in scheme")
        return IriViolation(0, "scheme", "missing scheme (not an absolute IRI)")
    i += 1
    sc = _Scanner(s)
    n = len(s)
    frag = s.find("#", i)
    frag_end = n
    if frag < 0:
        frag = n
    q = s.find("?", i, frag)
    if q < 0:
        q = frag
    hier_end = q
    if s.startswith("//", i):
        auth_start = i + 2
        auth_end = auth_start
        while auth_end < hier_end and s[auth_end] != "/":
            auth_end += 1
        v = _authority(sc, auth_start, auth_end)
        if v is not None:
            return v
        path_start = auth_end
    else:
        path_start = i
    v = sc.component(path_start, hier_end, "ipath", ":@/")
    if v is not None:
        return v
    if q < frag:
        v = sc.component(q + 1, frag, "iquery", ":@/?", private=True)
        if v is not None:
            return v
    if frag < n:
        v = sc.component(frag + 1, frag_end, "ifragment", ":@/?")
        if v is not None:
            return v
    return None


_IPV4 = re.compile(r"^(25[0-5]|2[0-4]\d|1\d\d|[1-9]?\d)(\.(25[0-5]|2[0-4]\d|1\d\d|[1-9]?\d)){3}$")


def _authority(sc: _Scanner, start: int, end: int) -> Optional[IriViolation]:
    s = sc.s
    at = s.rfind("@", start, end)
    host_start = start
    if at >= 0:
        v = sc.component(start, at, "iuserinfo", ":")
        if v is not None:
            return v
        host_start = at + 1
    if host_start < end and s[host_start] == "[":
        close = s.find("]", host_start, end)
        if close < 0:
            return IriViolation(host_start, "IP-literal", "unterminated IP literal")
        inner = s[host_start + 1 : close]
        if not re.fullmatch(r"[0-9A-Fa-f:.]+|v[0-9A-Fa-f]+\.[A-Za-z0-9\-._~!$&'()*+,;=:]+", inner):
            return IriViolation(host_start + 1, "IP-literal", "malformed IP literal")
        port_start = close + 1
        if port_start < end:
            if s[port_start] != ":":
                return IriViolation(port_start, "iauthority", "unexpected character after IP literal")
            return _port(s, port_start + 1, end)
        return None
    colon = s.find(":", host_start, end)
    host_end = end if colon < 0 else colon
    v = sc.component(host_start, host_end, "ihost", "")
    if v is not None:
        return v
    if colon >= 0:
        return _port(s, colon + 1, end)
    return None


def _port(s: str, start: int, end: int) -> Optional[IriViolation]:
    for i in range(start, end):
        if s[i] not in _DIGIT:
            return IriViolation(i, "port", f"character {s[i]!r} not allowed in port")
    return None


def is_absolute_iri(s: str) -> bool:
    return validate_iri(s) is None


# RFC 3986 appendix B.
_URI_RE = re.compile(r"^(?:([^:/?#]+):)?(?://([^/?#]*))?([^?#]*)(?:\?([^#]*))?(?:#(.*))?$", re.S)


def _split(ref: str):
    m = _URI_RE.match(ref)
    assert m is not None
    return m.group(1), m.group(2), m.group(3), m.group(4), m.group(5)


def remove_dot_segments(path: str) -> str:
    out: list[str] = []
    inp = path
    while inp:
        if inp.startswith("../"):
            inp = inp[3:]
        elif inp.startswith("./"):
            inp = inp[2:]
        elif inp.startswith("/./"):
            inp = inp[2:]
        elif inp == "/.":
            inp = "/"
        elif inp.startswith("/../"):
            inp = inp[3:]
            if out:
                out.pop()
        elif inp == "/..":
            inp = "/"
            if out:
                out.pop()
        elif inp in (".", ".."):
            inp = ""
        else:
            start = 1 if inp.startswith("/") else 0
            nxt = inp.find("/", start)
            if nxt < 0:
                nxt = len(inp)
            out.append(inp[:nxt])
            inp = inp[nxt:]
    return "".join(out)


def resolve_iri(ref: str, base: Optional[str]) -> str:
    """Resolve ``ref`` against ``base`` (strict RFC 3986 section 5.2)."""
    if base is None:
        return ref
    r_scheme, r_auth, r_path, r_query, r_frag = _split(ref)
    b_scheme, b_auth, b_path, b_query, _ = _split(base)
    if r_scheme is not None:
        t_scheme, t_auth, t_path, t_query = r_scheme, r_auth, remove_dot_segments(r_path), r_query
    else:
        t_scheme = b_scheme
        if r_auth is not None:
            t_auth, t_path, t_query = r_auth, remove_dot_segments(r_path), r_query
        else:
            t_auth = b_auth
            if r_path == "":
                t_path = b_path
                t_query = r_query if r_query is not None else b_query
            else:
                if r_path.startswith("/"):
                    t_path = remove_dot_segments(r_path)
                else:
                    if b_auth is not None and b_path == "":
                        merged = "/" + r_path
                    else:
                        cut = b_path.rfind("/")
                        merged = b_path[: cut + 1] + r_path
                    t_path = remove_dot_segments(merged)
                t_query = r_query
    out = []
    if t_scheme is not None:
        out.append(t_scheme + ":")
    if t_auth is not None:
        out.append("//" + t_auth)
    out.append(t_path)
    if t_query is not None:
        out.append("?" + t_query)
    if r_frag is not None:
        out.append("#" + r_frag)
    return "".join(out)
