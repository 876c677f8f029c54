"""Shared checks for emitted reports."""

from __future__ import annotations

import json
import re
from collections import Counter
from pathlib import Path

from acimov_lint.engine import OutcomeType
from acimov_lint.rdf.namespaces import EARL, RDF
from acimov_lint.report import dangling_anchors, is_valid_badge, markdown_counts, outcome_counts
from acimov_lint.turtle import parse_turtle, serialize_turtle

from .isomorphism import isomorphic

VOCAB = "urn:acimov-lint:vocab#"

# 2026-10-15T09:30:00Z and its file-name form 2026-10-15T09-30-00Z
_STAMP = re.compile(r"\d{4}-\d{2}-\d{2}T\d{2}[:-]\d{2}[:-]\d{2}Z")


def mask_timestamps(text: str) -> str:
    return _STAMP.sub("<TIMESTAMP>", text)


def report_files(out_dir: Path) -> tuple[list[Path], list[Path]]:
    return sorted(out_dir.glob("*.ttl")), sorted(out_dir.glob("*.md"))


def coherence_problems(ttl: Path, md: Path, vocab: str = VOCAB) -> list[str]:
    """Everything wrong with one Turtle/Markdown report pair; empty when coherent."""
    problems = []
    text = ttl.read_text(encoding="utf-8")
    g = parse_turtle(text).graph
    if not isomorphic(g, parse_turtle(serialize_turtle(g)).graph):
        problems.append("earl does not round-trip")
    earl = {t: n for t, n in outcome_counts(g, vocab).items() if t != OutcomeType.FAIL}
    markdown = md.read_text(encoding="utf-8")
    mdc = markdown_counts(markdown)
    for t, n in mdc.items():
        if earl.get(t, 0) != n:
            problems.append(f"{t.value}: markdown {n} != earl {earl.get(t, 0)}")
    if sum(earl.values()) != len(list(g.match(None, EARL.outcome, None))):
        problems.append("outcome nodes with an unknown class")
    dangling = dangling_anchors(markdown)
    if dangling:
        problems.append(f"dangling anchors {dangling}")
    return problems


def assertion_count(ttl: Path) -> int:
    g = parse_turtle(ttl.read_text(encoding="utf-8")).graph
    return len(g.subjects(RDF.type, EARL.Assertion))


def badge_problems(out_dir: Path) -> list[str]:
    problems = []
    for p in sorted((out_dir / "badges").glob("*.json")):
        if not is_valid_badge(json.loads(p.read_text(encoding="utf-8"))):
            problems.append(p.name)
    return problems


def major_fails_in(ttl: Path, vocab: str = VOCAB) -> int:
    g = parse_turtle(ttl.read_text(encoding="utf-8")).graph
    return outcome_counts(g, vocab)[OutcomeType.MAJOR_FAIL]


def markdown_pairs(md: Path) -> Counter:
    """(subject, criterion) pairs listed in the summary tables."""
    rows = re.findall(r"^\| \d+ \| `([^`]+)` \| ([^|]+?) \|", md.read_text(encoding="utf-8"), re.M)
    return Counter(rows)
