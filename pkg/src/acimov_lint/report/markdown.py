"""GitHub-flavoured Markdown rendering of a test run."""

from __future__ import annotations

import re
from typing import Sequence

from ..engine.outcomes import REPORT_ORDER, Assertion, OutcomeType, Pointer
from .context import ReportContext, Statistics, statistics

BAR_CAP = 40

MEANING = {
    OutcomeType.MAJOR_FAIL: "blocking error, the ontology should not be deployed",
    OutcomeType.MINOR_FAIL: "non-blocking error worth fixing",
    OutcomeType.CANNOT_TELL: "needs a human to decide",
    OutcomeType.NOT_TESTED: "not run because a prerequisite failed",
    OutcomeType.PASS: "the subject meets the criterion",
}


class Slugger:
    """GitHub heading anchors, including the ``-1``, ``-2`` suffixes for repeats."""

    def __init__(self) -> None:
        self.seen: dict[str, int] = {}

    @staticmethod
    def base(text: str) -> str:
        text = re.sub(r"[^\w\- ]", "", text.strip().lower())
        return text.replace(" ", "-")

    def slug(self, text: str) -> str:
        b = self.base(text)
        n = self.seen.get(b, 0)
        self.seen[b] = n + 1
        return b if n == 0 else f"{b}-{n}"


def bar(n: int) -> str:
    if n <= BAR_CAP:
        return "█" * n
    return "█" * BAR_CAP + f" +{n - BAR_CAP}"


def _cell(s: str) -> str:
    return s.replace("\\", "\\\\").replace("|", "\\|").replace("\n", " ")


def _code(s: str) -> str:
    s = s.replace("\n", " ")
    fence = "``" if "`" in s else "`"
    pad = " " if fence == "``" else ""
    return f"{fence}{pad}{s}{pad}{fence}".replace("|", "\\|")


def _pointer(p: Pointer) -> str:
    if p.kind == "uri" and re.match(r"[A-Za-z][A-Za-z0-9+.-]*:\S+$", p.value):
        return f"<{p.value}>"
    if p.kind in ("uri", "snippet"):
        return _code(p.value)
    return _cell(p.value)


def emit_markdown(assertions: Sequence[Assertion], ctx: ReportContext, stats: Statistics | None = None) -> str:
    stats = stats or statistics(assertions)
    slugs = Slugger()
    ttl_path, _ = ctx.report_paths
    lines: list[str] = []
    w = lines.append

    w(f"# {ctx.suite_name} test report")
    slugs.slug(f"{ctx.suite_name} test report")
    w("")
    w("## About this report")
    slugs.slug("About this report")
    w("")
    w(
        f"This document is rendered from the Turtle report [`{ttl_path.name}`]({ttl_path.name}), "
        "which records the run with the EARL and PROV vocabularies. "
        "Every outcome below is one outcome node of that graph. "
        "Each section starts with a summary table; the detail link of a row leads to the subject, "
        "criterion and outcome tables, and every detail block links back to its summary."
    )
    w("")

    w("## Assertor")
    slugs.slug("Assertor")
    w("")
    w("| Field | Value |")
    w("| --- | --- |")
    w(f"| Developer | {_cell(ctx.developer)} |")
    w(f"| Trigger | {ctx.trigger} |")
    w(f"| Test suite | {_cell(ctx.test_suite.host_url)} at `{ctx.test_suite.version}` |")
    w(f"| Project | {_cell(ctx.project.host_url)} |")
    w(f"| Project version | `{ctx.project.version}` |")
    if ctx.project.derived_from_commit:
        w(f"| Uncommitted changes on top of | `{ctx.project.derived_from_commit}` |")
    w(f"| Timestamp | {ctx.iso_timestamp} |")
    w("")

    w("## Statistics")
    slugs.slug("Statistics")
    w("")
    w(f"Total outcomes: **{stats.total}**")
    w("")
    w("| Outcome | Count | Chart | Meaning |")
    w("| --- | ---: | --- | --- |")
    for t in REPORT_ORDER:
        n = stats.per_type.get(t, 0)
        w(f"| {t.value} | {n} | {bar(n)} | {MEANING[t]} |")
    w("")

    for t in REPORT_ORDER:
        rows = [(a, o) for a in assertions for o in a.outcomes if o.type == t]
        if not rows:
            continue
        w(f"## {t.value}")
        slugs.slug(t.value)
        w("")
        summary_title = f"{t.value} summary"
        summary = slugs.slug(summary_title)
        # "<Type> <n>" headings are unique, so their slug needs no suffix
        titles = [f"{t.value} {i}" for i in range(1, len(rows) + 1)]
        detail_slugs = [Slugger.base(x) for x in titles]
        w(f"### {summary_title}")
        w("")
        w("| # | Subject | Criterion | Outcome | Details |")
        w("| ---: | --- | --- | --- | --- |")
        for i, ((a, o), anchor) in enumerate(zip(rows, detail_slugs), 1):
            w(f"| {i} | {_code(a.subject.id)} | {a.criterion.id} | {_cell(o.title)} | [details](#{anchor}) |")
        w("")
        for i, ((a, o), title) in enumerate(zip(rows, titles), 1):
            slugs.slug(title)
            w(f"#### {title}")
            w("")
            w(f"[Back to the {t.value} summary](#{summary})")
            w("")
            w("| Subject | |")
            w("| --- | --- |")
            w(f"| Id | {_code(a.subject.id)} |")
            w(f"| Kind | {a.subject.kind} |")
            files = ", ".join(f"[{_cell(f)}]({ctx.file_link(f)})" for f in a.subject.files)
            w(f"| Files | {files} |")
            w("")
            w("| Criterion | |")
            w("| --- | --- |")
            w(f"| Id | {a.criterion.id} |")
            w(f"| Title | {_cell(a.criterion.title)} |")
            w(f"| Description | {_cell(a.criterion.description)} |")
            w("")
            w("| Outcome | |")
            w("| --- | --- |")
            w(f"| Type | {o.type.value} |")
            w(f"| Title | {_cell(o.title)} |")
            w(f"| Description | {_cell(o.description)} |")
            ptrs = "<br>".join(_pointer(p) for p in o.pointers) or "none"
            w(f"| Pointers | {ptrs} |")
            w("")
    return "\n".join(lines).rstrip("\n") + "\n"


_RE_HEADING = re.compile(r"^(#{1,6})\s+(.*?)\s*$", re.M)
_RE_LINK = re.compile(r"\]\(#([^)\s]+)\)")


def heading_anchors(md: str) -> set[str]:
    s = Slugger()
    return {s.slug(m.group(2)) for m in _RE_HEADING.finditer(md)}


def dangling_anchors(md: str) -> list[str]:
    """Intra-document link targets with no matching heading."""
    anchors = heading_anchors(md)
    return sorted({m.group(1) for m in _RE_LINK.finditer(md)} - anchors)


def markdown_counts(md: str) -> dict[OutcomeType, int]:
    """Per-type counts as printed in the statistics table."""
    counts = {}
    for t in REPORT_ORDER:
        m = re.search(rf"^\| {t.value} \| (\d+) \|", md, re.M)
        counts[t] = int(m.group(1)) if m else 0
    return counts
