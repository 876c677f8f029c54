"""EARL+PROV Turtle, Markdown and badge outputs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

from ..engine.outcomes import Assertion
from ..owl import Profile
from ..turtle import serialize_turtle
from .badges import emit_badges, is_valid_badge
from .context import ReportContext, Statistics, hosted_base_url, now_utc, statistics
from .earl import emit_earl, outcome_counts
from .markdown import dangling_anchors, emit_markdown, markdown_counts


@dataclass(frozen=True)
class WrittenReports:
    turtle: Path
    markdown: Path
    badges: tuple[Path, ...] = ()


def write_reports(
    assertions: Sequence[Assertion],
    ctx: ReportContext,
    profile_results: Optional[Mapping[Profile, bool]] = None,
    badges: bool = False,
) -> WrittenReports:
    """Write the Turtle and Markdown reports (and badges) under ``ctx.output_dir``."""
    ctx.output_dir.mkdir(parents=True, exist_ok=True)
    stats = statistics(assertions)
    ttl_path, md_path = ctx.report_paths
    ttl_path.write_text(serialize_turtle(emit_earl(assertions, ctx)), encoding="utf-8")
    md_path.write_text(emit_markdown(assertions, ctx, stats), encoding="utf-8")
    written = []
    if badges:
        bdir = ctx.output_dir / "badges"
        bdir.mkdir(exist_ok=True)
        for name, doc in emit_badges(stats, profile_results or {}):
            p = bdir / f"{name}.json"
            p.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
            written.append(p)
    return WrittenReports(ttl_path, md_path, tuple(written))


__all__ = [
    "ReportContext",
    "Statistics",
    "WrittenReports",
    "dangling_anchors",
    "emit_badges",
    "emit_earl",
    "emit_markdown",
    "hosted_base_url",
    "is_valid_badge",
    "markdown_counts",
    "now_utc",
    "outcome_counts",
    "statistics",
    "write_reports",
]
