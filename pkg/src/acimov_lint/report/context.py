from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from ..engine.outcomes import REPORT_ORDER, Assertion, OutcomeType
from ..project import VersionDescriptor

TRIGGERS = ("manual", "pre-commit", "ci")
SUITE_NAME = "acimov-lint"


@dataclass(frozen=True)
class ReportContext:
    project: VersionDescriptor
    test_suite: VersionDescriptor
    developer: str
    trigger: str
    timestamp: datetime
    root: Path
    output_dir: Path
    vocab_namespace: str = "urn:acimov-lint:vocab#"
    suite_name: str = SUITE_NAME
    # repository-host prefix for file links, only used for ci runs
    file_base_url: Optional[str] = None

    def __post_init__(self) -> None:
        if self.trigger not in TRIGGERS:
            raise ValueError(f"trigger must be one of {TRIGGERS}, got {self.trigger!r}")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")

    @property
    def iso_timestamp(self) -> str:
        return self.timestamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

    def report_stem(self) -> str:
        dev = re.sub(r"[^A-Za-z0-9._-]+", "_", self.developer).strip("_") or "unknown"
        stamp = self.iso_timestamp.replace(":", "-")
        return f"{self.suite_name}-test-{self.trigger}-{dev}-{stamp}"

    @property
    def report_paths(self) -> tuple[Path, Path]:
        stem = self.report_stem()
        return self.output_dir / f"{stem}.ttl", self.output_dir / f"{stem}.md"

    def _hosted(self) -> bool:
        return self.trigger == "ci" and bool(self.file_base_url)

    def file_iri(self, rel: str) -> str:
        """IRI naming a repository file inside the EARL graph."""
        if self._hosted():
            return self.file_base_url.rstrip("/") + "/" + rel  # type: ignore[union-attr]
        return (self.root / rel).resolve().as_uri()

    def report_iri(self, path: Path) -> str:
        if self._hosted():
            try:
                rel = path.resolve().relative_to(self.root.resolve()).as_posix()
                return self.file_iri(rel)
            except ValueError:
                pass
        return path.resolve().as_uri()

    def file_link(self, rel: str) -> str:
        """Link target for a repository file from inside the Markdown report."""
        if self._hosted():
            return self.file_iri(rel)
        return Path(os.path.relpath(self.root / rel, self.output_dir)).as_posix()


def hosted_base_url(host_url: str, revision: str) -> Optional[str]:
    """``https://host/owner/repo/blob/<rev>`` for http(s) remotes, else None."""
    url = host_url.strip()
    m = re.match(r"git@([^:]+):(.+)$", url)
    if m:
        url = f"https://{m.group(1)}/{m.group(2)}"
    if not url.startswith(("http://", "https://")):
        return None
    url = re.sub(r"\.git$", "", url.rstrip("/"))
    url = re.sub(r"//[^/@]+@", "//", url)  # drop credentials
    return f"{url}/blob/{revision}"


@dataclass(frozen=True)
class Statistics:
    total: int
    per_type: dict = field(default_factory=dict)


def statistics(assertions: Iterable[Assertion]) -> Statistics:
    counts: Counter = Counter()
    for a in assertions:
        for o in a.outcomes:
            counts[o.type] += 1
    per_type = {t: counts.get(t, 0) for t in REPORT_ORDER}
    for t, n in counts.items():
        if t not in per_type:
            per_type[t] = n
    return Statistics(sum(per_type.values()), per_type)


def now_utc() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


__all__ = ["OutcomeType", "ReportContext", "Statistics", "TRIGGERS", "hosted_base_url", "now_utc", "statistics"]
