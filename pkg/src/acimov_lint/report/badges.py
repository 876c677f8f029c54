"""Shields.io endpoint badge documents."""

from __future__ import annotations

from typing import Mapping

from ..engine.outcomes import REPORT_ORDER, OutcomeType
from ..owl import Profile
from .context import Statistics

BADGE_KEYS = ("schemaVersion", "label", "message", "color")

_NONZERO_COLOR = {
    OutcomeType.MAJOR_FAIL: "red",
    OutcomeType.MINOR_FAIL: "orange",
    OutcomeType.CANNOT_TELL: "yellow",
    OutcomeType.NOT_TESTED: "grey",
    OutcomeType.PASS: "green",
}


def _doc(label: str, message: str, color: str) -> dict:
    return {"schemaVersion": 1, "label": label, "message": message, "color": color}


def emit_badges(stats: Statistics, profile_results: Mapping[Profile, bool]) -> list[tuple[str, dict]]:
    out = []
    for t in REPORT_ORDER:
        n = stats.per_type.get(t, 0)
        out.append((f"outcome-{t.value}", _doc(t.value, str(n), _NONZERO_COLOR[t] if n else "green")))
    for p in Profile:
        if p in profile_results:
            ok = profile_results[p]
            doc = _doc(f"OWL 2 {p.value}", "compatible" if ok else "incompatible", "green" if ok else "red")
        else:
            doc = _doc(f"OWL 2 {p.value}", "unknown", "grey")
        out.append((f"profile-{p.value}", doc))
    return out


def is_valid_badge(doc: object) -> bool:
    """Shape check against the endpoint schema."""
    if not isinstance(doc, dict) or doc.get("schemaVersion") != 1:
        return False
    return all(isinstance(doc.get(k), str) and doc[k] for k in ("label", "message", "color"))
