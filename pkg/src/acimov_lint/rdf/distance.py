"""Levenshtein distance with a compiled backend when available.

Set ``ACIMOV_LINT_PURE=1`` to force the pure-Python kernels.
"""

from __future__ import annotations

import os

if os.environ.get("ACIMOV_LINT_PURE"):
    from .. import _kernels_py as _backend
else:
    try:
        from .. import _kernels as _backend  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        from .. import _kernels_py as _backend

BACKEND = "compiled" if _backend.__name__.endswith("._kernels") else "python"

levenshtein = _backend.levenshtein
bounded_levenshtein = _backend.bounded_levenshtein
close_pairs = _backend.close_pairs

__all__ = ["BACKEND", "levenshtein", "bounded_levenshtein", "close_pairs"]
