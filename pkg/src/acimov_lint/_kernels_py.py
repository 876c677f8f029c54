"""Pure-Python edit-distance kernels, used when the compiled module is absent."""

from __future__ import annotations

from typing import Sequence


def _distance(a: str, b: str, limit: int) -> int:
    if len(a) < len(b):
        a, b = b, a
    n, m = len(a), len(b)
    if limit >= 0 and n - m > limit:
        return limit + 1
    if m == 0:
        return n
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        ca = a[i - 1]
        cur = [i] + [0] * m
        best = i
        for j in range(1, m + 1):
            v = prev[j - 1] + (ca != b[j - 1])
            if prev[j] + 1 < v:
                v = prev[j] + 1
            if cur[j - 1] + 1 < v:
                v = cur[j - 1] + 1
            cur[j] = v
            if v < best:
                best = v
        if limit >= 0 and best > limit:
            return limit + 1
        prev = cur
    return prev[m]


def levenshtein(a: str, b: str) -> int:
    return _distance(a, b, -1)


def bounded_levenshtein(a: str, b: str, limit: int) -> int:
    if limit < 0:
        raise ValueError("limit must be >= 0")
    return _distance(a, b, limit)


def close_pairs(words: Sequence[str], below: int) -> list[tuple[int, int, int]]:
    items = [str(w) for w in words]
    out: list[tuple[int, int, int]] = []
    if below <= 0:
        return out
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            d = _distance(items[i], items[j], below - 1)
            if d < below:
                out.append((i, j, d))
    return out
