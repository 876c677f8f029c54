# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance kernels. Mirrors ``_kernels_py`` exactly."""

from libc.stdlib cimport malloc, free


cdef Py_ssize_t _distance(str a, str b, Py_ssize_t limit) except -1:
    # limit < 0 means unbounded; otherwise returns limit + 1 once exceeded
    cdef Py_ssize_t n = len(a), m = len(b), i, j, cost, best, v
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp
    cdef Py_UCS4 ca
    if n < m:
        a, b = b, a
        n, m = m, n
    if limit >= 0 and n - m > limit:
        return limit + 1
    if m == 0:
        return n
    prev = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cur = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            ca = a[i - 1]
            cur[0] = i
            best = i
            for j in range(1, m + 1):
                cost = 0 if ca == b[j - 1] else 1
                v = prev[j - 1] + cost
                if prev[j] + 1 < v:
                    v = prev[j] + 1
                if cur[j - 1] + 1 < v:
                    v = cur[j - 1] + 1
                cur[j] = v
                if v < best:
                    best = v
            if limit >= 0 and best > limit:
                return limit + 1
            tmp = prev
            prev = cur
            cur = tmp
        return prev[m]
    finally:
        free(prev)
        free(cur)


def levenshtein(str a, str b):
    return _distance(a, b, -1)


def bounded_levenshtein(str a, str b, Py_ssize_t limit):
    if limit < 0:
        raise ValueError("limit must be >= 0")
    return _distance(a, b, limit)


def close_pairs(words, Py_ssize_t below):
    cdef list items = [str(w) for w in words]
    cdef Py_ssize_t n = len(items), i, j, d
    cdef list out = []
    if below <= 0:
        return out
    for i in range(n):
        for j in range(i + 1, n):
            d = _distance(items[i], items[j], below - 1)
            if d < below:
                out.append((i, j, d))
    return out
