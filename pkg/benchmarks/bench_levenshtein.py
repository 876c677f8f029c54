"""Compare the compiled and pure-Python pairwise distance kernels.

    python benchmarks/bench_levenshtein.py [--terms 400] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import string
import timeit


def make_terms(n: int, seed: int = 7) -> list[str]:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        k = rng.randint(6, 24)
        out.append("".join(rng.choice(string.ascii_letters) for _ in range(k)))
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, default=400)
    ap.add_argument("--threshold", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    from acimov_lint import _kernels_py

    backends = {"python": _kernels_py}
    try:
        from acimov_lint import _kernels

        backends["compiled"] = _kernels
    except ImportError:
        print("compiled kernel not built, timing the Python fallback only")

    words = make_terms(args.terms)
    pairs = args.terms * (args.terms - 1) // 2
    results = {}
    for name, mod in backends.items():
        t = min(timeit.repeat(lambda: mod.close_pairs(words, args.threshold), number=1, repeat=args.repeat))
        results[name] = (t, mod.close_pairs(words, args.threshold))
        print(f"{name:9s} close_pairs  {pairs} pairs  {t * 1000:9.1f} ms")
        t = min(timeit.repeat(lambda: [mod.levenshtein(a, b) for a, b in zip(words, words[1:])], number=1, repeat=args.repeat))
        print(f"{name:9s} levenshtein  {len(words) - 1} pairs  {t * 1000:9.1f} ms  (unbounded)")
    if len(results) == 2:
        (tp, rp), (tc, rc) = results["python"], results["compiled"]
        assert rp == rc, "backends disagree"
        print(f"speedup on close_pairs: {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
