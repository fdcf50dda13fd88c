"""Compare the compiled kernels with the numpy/pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row times one call on both backends (best of --repeat) and checks that
the two results agree.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

import numpy as np

from tubenull import _accel
from tubenull.core import HomIfsSpec
from tubenull.cover import generate_cover, verify_cover


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a, dtype=object), np.asarray(b, dtype=object))
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return a == b


def cases(quick):
    n = 9 if quick else 12
    digits = np.array([(a, b) for a in range(3) for b in range(3) if (a, b) != (1, 1)])
    pows = [3 ** (n - 1 - k) for k in range(n)]
    vals = np.array([0, 7, 10])
    wts = [7 ** k * 10 ** (n - 1 - k) for k in range(n)]
    tri = HomIfsSpec(Fraction(3, 10), [(0, 0), (1, 0), (0, 1)])
    depth = 7 if quick else 10

    def cells(use_ext):
        grid = np.zeros((2**8, 2**8), dtype=np.uint8)
        h = 6
        return _accel.mark_cells(digits, [3 ** (h - 1 - k) for k in range(h)], [0, 0], [1, 1], 3**h, 2**8,
                                 grid, use_ext=use_ext)

    def cover_cycle(use_ext):
        cov = generate_cover(tri, depth, 0.95, use_ext=use_ext)
        rep = verify_cover(tri, cov, use_ext=use_ext)
        return len(cov.slabs), rep.passed, rep.words_checked

    return [
        (f"word_sums 8^{n // 2} carpet words", lambda e: _accel.word_sums(digits, pows[: n // 2], use_ext=e)),
        (f"pigeonhole_scan m=5 n={n - 2}", lambda e: _accel.pigeonhole_scan(5, n - 2, use_ext=e)),
        (f"freq_sums m=3 n={n}", lambda e: _accel.freq_sums(vals, wts, 0, -(-2 * n // 3), use_ext=e)),
        ("mark_cells depth 6 on 256^2", cells),
        (f"generate+verify cover depth {depth}", cover_cycle),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    args = ap.parse_args(argv)
    if not _accel.HAVE_EXT:
        print("compiled kernels are not built; only the fallback can be timed", file=sys.stderr)
        return 1
    print(f"{'case':40s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    ok = True
    for label, fn in cases(args.quick):
        tp, a = best_of(lambda: fn(False), args.repeat)
        tc, b = best_of(lambda: fn(True), args.repeat)
        agree = same(a, b)
        ok &= agree
        print(f"{label:40s} {tp:9.4f}s {tc:9.4f}s {tp / tc:7.1f}x{'' if agree else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
