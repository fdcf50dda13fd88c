"""Explicit slab covers from the digit-frequency construction.

Every word of length n over m symbols has a pair (i, j) whose combined count
is at least ceil(2n/m). Projecting along a direction v_ij with
<v, t_i> = <v, t_j> merges i and j into one class, so the projected cylinder of
the word is one of the intervals f_k(I_v) over reduced words k in which that
class occurs at least ceil(2n/m) times. Those intervals, merged where they
touch, are the slabs of direction v_ij.

Geometry is exact: at depth n every interval endpoint is an integer over
``D q^(n-1) (q - p)`` where r = p/q and the projected offsets are a_c / D.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .core import DEFAULT_BUDGET, HomIfsSpec, check_budget, check_word
from .projection import Direction, exact_overlap_directions, project_ifs

WEIGHT_TOL = 1e-12


# --- counting -----------------------------------------------------------------

def pigeonhole_pair(word: Sequence[int], m: int) -> tuple:
    """Lexicographically smallest pair (i, j), i < j, with the largest combined count."""
    if m < 2:
        raise ValueError("need at least two symbols")
    word = check_word(word, m)
    if not word:
        raise ValueError("word must be nonempty")
    cnt = Counter(word)
    best, pair = -1, None
    for i, j in itertools.combinations(range(m), 2):
        c = cnt[i] + cnt[j]
        if c > best:
            best, pair = c, (i, j)
    return pair


def pair_count(word: Sequence[int], pair: tuple) -> int:
    return sum(1 for s in word if s in pair)


def pigeonhole_threshold(n: int, m: int) -> int:
    return -(-2 * n // m)


def pigeonhole_completeness(m: int, n: int, use_ext=None) -> tuple:
    """Exhaustive scan of {0..m-1}^n; returns (failures, rank of first failure or -1)."""
    return _accel.pigeonhole_scan(m, n, use_ext=use_ext)


@dataclass(frozen=True)
class FreqCount:
    m_red: int
    n: int
    symbol: int
    threshold: int
    count: int
    exponent: float  # log2(count) / n


def _tail_count(length: int, need: int, m: int) -> int:
    """Words of the given length over m symbols with at least ``need`` copies of one symbol."""
    need = max(need, 0)
    return sum(math.comb(length, k) * (m - 1) ** (length - k) for k in range(need, length + 1))


def count_freq_words(m_red: int, n: int, threshold: int, symbol: int = 0) -> FreqCount:
    if m_red < 1 or n < 0 or not 0 <= threshold <= n:
        raise ValueError("need m_red >= 1 and 0 <= threshold <= n")
    if not 0 <= symbol < m_red:
        raise ValueError("symbol outside the alphabet")
    c = _tail_count(n, threshold, m_red)
    exp = math.log2(c) / n if n and c else 0.0
    return FreqCount(m_red, n, symbol, threshold, c, exp)


def unrank_freq_word(m_red: int, n: int, threshold: int, rank: int, symbol: int = 0) -> tuple:
    """The rank-th word (lexicographic) among those with >= threshold copies of symbol."""
    total = _tail_count(n, threshold, m_red)
    if not 0 <= rank < total:
        raise IndexError("rank out of range")
    word, need = [], threshold
    for pos in range(n):
        rest = n - pos - 1
        for c in range(m_red):
            k = _tail_count(rest, need - (c == symbol), m_red)
            if rank < k:
                word.append(c)
                need -= c == symbol
                break
            rank -= k
    return tuple(word)


def rank_freq_word(m_red: int, word: Sequence[int], threshold: int, symbol: int = 0) -> int:
    word = check_word(word, m_red)
    n = len(word)
    if sum(1 for c in word if c == symbol) < threshold:
        raise ValueError("word does not meet the threshold")
    rank, need = 0, threshold
    for pos, s in enumerate(word):
        rest = n - pos - 1
        for c in range(s):
            rank += _tail_count(rest, need - (c == symbol), m_red)
        need -= s == symbol
    return rank


def reference_exponent(m: int, r) -> float:
    """(log2 m - 2/m) / (-log2 r)."""
    return (math.log2(m) - 2 / m) / -math.log2(float(r))


# --- slabs --------------------------------------------------------------------

@dataclass(frozen=True)
class Slab:
    """{x : a <= <v, x> <= b}; degenerate slabs (a == b) occur when the hull is a point."""

    direction: Direction
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError("slab has a > b")

    @property
    def exact_width(self) -> Fraction:
        return self.b - self.a

    @property
    def width(self) -> float:
        return float(self.b - self.a) / self.direction.norm

    def width_sq(self) -> Fraction:
        return (self.b - self.a) ** 2 / self.direction.norm_sq


def merge_intervals(intervals: Iterable[tuple]) -> list:
    """Union of closed intervals as sorted disjoint closed intervals (touching ones merge)."""
    out: list = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def _merge_equal_length(starts, length: int) -> list:
    """Merge [x, x + length] over integer starts x; returns (lo, hi) integer pairs."""
    xs = np.unique(np.asarray(starts))
    if xs.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(xs) > length)
    firsts = np.concatenate(([0], breaks + 1))
    lasts = np.concatenate((breaks, [xs.size - 1]))
    return [(int(xs[i]), int(xs[j]) + length) for i, j in zip(firsts, lasts)]


@dataclass(frozen=True)
class TubeCover:
    depth: int
    s: float
    slabs: tuple  # sorted by (direction, a)
    pair_assignment: tuple  # ((i, j), Direction) for every pair i < j
    threshold: int
    total_weight: float = field(default=None)

    def __post_init__(self):
        dirs = {d for _, d in self.pair_assignment}
        for sl in self.slabs:
            if sl.direction not in dirs:
                raise ValueError(f"slab direction {sl.direction} has no assigned pair")
        w = weight(self.slabs, self.s)
        if self.total_weight is None:
            object.__setattr__(self, "total_weight", w)
        elif abs(self.total_weight - w) > WEIGHT_TOL * max(1.0, w):
            raise ValueError("total_weight does not match the slabs")

    @property
    def directions(self) -> tuple:
        return tuple(sorted({d for _, d in self.pair_assignment}))

    def slabs_for(self, direction) -> tuple:
        d = Direction.of(direction)
        return tuple(sl for sl in self.slabs if sl.direction == d)

    def without(self, index: int) -> "TubeCover":
        """Copy with one slab removed (mutation fixture)."""
        slabs = self.slabs[:index] + self.slabs[index + 1:]
        return TubeCover(self.depth, self.s, slabs, self.pair_assignment, self.threshold)


def weight(slabs: Iterable[Slab], s: float) -> float:
    return math.fsum(sl.width**s for sl in slabs)


def _grouped_pairs(ifs: HomIfsSpec) -> dict:
    groups: dict = {}
    for pair, v in exact_overlap_directions(ifs):
        groups.setdefault(v, []).append(pair)
    return groups


def generate_cover(ifs: HomIfsSpec, n: int, s: float | None = None, budget: int | None = None,
                   threshold: int | None = None, use_ext=None) -> TubeCover:
    """Slab cover of the depth-n cylinders; ``s`` defaults to the midpoint of [reference, 1]."""
    if ifs.dim < 2:
        raise ValueError("covers need dimension >= 2")
    if ifs.size < 2:
        raise ValueError("covers need at least two maps")
    if n < 1:
        raise ValueError("n must be >= 1")
    m = ifs.size
    if s is None:
        s = (min(1.0, max(0.0, reference_exponent(m, ifs.ratio))) + 1) / 2
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    t = pigeonhole_threshold(n, m) if threshold is None else int(threshold)
    p, q = ifs.ratio.numerator, ifs.ratio.denominator
    slabs = []
    assignment = []
    for v, pairs in sorted(_grouped_pairs(ifs).items()):
        pifs = project_ifs(ifs, v)
        _, _, den, a = pifs.integer_model()
        check_budget(pifs.size**n, budget)
        cls = pifs.class_of
        designated = sorted({cls[i] for i, _ in pairs})
        assignment.extend((pair, v) for pair in pairs)
        scale = den * q ** (n - 1) * (q - p)
        values = [(q - p) * x for x in a]
        weights = [p**k * q ** (n - 1 - k) for k in range(n)]
        lo, hi = p**n * min(a), p**n * max(a)
        starts = [_accel.freq_sums(values, weights, c, t, use_ext=use_ext) for c in designated]
        starts = np.concatenate(starts) if starts else np.zeros(0, dtype=np.int64)
        for x, y in _merge_equal_length(starts + lo, hi - lo):
            slabs.append(Slab(v, Fraction(x, scale), Fraction(y, scale)))
    slabs.sort(key=lambda sl: (sl.direction, sl.a))
    return TubeCover(n, float(s), tuple(slabs), tuple(assignment), t)


# --- verification -------------------------------------------------------------

@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    depth: int
    words_checked: int
    failures: int
    witness: tuple | None  # first uncovered parent word, lexicographically


def _lcm(*xs) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def verify_cover(ifs: HomIfsSpec, cover: TubeCover, depth: int | None = None,
                 budget: int | None = None, use_ext=None) -> VerifyReport:
    """Exhaustively check every parent word's projected cylinder against the slabs.

    Works from the parent translations directly (no quotient classes): the
    projection of the convex hull of K_w along v is <v, f_w(0)> + r^n I_v with
    I_v = [min <v, t_i>, max <v, t_i>] / (1 - r).
    """
    n = cover.depth if depth is None else depth
    if n < 1:
        raise ValueError("depth must be >= 1")
    m = ifs.size
    check_budget(m**n, DEFAULT_BUDGET if budget is None else budget)
    p, q = ifs.ratio.numerator, ifs.ratio.denominator
    dirs = cover.directions
    den = _lcm(*(c.denominator for t in ifs.translations for c in t))
    proj = [[int(v.dot(t) * den) for v in dirs] for t in ifs.translations]  # [symbol][direction]
    base = den * q ** (n - 1) * (q - p)
    slab_dens = [Fraction(e * base).denominator for sl in cover.slabs for e in (sl.a, sl.b)]
    f = _lcm(*slab_dens)
    values = [[f * (q - p) * x for x in row] for row in proj]
    weights = [p**k * q ** (n - 1 - k) for k in range(n)]
    lo_off = [f * p**n * min(row[j] for row in proj) for j in range(len(dirs))]
    hi_off = [f * p**n * max(row[j] for row in proj) for j in range(len(dirs))]
    starts, slo, shi = [0], [], []
    for v in dirs:
        ivs = merge_intervals((sl.a, sl.b) for sl in cover.slabs_for(v))
        for a, b in ivs:
            slo.append(int(a * base * f))
            shi.append(int(b * base * f))
        starts.append(len(slo))
    fails, first = _accel.verify_words(
        np.array(values, dtype=object), weights, lo_off, hi_off, starts, slo, shi, use_ext=use_ext)
    witness = None
    if first >= 0:
        digits = []
        for _ in range(n):
            first, c = divmod(first, m)
            digits.append(c)
        witness = tuple(reversed(digits))
    return VerifyReport(fails == 0, n, m**n, int(fails), witness)


# --- weight curves and tubes ---------------------------------------------------

@dataclass(frozen=True)
class CurveRow:
    n: int
    slabs: int
    total_weight: float


@dataclass(frozen=True)
class WeightCurve:
    s: float
    reference_exponent: float
    rows: tuple


def cover_weight_curve(ifs: HomIfsSpec, s: float, n_range: Sequence[int], budget: int | None = None,
                       use_ext=None) -> WeightCurve:
    n_range = [int(n) for n in n_range]
    if not n_range or n_range != sorted(n_range):
        raise ValueError("n_range must be nonempty and ascending")
    rows = []
    for n in n_range:
        cov = generate_cover(ifs, n, s, budget=budget, use_ext=use_ext)
        rows.append(CurveRow(n, len(cov.slabs), cov.total_weight))
    return WeightCurve(float(s), reference_exponent(ifs.size, ifs.ratio), tuple(rows))


@dataclass(frozen=True)
class TubeSlicing:
    """Tubes of width w (w-neighbourhoods of lines) covering slab ∩ [0,1]^d.

    The lines lie in the slab's mid-hyperplane on a square grid of spacing
    ``spacing`` across a (d-2)-dimensional cross-section of side sqrt(d).
    """

    slab: Slab
    dim: int
    per_axis: int
    count: int
    width: float
    spacing: float

    @property
    def weight(self) -> float:
        return self.count * self.width ** (self.dim - 1)

    def grid_offsets(self):
        """Cross-section coordinates of the tube axes, in lexicographic order."""
        pts = [(k + 0.5) * self.spacing for k in range(self.per_axis)]
        return itertools.product(pts, repeat=self.dim - 2)


def slab_to_tubes(slab: Slab, d: int) -> TubeSlicing:
    if d < 2:
        raise ValueError("d must be >= 2")
    w = slab.width
    if d == 2:
        return TubeSlicing(slab, d, 1, 1, w, 0.0)
    w2 = slab.width_sq()
    if w2 >= d:
        return TubeSlicing(slab, d, 1, 1, w, 0.0)
    if w2 == 0:
        raise ValueError("a zero-width slab has no tube slicing in d >= 3")
    # distance to the nearest axis is <= sqrt(w^2/4 + (d-2) h^2/4) <= w for h = w sqrt(3/(d-2));
    # per-axis count is the least k with k h >= sqrt(d), decided exactly via 3 k^2 w^2 >= d (d - 2)
    k = 1
    while 3 * k * k * w2 < d * (d - 2):
        k += 1
    return TubeSlicing(slab, d, k, k ** (d - 2), w, w * math.sqrt(3 / (d - 2)))


__all__ = [
    "pigeonhole_pair", "pair_count", "pigeonhole_threshold", "pigeonhole_completeness",
    "FreqCount", "count_freq_words", "unrank_freq_word", "rank_freq_word", "reference_exponent",
    "Slab", "TubeCover", "merge_intervals", "weight", "generate_cover",
    "VerifyReport", "verify_cover", "CurveRow", "WeightCurve", "cover_weight_curve",
    "TubeSlicing", "slab_to_tubes",
]
