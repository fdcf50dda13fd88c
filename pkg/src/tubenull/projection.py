"""Projections of homogeneous IFSs along integer directions.

A direction ``v`` acts by ``P_v(x) = <x, v>`` (no normalisation), so a
homogeneous IFS ``{r x + t_i}`` projects to ``{r s + <v, t_i>}`` on the line.
Maps with equal projected offset are merged into one class of the quotient
alphabet.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .core import HomIfsSpec, carpet_base, check_budget, check_word


@dataclass(frozen=True, order=True)
class Direction:
    """Primitive integer vector whose first nonzero entry is positive."""

    v: tuple

    def __post_init__(self):
        v = tuple(int(c) for c in self.v)
        if not any(v):
            raise ValueError("direction must be nonzero")
        if reduce(math.gcd, (abs(c) for c in v)) != 1:
            raise ValueError(f"direction {v} is not primitive")
        if next(c for c in v if c) < 0:
            raise ValueError(f"direction {v} is not sign-normalised")
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, v) -> "Direction":
        """Normalise any nonzero integer vector (divide by gcd, fix the sign)."""
        if isinstance(v, Direction):
            return v
        v = tuple(int(c) for c in v)
        if not any(v):
            raise ValueError("direction must be nonzero")
        g = reduce(math.gcd, (abs(c) for c in v))
        v = tuple(c // g for c in v)
        if next(c for c in v if c) < 0:
            v = tuple(-c for c in v)
        return cls(v)

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def norm_sq(self) -> int:
        return sum(c * c for c in self.v)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    @property
    def sup_norm(self) -> int:
        return max(abs(c) for c in self.v)

    def dot(self, x) -> Fraction:
        return sum((Fraction(c) * xj for c, xj in zip(self.v, x)), Fraction(0))

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.v) + ")"


def primitive_directions(dim: int, radius: int, norm: str = "euclid") -> list:
    """All normalised primitive v with 0 < |v| <= radius, ordered by (|v|^2, v)."""
    if radius < 1:
        return []
    out = set()
    for v in itertools.product(range(-radius, radius + 1), repeat=dim):
        if not any(v):
            continue
        if norm == "euclid" and sum(c * c for c in v) > radius * radius:
            continue
        if reduce(math.gcd, (abs(c) for c in v)) != 1:
            continue
        out.add(Direction.of(v))
    return sorted(out, key=lambda d: (d.norm_sq, d.v))


@dataclass(frozen=True)
class ProjectedIfs:
    ratio: Fraction
    direction: Direction
    classes: tuple  # tuple of tuples of parent indices, ordered like offsets
    offsets: tuple  # ascending, pairwise distinct
    hull: tuple  # (lo, hi)

    @property
    def size(self) -> int:
        return len(self.offsets)

    @property
    def parent_size(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def class_of(self) -> tuple:
        out = [0] * self.parent_size
        for k, members in enumerate(self.classes):
            for i in members:
                out[i] = k
        return tuple(out)

    def integer_model(self):
        """Integers (p, q, D, a) with r = p/q and offsets[c] = a[c]/D."""
        p, q = self.ratio.numerator, self.ratio.denominator
        den = 1
        for t in self.offsets:
            den = den * t.denominator // math.gcd(den, t.denominator)
        a = [int(t * den) for t in self.offsets]
        return p, q, den, a


def overlap_classes(ifs: HomIfsSpec, v) -> tuple:
    """Fibers of i -> <v, t_i>, ordered by offset; members ascending."""
    d = Direction.of(v)
    if d.dim != ifs.dim:
        raise ValueError("direction and IFS dimensions differ")
    fibers: dict = {}
    for i, t in enumerate(ifs.translations):
        fibers.setdefault(d.dot(t), []).append(i)
    return tuple(tuple(fibers[k]) for k in sorted(fibers))


def project_ifs(ifs: HomIfsSpec, v) -> ProjectedIfs:
    d = Direction.of(v)
    classes = overlap_classes(ifs, d)
    offsets = tuple(d.dot(ifs.translations[c[0]]) for c in classes)
    s = 1 - ifs.ratio
    hull = (offsets[0] / s, offsets[-1] / s)
    return ProjectedIfs(ifs.ratio, d, classes, offsets, hull)


def reduce_word(pifs: ProjectedIfs, word: Sequence[int]) -> tuple:
    """Map a parent word to its word over the quotient alphabet."""
    cls = pifs.class_of
    return tuple(cls[i] for i in check_word(word, pifs.parent_size))


def projected_word_offset(pifs: ProjectedIfs, kword: Sequence[int]) -> Fraction:
    acc = Fraction(0)
    scale = Fraction(1)
    for c in check_word(kword, pifs.size):
        acc += scale * pifs.offsets[c]
        scale *= pifs.ratio
    return acc


def _orthogonal_primitive(u: tuple) -> tuple:
    """Primitive integer vector orthogonal to u: minimal sup-norm, then lexicographic."""
    d = len(u)
    if d == 2:
        return Direction.of((-u[1], u[0])).v
    bound = max(abs(c) for c in u)
    for k in range(1, bound + 1):
        best = None
        for cand in itertools.product(range(-k, k + 1), repeat=d):
            if max(abs(c) for c in cand) != k or sum(a * b for a, b in zip(cand, u)):
                continue
            if reduce(math.gcd, (abs(c) for c in cand)) != 1:
                continue
            nd = Direction.of(cand).v
            if best is None or nd < best:
                best = nd
        if best is not None:
            return best
    raise AssertionError("unreachable: u_a e_b - u_b e_a is always orthogonal")


def exact_overlap_directions(ifs: HomIfsSpec) -> list:
    """One direction per unordered pair i < j with <v, t_i - t_j> = 0."""
    if ifs.dim < 2:
        raise ValueError("exact-overlap directions need dimension >= 2")
    out = []
    for i, j in itertools.combinations(range(ifs.size), 2):
        diff = []
        for a, b in zip(ifs.translations[i], ifs.translations[j]):
            if not isinstance(a, Fraction) or not isinstance(b, Fraction):
                raise ValueError("translations must be exact rationals")
            diff.append(a - b)
        den = reduce(lambda x, y: x * y // math.gcd(x, y), (c.denominator for c in diff), 1)
        u = tuple(int(c * den) for c in diff)
        g = reduce(math.gcd, (abs(c) for c in u))
        u = tuple(c // g for c in u)
        out.append(((i, j), Direction(_orthogonal_primitive(u))))
    return out


def scaled_levels(pifs: ProjectedIfs, n: int, masses=None, budget: int | None = None):
    """Distinct depth-n offsets as integers S with f(0) = S / (D q^(n-1)).

    With ``masses`` (one weight per class) also returns the aggregated
    Bernoulli mass of each value. Returns (values, masses_or_None, scale).
    Exact rational masses are aggregated in a dict; floats via numpy.
    """
    p, q, den, a = pifs.integer_model()
    exact_masses = masses is not None and any(isinstance(x, Fraction) for x in masses)
    if n == 0:
        if masses is None:
            return [0], None, 1
        return [0], [Fraction(1)] if exact_masses else np.ones(1), 1
    big = max(abs(x) for x in a) * n * max(p, q) ** n >= 2**62
    if exact_masses:
        dist = {0: Fraction(1)}
        for j in range(1, n + 1):
            check_budget(len(dist) * len(a), budget, "offset states")
            step = p ** (j - 1)
            new: dict = {}
            for s, mass in dist.items():
                for ac, pc in zip(a, masses):
                    key = q * s + step * ac
                    new[key] = new.get(key, 0) + mass * pc
            dist = new
        keys = sorted(dist)
        return keys, [dist[k] for k in keys], den * q ** (n - 1)
    dtype = object if big else np.int64
    vals = np.zeros(1, dtype=dtype)
    mass = None if masses is None else np.ones(1)
    av = np.array(a, dtype=dtype)
    for j in range(1, n + 1):
        check_budget(len(vals) * len(a), budget, "offset states")
        cand = (vals[:, None] * q + av[None, :] * p ** (j - 1)).ravel()
        if mass is None:
            vals = np.unique(cand)
        else:
            cm = (mass[:, None] * np.asarray(masses, dtype=float)[None, :]).ravel()
            vals, inv = np.unique(cand, return_inverse=True)
            mass = np.bincount(inv.ravel(), weights=cm, minlength=len(vals))
    return vals, mass, den * q ** (n - 1)


def level_offsets(pifs: ProjectedIfs, n: int, budget: int | None = None) -> list:
    """Sorted distinct values f_k(0) over reduced words of length n."""
    vals, _, scale = scaled_levels(pifs, n, budget=budget)
    return [Fraction(int(s), 1) / scale for s in vals]


@dataclass(frozen=True)
class WscReport:
    direction: Direction
    checked_depth: int
    scaled_min_gap: object  # Fraction, or math.inf when no depth >= 1 was checked
    integral: bool
    wsc_constant_c: object
    distinct_counts: tuple  # per n = 0..checked_depth
    gaps: tuple  # per n = 1..checked_depth


def wsc_check(ifs: HomIfsSpec, v, n_max: int, budget: int | None = None) -> WscReport:
    """Certify that N^n-scaled projected offsets are integers at least 1 apart, n <= n_max."""
    base = carpet_base(ifs)
    if base is None:
        raise ValueError("wsc_check needs a carpet IFS (ratio 1/N, translations i/N)")
    pifs = project_ifs(ifs, v)
    counts = [1]
    gaps = []
    integral = True
    best: object = math.inf
    for n in range(1, n_max + 1):
        vals, _, scale = scaled_levels(pifs, n, budget=budget)
        # N^n f(0) = N^n S / scale
        scaled = [Fraction(int(s) * base**n, scale) for s in vals]
        integral = integral and all(x.denominator == 1 for x in scaled)
        counts.append(len(scaled))
        if len(scaled) > 1:
            gap = min(b - a for a, b in zip(scaled, scaled[1:]))
            gaps.append(gap)
            best = gap if best is math.inf else min(best, gap)
        else:
            gaps.append(math.inf)
    return WscReport(pifs.direction, n_max, best, integral, best, tuple(counts), tuple(gaps))


@dataclass(frozen=True)
class OverlapReport:
    multiplicity: int
    R0: int
    dim: int
    bound_2sqrtd_R0: float
    within_bound: bool


def overlap_multiplicity(pifs: ProjectedIfs, R0: int | None = None, dim: int | None = None) -> OverlapReport:
    """max_i #{j : f_j(I_v) meets f_i(I_v)} with closed intervals (touching counts)."""
    lo, hi = pifs.hull
    r = pifs.ratio
    ivs = [(t + r * lo, t + r * hi) for t in pifs.offsets]
    mult = 0
    for a, b in ivs:
        mult = max(mult, sum(1 for c, e in ivs if c <= b and a <= e))
    d = pifs.direction.dim if dim is None else dim
    if R0 is None:
        R0 = math.isqrt(pifs.direction.norm_sq - 1) + 1  # ceil(|v|)
    return OverlapReport(mult, R0, d, 2 * math.sqrt(d) * R0, mult * mult <= 4 * d * R0 * R0)


def choose_high_level(R0: int, delta0: float, N: int, d: int) -> int:
    """Smallest m >= 1 with log(2 sqrt(d) R0) / (m log N) < delta0 / 2 (log base 2)."""
    if R0 < 1 or N < 2 or delta0 <= 0:
        raise ValueError("need R0 >= 1, N >= 2, delta0 > 0")
    x = math.log2(2 * math.sqrt(d) * R0) / (math.log2(N) * delta0 / 2)
    m = max(1, math.floor(x) + 1)
    while m > 1 and math.log2(2 * math.sqrt(d) * R0) / ((m - 1) * math.log2(N)) < delta0 / 2:
        m -= 1
    return m


__all__ = [
    "Direction", "ProjectedIfs", "WscReport", "OverlapReport", "primitive_directions",
    "overlap_classes", "project_ifs", "reduce_word", "projected_word_offset",
    "exact_overlap_directions", "scaled_levels", "level_offsets", "wsc_check",
    "overlap_multiplicity", "choose_high_level",
]
