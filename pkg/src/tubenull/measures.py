"""Bernoulli measures, offset-partition entropies and entropy dimensions.

Logs are base 2 throughout. Entropies of projected measures are computed on
the offset partition: words of length h are grouped by the exact value of
``f_k(0)``, and the grouped Bernoulli masses are fed to Shannon's formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import CarpetSpec, carpet_to_ifs
from .projection import (
    Direction, ProjectedIfs, overlap_multiplicity, primitive_directions, project_ifs, scaled_levels,
)

FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class BernoulliMeasure:
    """Probability vector on an alphabet.

    Weights given as ints/Fractions are kept exact and must sum to exactly 1;
    any float weight switches to float mode with a 1e-12 tolerance on the sum.
    """

    weights: tuple

    def __post_init__(self):
        raw = tuple(self.weights)
        if not raw:
            raise ValueError("a measure needs at least one weight")
        exact = all(isinstance(w, (int, Fraction)) and not isinstance(w, bool) for w in raw)
        ws = tuple(Fraction(w) for w in raw) if exact else tuple(float(w) for w in raw)
        if any(w < 0 for w in ws):
            raise ValueError("weights must be nonnegative")
        total = sum(ws)
        if exact and total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        if not exact and abs(total - 1.0) > FLOAT_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1 within {FLOAT_TOL}")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, m: int, exact: bool = True) -> "BernoulliMeasure":
        return cls((Fraction(1, m) if exact else 1.0 / m,) * m)

    @property
    def exact(self) -> bool:
        return isinstance(self.weights[0], Fraction)

    @property
    def size(self) -> int:
        return len(self.weights)

    def as_floats(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])


def shannon_entropy(p) -> float:
    """-sum p_i log2 p_i, skipping zero entries."""
    if isinstance(p, BernoulliMeasure):
        p = p.weights
    return float(sum(-float(x) * math.log2(float(x)) for x in p if x > 0))


def pushforward_weights(mu: BernoulliMeasure, classes: Sequence[Sequence[int]]) -> BernoulliMeasure:
    seen = sorted(i for c in classes for i in c)
    if seen != list(range(mu.size)):
        raise ValueError("classes do not partition the alphabet")
    zero = Fraction(0) if mu.exact else 0.0
    return BernoulliMeasure(tuple(sum((mu.weights[i] for i in c), zero) for c in classes))


def _check_alphabet(pifs: ProjectedIfs, mu_v: BernoulliMeasure):
    if mu_v.size != pifs.size:
        raise ValueError(f"measure has {mu_v.size} weights but the projected alphabet has {pifs.size}")


def offset_partition_entropy(pifs: ProjectedIfs, mu_v: BernoulliMeasure, h: int,
                             budget: int | None = None, exact: bool = False) -> float:
    """H(nu, P_h): entropy of the level-h word masses grouped by equal offset.

    Grouping is always exact (integer offsets); masses are summed in floats
    unless ``exact`` is set and the measure has rational weights.
    """
    _check_alphabet(pifs, mu_v)
    if h < 0:
        raise ValueError("h must be >= 0")
    masses = list(mu_v.weights) if (exact and mu_v.exact) else [float(w) for w in mu_v.weights]
    _, agg, _ = scaled_levels(pifs, h, masses=masses, budget=budget)
    return shannon_entropy(agg)


def partition_level(ratio: Fraction, n: int) -> int:
    """h = floor(n / log2(1/r)), i.e. the largest h with r^h >= 2^-n (exact)."""
    p, q = ratio.numerator, ratio.denominator
    h = 0
    while q ** (h + 1) <= 2**n * p ** (h + 1):
        h += 1
    return h


def offset_crowding(pifs: ProjectedIfs, h: int, budget: int | None = None) -> int:
    """M1 at level h: most distinct offsets in one half-open window [a, a + r^h)."""
    vals, _, scale = scaled_levels(pifs, h, budget=budget)
    vals = [int(x) for x in vals]
    p, q, den, _ = pifs.integer_model()
    # r^h in scaled units is p^h den / q (scale = den q^(h-1)); compare with q multiplied through
    width = p**h * den
    best, j = 0, 0
    for i in range(len(vals)):
        while (vals[i] - vals[j]) * q >= width:
            j += 1
        best = max(best, i - j + 1)
    return best


def scale_entropy(pifs: ProjectedIfs, mu_v: BernoulliMeasure, n: int, budget: int | None = None):
    """(H(nu, P_h), log2 M2) with h = floor(n / log2(1/r)) and M2 = M1 (1 + 1/r)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h = partition_level(pifs.ratio, n)
    est = offset_partition_entropy(pifs, mu_v, h, budget=budget)
    m1 = offset_crowding(pifs, h, budget=budget)
    return est, math.log2(m1 * (1 + 1 / pifs.ratio))


@dataclass(frozen=True)
class EntropyRow:
    n: int
    h: int
    H_n: float  # H(nu, P_h), the estimate of the dyadic entropy at scale 2^-n
    radius: float  # log2 M2
    ratio: float  # H_n / (h log2(1/r)); nan when h == 0
    garsia_gap: float  # h log2(1/r) - H_n


@dataclass(frozen=True)
class EntropyReport:
    direction: Direction | None
    ratio: Fraction
    weights: tuple
    rows: tuple
    dim_lower: float
    dim_upper: float
    dim_estimate: float
    overlap_M: int


def entropy_lower_bound_dim(h_bits: float, r, M: int) -> float:
    if h_bits < 0 or M < 1:
        raise ValueError("need h >= 0 and M >= 1")
    s = -math.log2(float(r))
    return h_bits / s - math.log2(M) / s


def entropy_dimension_estimate(pifs: ProjectedIfs, mu_v: BernoulliMeasure, n_list: Sequence[int],
                               budget: int | None = None) -> EntropyReport:
    """Tabulate H(nu, P_h) over n_list and bracket the entropy dimension.

    The per-row ratio normalises by the exact partition scale h log2(1/r).
    Offset-partition entropy is subadditive in h, so the infimum of the ratios
    is the limit; the minimum over the table is therefore an upper bound and
    doubles as the estimate. The lower bound is the overlap-multiplicity bound.
    """
    n_list = [int(n) for n in n_list]
    if not n_list or n_list != sorted(n_list) or n_list[0] < 1:
        raise ValueError("n_list must be nonempty, ascending and >= 1")
    _check_alphabet(pifs, mu_v)
    lr = -math.log2(float(pifs.ratio))
    rows = []
    for n in n_list:
        est, rad = scale_entropy(pifs, mu_v, n, budget=budget)
        h = partition_level(pifs.ratio, n)
        ratio = est / (h * lr) if h else math.nan
        rows.append(EntropyRow(n, h, est, rad, ratio, h * lr - est))
    ratios = [r.ratio for r in rows if not math.isnan(r.ratio)]
    upper = min(1.0, max(0.0, min(ratios))) if ratios else 1.0
    M = overlap_multiplicity(pifs).multiplicity
    lower = max(0.0, min(upper, entropy_lower_bound_dim(shannon_entropy(mu_v), pifs.ratio, M)))
    return EntropyReport(pifs.direction, pifs.ratio, mu_v.weights, tuple(rows), lower, upper, upper, M)


@dataclass(frozen=True)
class SubadditivityRow:
    n: int
    m: int
    H_n: float
    H_m: float
    H_nm: float
    slack: float  # H_n + H_m - H_{n+m}
    holds: bool


def subadditivity_probe(pifs: ProjectedIfs, mu_v: BernoulliMeasure, pairs, budget: int | None = None) -> list:
    """Check H(nu, P_{n+m}) <= H(nu, P_n) + H(nu, P_m) for each (n, m).

    Entropies are floats, so ``holds`` allows a rounding slack of 1e-12 (n + m).
    """
    cache: dict = {}

    def H(k):
        if k not in cache:
            cache[k] = offset_partition_entropy(pifs, mu_v, k, budget=budget)
        return cache[k]

    out = []
    for n, m in pairs:
        if n < 0 or m < 0:
            raise ValueError("levels must be >= 0")
        slack = H(n) + H(m) - H(n + m)
        out.append(SubadditivityRow(n, m, H(n), H(m), H(n + m), slack, slack >= -FLOAT_TOL * max(1, n + m)))
    return out


def garsia_gap(report: EntropyReport) -> float:
    """Largest h log2(1/r) - H(nu, P_h) over the table (0 for Lebesgue, ~scale when singular)."""
    if not report.rows:
        raise ValueError("empty report")
    return max(r.garsia_gap for r in report.rows)


@dataclass(frozen=True)
class DropScanResult:
    direction: Direction
    dim_upper: float
    drop: float
    reports: tuple  # (Direction, EntropyReport) in scan order


DEFAULT_SCAN_LEVELS = (4, 8, 12)


def dimension_drop_scan(spec: CarpetSpec, mu: BernoulliMeasure, R: int,
                        n_list: Sequence[int] = DEFAULT_SCAN_LEVELS, budget: int | None = None) -> DropScanResult:
    """Direction in Z(R) minimising dim_upper of the projected measure.

    Directions are scanned by (|v|^2, v); among minimisers (within 1e-12)
    the lexicographically smallest vector wins.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if mu.size != spec.size:
        raise ValueError("measure and digit set differ in size")
    ifs = carpet_to_ifs(spec)
    reports = []
    for v in primitive_directions(spec.dim, R):
        pifs = project_ifs(ifs, v)
        rep = entropy_dimension_estimate(pifs, pushforward_weights(mu, pifs.classes), n_list, budget=budget)
        reports.append((v, rep))
    best_v, best = reports[0][0], reports[0][1].dim_upper
    for v, rep in reports[1:]:
        if rep.dim_upper < best - FLOAT_TOL or (abs(rep.dim_upper - best) <= FLOAT_TOL and v.v < best_v.v):
            best_v, best = v, min(best, rep.dim_upper)
    return DropScanResult(best_v, best, 1.0 - best, tuple(reports))


__all__ = [
    "BernoulliMeasure", "EntropyRow", "EntropyReport", "SubadditivityRow", "DropScanResult",
    "shannon_entropy", "pushforward_weights", "offset_partition_entropy", "partition_level",
    "offset_crowding", "scale_entropy", "entropy_dimension_estimate", "entropy_lower_bound_dim",
    "subadditivity_probe", "garsia_gap", "dimension_drop_scan",
]
