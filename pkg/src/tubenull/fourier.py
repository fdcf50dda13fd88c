"""Fourier coefficients of Bernoulli carpet measures and tent-function R0 certificates.

For the measure with weights p on the digits of a x N carpet,
``mu^(xi) = prod_{k>=1} Phi(xi / N^k)`` with ``Phi(eta) = sum_i p_i e^{-2 pi i <eta, i>}``.
Phases are reduced exactly: ``<xi, i>`` is an integer, taken mod N^k before
converting to a float angle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .core import CarpetSpec, HoleReport, find_hole
from .measures import BernoulliMeasure
from .projection import primitive_directions


class NotFound(LookupError):
    """No coefficient above the threshold inside the scanned ball."""


@dataclass(frozen=True)
class FourierValue:
    xi: tuple
    value: complex
    tail_radius: float
    terms_used: int

    @property
    def modulus(self) -> float:
        return abs(self.value)


def _check_measure(spec: CarpetSpec, p: BernoulliMeasure):
    if p.size != spec.size:
        raise ValueError(f"measure has {p.size} weights for {spec.size} digits")


def tail_bound(xi_l1: int, base: int, K: int) -> float:
    """Bound on |mu^(xi) - prod_{k<=K}|: exp(2 pi |xi|_1 / N^K) - 1."""
    x = 2 * math.pi * xi_l1 / base**K
    return math.inf if x > 700 else math.expm1(x)


def ss_fourier(spec: CarpetSpec, p: BernoulliMeasure, xi: Sequence[int], tol: float = 1e-9) -> FourierValue:
    if tol <= 0:
        raise ValueError("tol must be > 0")
    _check_measure(spec, p)
    xi = tuple(int(c) for c in xi)
    if len(xi) != spec.dim:
        raise ValueError("frequency has the wrong dimension")
    l1 = sum(abs(c) for c in xi)
    if l1 == 0:
        return FourierValue(xi, complex(1.0), 0.0, 0)
    N = spec.base
    K = 0
    while tail_bound(l1, N, K) >= tol:
        K += 1
    dots = [sum(a * b for a, b in zip(xi, dgt)) for dgt in spec.digits]
    w = [float(x) for x in p.weights]
    value = complex(1.0)
    for k in range(1, K + 1):
        mod = N**k
        phi = complex(0.0)
        for dk, pk in zip(dots, w):
            rem = dk % mod
            if rem == 0:
                phi += pk
            else:
                phi += pk * cmath.exp(-2j * math.pi * rem / mod)
        value *= phi
    return FourierValue(xi, value, tail_bound(l1, N, K), K)


def invariance_check(spec: CarpetSpec, p: BernoulliMeasure, v: Sequence[int], k: int, tol: float = 1e-9) -> float:
    """|mu^(N^k v) - mu^(v)|; never exceeds the sum of the two tail radii."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not any(v):
        raise ValueError("v must be nonzero")
    a = ss_fourier(spec, p, [spec.base**k * c for c in v], tol)
    b = ss_fourier(spec, p, v, tol)
    return abs(a.value - b.value)


def fourier_scan(spec: CarpetSpec, p: BernoulliMeasure, R: int, tol: float = 1e-9) -> list:
    """ss_fourier at every primitive direction with |v| <= R, in scan order."""
    return [ss_fourier(spec, p, v.v, tol) for v in primitive_directions(spec.dim, R)]


def find_nonvanishing(spec: CarpetSpec, p: BernoulliMeasure, R: int, threshold: float, tol: float = 1e-9):
    """First v in Z(R) (by |v|, then lexicographic) with |mu^(v)| > threshold + tail."""
    for v in primitive_directions(spec.dim, R):
        fv = ss_fourier(spec, p, v.v, tol)
        if fv.modulus > threshold + fv.tail_radius:
            return v, fv.modulus
    raise NotFound(f"no |mu^(v)| > {threshold} with |v| <= {R}")


def r0_tent_bound(N_eff: int, d: int) -> int:
    if N_eff < 2 or d < 1:
        raise ValueError("need N_eff >= 2 and d >= 1")
    return 2 ** (d + 1) * N_eff ** (2 * d)


@dataclass(frozen=True)
class R0Certificate:
    R0: int
    hole: HoleReport
    N_eff: int
    dim: int
    tail_sum_bound: float  # sum over |n| >= R0 of |psi^(n)|, plus the rounding margin
    tent_bound: int
    method: str = "tent"


def tent_coefficient(n: int, N_eff: int) -> float:
    """|psi^(n)| for the 1-D unit-mass tent of base 1/N_eff: sinc^2(pi n / (2 N_eff))."""
    if n == 0:
        return 1.0
    x = math.pi * n / (2 * N_eff)
    return (math.sin(x) / x) ** 2


class _TentSums:
    """sum of prod_j |psi^(n_j)| over n in Z^d with |n|^2 <= Q, by recursion on d."""

    def __init__(self, N_eff: int, d: int, reach: int):
        self.d = d
        acc = 1.0
        self.pref = [acc]  # pref[k] = sum over |n| <= k of the 1-D coefficients
        self.coef = [1.0]
        for n in range(1, reach + 1):
            c = tent_coefficient(n, N_eff)
            self.coef.append(c)
            acc += 2 * c
            self.pref.append(acc)
        self.ball = lru_cache(maxsize=None)(self._ball)

    def _ball(self, d: int, Q: int) -> float:
        if Q < 0:
            return 0.0
        k = math.isqrt(Q)
        if d == 1:
            return self.pref[k]
        s = self.ball(d - 1, Q)
        for n in range(1, k + 1):
            s += 2 * self.coef[n] * self.ball(d - 1, Q - n * n)
        return s


def tent_tail(N_eff: int, d: int, R: int, sums: _TentSums | None = None) -> float:
    """sum over n in Z^d with |n| >= R of |psi^(n)|; the full sum is (2 N_eff)^d."""
    if sums is None:
        sums = _TentSums(N_eff, d, R)
    inside = sums.ball(d, R * R - 1) if R > 0 else 0.0
    return (2 * N_eff) ** d - inside


def r0_certificate(spec: CarpetSpec, max_depth: int = 8) -> R0Certificate:
    """Smallest R0 with tent tail sum (plus a 1e-9 relative margin) below 1.

    If every coefficient of an invariant measure vanished on 0 < |n| < R0,
    the tent on the hole would give 1 <= tail(R0), so the certificate rules it out.
    """
    hole = find_hole(spec, max_depth)
    N_eff = spec.base**hole.depth
    d = spec.dim
    bound = r0_tent_bound(N_eff, d)
    total = (2 * N_eff) ** d
    margin = 1e-9 * total
    sums = _TentSums(N_eff, d, bound)

    def ok(R):
        return tent_tail(N_eff, d, R, sums) + margin < 1

    lo, hi = 1, bound
    if not ok(hi):
        raise ArithmeticError("tent tail does not drop below 1 within the tent bound")
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return R0Certificate(lo, hole, N_eff, d, tent_tail(N_eff, d, lo, sums) + margin, bound)


__all__ = [
    "NotFound", "FourierValue", "R0Certificate", "ss_fourier", "invariance_check", "fourier_scan",
    "find_nonvanishing", "r0_tent_bound", "r0_certificate", "tent_coefficient", "tent_tail", "tail_bound",
]
