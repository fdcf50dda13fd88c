import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tubenull.core import CarpetSpec
from tubenull.fourier import (
    NotFound, find_nonvanishing, fourier_scan, invariance_check, r0_certificate, r0_tent_bound, ss_fourier,
    tent_coefficient, tent_tail,
)
from tubenull.measures import BernoulliMeasure

U8 = BernoulliMeasure.uniform(8)


def grid_transform(spec, p, B, K=30):
    """Independent numpy evaluation of the product on the square |n|_inf <= B."""
    n = np.arange(-B, B + 1)
    X, Y = np.meshgrid(n, n, indexing="ij")
    val = np.ones(X.shape, complex)
    w = [float(x) for x in p.weights]
    for k in range(1, K + 1):
        phi = np.zeros(X.shape, complex)
        for (a, b), pk in zip(spec.digits, w):
            phi += pk * np.exp(-2j * np.pi * ((X * a + Y * b) % spec.base**k) / spec.base**k)
        val *= phi
    return X, Y, val


def test_zero_frequency(sierpinski):
    fv = ss_fourier(sierpinski, U8, (0, 0))
    assert fv.value == 1 and fv.tail_radius == 0 and fv.terms_used == 0


def test_diagonal_value_against_word_sum(sierpinski):
    # the depth-K product equals the average of e^{-2 pi i <xi, f_w(0)>} over all words of length K
    K = 6
    xi = np.array([1, 1])
    digits = np.array(sierpinski.digits)
    pts = np.zeros((1, 2))
    for k in range(1, K + 1):
        pts = (pts[:, None, :] + digits[None, :, :] / 3**k).reshape(-1, 2)
    partial = np.exp(-2j * np.pi * pts @ xi).mean()
    fv = ss_fourier(sierpinski, U8, (1, 1), tol=1e-9)
    assert fv.tail_radius < 1e-9 and fv.terms_used >= K
    assert abs(fv.value - partial) <= math.expm1(2 * math.pi * 2 / 3**K) + 1e-12
    assert abs(fv.value) > 0.05


def test_matches_grid_oracle(sierpinski):
    X, Y, val = grid_transform(sierpinski, U8, 3)
    for (i, j), want in np.ndenumerate(val):
        got = ss_fourier(sierpinski, U8, (int(X[i, j]), int(Y[i, j])), tol=1e-10)
        assert abs(got.value - want) <= got.tail_radius + 1e-12


def test_full_alphabet_vanishes():
    full = CarpetSpec(3, 2, [(a, b) for a in range(3) for b in range(3)], require_proper=False)
    for xi in [(1, 0), (1, 2), (-4, 7)]:
        assert abs(ss_fourier(full, BernoulliMeasure.uniform(9), xi).value) < 1e-9


def test_rejects_bad_input(sierpinski):
    with pytest.raises(ValueError):
        ss_fourier(sierpinski, U8, (1, 1), tol=0)
    with pytest.raises(ValueError):
        ss_fourier(sierpinski, BernoulliMeasure.uniform(3), (1, 1))
    with pytest.raises(ValueError):
        ss_fourier(sierpinski, U8, (1, 1, 1))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_invariance_diagonal(sierpinski, k):
    assert invariance_check(sierpinski, U8, (1, 1), k, tol=1e-9) <= 2e-9


def test_invariance_rejects(sierpinski):
    with pytest.raises(ValueError):
        invariance_check(sierpinski, U8, (0, 0), 1)
    with pytest.raises(ValueError):
        invariance_check(sierpinski, U8, (1, 0), 0)


def test_find_nonvanishing(sierpinski):
    v, mod = find_nonvanishing(sierpinski, U8, 4, 0.01)
    assert v.norm <= 4 and mod > 0.01


def test_find_nonvanishing_column_carpet():
    col = CarpetSpec(3, 2, [(0, 0), (1, 0), (2, 0)])
    v, mod = find_nonvanishing(col, BernoulliMeasure.uniform(3), 1, 0.01)
    assert v.v == (0, 1) and mod == 1.0


def test_find_nonvanishing_not_found(sierpinski):
    with pytest.raises(NotFound):
        find_nonvanishing(sierpinski, U8, 0, 0.01)
    with pytest.raises(NotFound):
        find_nonvanishing(sierpinski, U8, 2, 0.99)


def test_scan_order(sierpinski):
    vals = fourier_scan(sierpinski, U8, 2)
    assert [fv.xi for fv in vals] == [(0, 1), (1, 0), (1, -1), (1, 1)]


@pytest.mark.parametrize("N, d, bound", [(3, 2, 648), (2, 1, 16), (4, 2, 2048)])
def test_tent_bound(N, d, bound):
    assert r0_tent_bound(N, d) == bound


def test_tent_bound_rejects():
    with pytest.raises(ValueError):
        r0_tent_bound(1, 2)


def box_tail(N, d, R, B):
    """Sum over the box |n|_inf <= B with |n| >= R, and a bound on everything outside the box."""
    s = np.array([tent_coefficient(n, N) for n in range(-B, B + 1)])
    grids = np.meshgrid(*([np.arange(-B, B + 1)] * d), indexing="ij")
    r2 = sum(g * g for g in grids)
    prod = np.ones(r2.shape)
    for g in grids:
        prod *= s[g + B]
    inside = float(prod[r2 >= R * R].sum())
    rest = d * (2 * N) ** (d - 1) * 8 * N * N / (math.pi**2 * B)
    return inside, rest


@pytest.mark.parametrize("spec, expect", [
    (CarpetSpec(3, 2, [(a, b) for a in range(3) for b in range(3) if (a, b) != (1, 1)]), 45),
    (CarpetSpec(2, 1, [0]), 3),
    (CarpetSpec(4, 2, [(a, b) for a in range(4) for b in range(4) if (a, b) != (1, 1)]), 103),
])
def test_r0_certificate(spec, expect):
    cert = r0_certificate(spec)
    assert cert.R0 == expect
    assert cert.R0 <= r0_tent_bound(cert.N_eff, spec.dim) == cert.tent_bound
    assert cert.tail_sum_bound < 1
    B = 1500 if spec.dim == 2 else 200000
    inside, rest = box_tail(cert.N_eff, spec.dim, cert.R0, B)
    assert inside <= cert.tail_sum_bound <= inside + rest + 1e-6
    below, rest = box_tail(cert.N_eff, spec.dim, cert.R0 - 1, B)
    assert below + rest >= 1 - 1e-6  # R0 - 1 does not certify


def test_tent_sum_identity():
    # the 1-D coefficients sum to 2 N (Poisson summation of the tent)
    for N in (2, 3, 5):
        B = 10**6
        n = np.arange(1, B + 1)
        x = np.pi * n / (2 * N)
        total = 1 + 2 * float(np.sum((np.sin(x) / x) ** 2))
        assert total == pytest.approx(2 * N, abs=8 * N * N / (math.pi**2 * B) + 1e-9)
    assert tent_tail(3, 1, 0) == 6


def test_hole_depth_scales_base():
    spec = CarpetSpec(2, 1, [1])
    cert = r0_certificate(spec)
    assert cert.hole.depth == 1 and cert.N_eff == 2


def test_parseval_tent_against_measure(sierpinski):
    # spt(psi) lies in the hole, so sum_n psi^(n) conj(mu^(n)) = int psi dmu = 0
    sums = []
    for B in (5, 20, 40):
        X, Y, val = grid_transform(sierpinski, U8, B)
        s = np.vectorize(lambda n: tent_coefficient(int(n), 3))
        psi = np.exp(-1j * np.pi * (X + Y)) * s(X) * s(Y)
        sums.append(abs((psi * np.conj(val)).sum()))
    assert sums[0] < 0.02 and sums[-1] < 1e-3
    assert sums[-1] < sums[0]


cantor_like = st.builds(
    lambda digits: CarpetSpec(3, 2, digits),
    st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=8),
)


@settings(max_examples=40, deadline=None)
@given(cantor_like, st.tuples(st.integers(-20, 20), st.integers(-20, 20)), st.data())
def test_modulus_and_conjugate_symmetry(spec, xi, data):
    raw = data.draw(st.lists(st.integers(1, 9), min_size=spec.size, max_size=spec.size))
    mu = BernoulliMeasure(tuple(x / sum(raw) for x in raw))
    a = ss_fourier(spec, mu, xi, tol=1e-9)
    b = ss_fourier(spec, mu, tuple(-c for c in xi), tol=1e-9)
    assert abs(a.value) <= 1 + a.tail_radius
    assert abs(a.value - b.value.conjugate()) <= a.tail_radius + b.tail_radius + 1e-12


@settings(max_examples=30, deadline=None)
@given(cantor_like, st.tuples(st.integers(-9, 9), st.integers(-9, 9)).filter(any), st.integers(1, 3))
def test_invariance_property(spec, v, k):
    mu = BernoulliMeasure.uniform(spec.size)
    a = ss_fourier(spec, mu, [3**k * c for c in v], tol=1e-9)
    b = ss_fourier(spec, mu, v, tol=1e-9)
    assert abs(a.value - b.value) <= a.tail_radius + b.tail_radius + 1e-12


@settings(max_examples=15, deadline=None)
@given(cantor_like.filter(lambda s: s.size < 9))
def test_certificate_within_tent_bound(spec):
    cert = r0_certificate(spec)
    assert cert.R0 <= cert.tent_bound and cert.tail_sum_bound < 1
