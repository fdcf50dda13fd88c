import itertools
import math
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from tubenull.core import CarpetSpec, carpet_to_ifs
from tubenull.measures import (
    BernoulliMeasure, dimension_drop_scan, entropy_dimension_estimate, entropy_lower_bound_dim, garsia_gap,
    offset_partition_entropy, partition_level, pushforward_weights, scale_entropy, shannon_entropy,
    subadditivity_probe,
)
from tubenull.projection import level_offsets, project_ifs, projected_word_offset

H3 = shannon_entropy([3 / 8, 1 / 4, 3 / 8])


def brute_partition_entropy(pifs, mu_v, h):
    # group reduced words by their exact offset, one word at a time
    mass = defaultdict(Fraction)
    for word in itertools.product(range(pifs.size), repeat=h):
        w = Fraction(1)
        for c in word:
            w *= Fraction(mu_v.weights[c])
        mass[projected_word_offset(pifs, word)] += w
    return shannon_entropy(mass.values())


def projected(spec, v, mu=None):
    pifs = project_ifs(carpet_to_ifs(spec), v)
    mu = BernoulliMeasure.uniform(spec.size) if mu is None else mu
    return pifs, pushforward_weights(mu, pifs.classes)


def test_shannon_examples():
    assert shannon_entropy([1 / 8] * 8) == 3.0
    assert shannon_entropy([Fraction(1, 8), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 8)]) == 2.25
    assert shannon_entropy([1, 0, 0]) == 0.0


def test_measure_validation():
    with pytest.raises(ValueError):
        BernoulliMeasure((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        BernoulliMeasure((0.5, 0.5 + 1e-9))
    with pytest.raises(ValueError):
        BernoulliMeasure((Fraction(3, 2), Fraction(-1, 2)))
    with pytest.raises(ValueError):
        BernoulliMeasure(())
    assert BernoulliMeasure((0.5, 0.5 + 1e-13)).size == 2
    assert BernoulliMeasure.uniform(4).exact and not BernoulliMeasure.uniform(4, exact=False).exact


def test_pushforward_examples(sierpinski):
    _, diag = projected(sierpinski, (1, 1))
    assert diag.weights == (Fraction(1, 8), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 8))
    _, axis = projected(sierpinski, (1, 0))
    assert axis.weights == (Fraction(3, 8), Fraction(1, 4), Fraction(3, 8))
    mu = BernoulliMeasure((0.2, 0.3, 0.5))
    assert pushforward_weights(mu, [[0], [1], [2]]).weights == mu.weights
    with pytest.raises(ValueError):
        pushforward_weights(mu, [[0], [1]])


def test_offset_partition_entropy_axis(sierpinski):
    pifs, mu = projected(sierpinski, (1, 0))
    assert offset_partition_entropy(pifs, mu, 0) == 0
    assert offset_partition_entropy(pifs, mu, 1) == pytest.approx(1.5613, abs=1e-4)
    assert offset_partition_entropy(pifs, mu, 2) == pytest.approx(2 * H3, abs=1e-12)
    assert len(level_offsets(pifs, 2)) == 9


@pytest.mark.parametrize("v, h", [((1, 1), 3), ((1, 1), 4), ((2, 1), 3), ((1, -1), 3)])
def test_offset_partition_entropy_brute(sierpinski, v, h):
    pifs, mu = projected(sierpinski, v)
    assert offset_partition_entropy(pifs, mu, h) == pytest.approx(brute_partition_entropy(pifs, mu, h), abs=1e-12)
    assert offset_partition_entropy(pifs, mu, h, exact=True) == pytest.approx(
        brute_partition_entropy(pifs, mu, h), abs=1e-12)


def test_partition_level():
    assert partition_level(Fraction(1, 3), 8) == 5
    assert partition_level(Fraction(1, 3), 1) == 0
    assert partition_level(Fraction(1, 2), 8) == 8
    assert partition_level(Fraction(3, 10), 10) == 5


def test_scale_entropy_axis(sierpinski):
    pifs, mu = projected(sierpinski, (1, 0))
    est, radius = scale_entropy(pifs, mu, 8)
    assert est == pytest.approx(5 * H3, abs=1e-12)
    assert est == pytest.approx(7.807, abs=1e-3)
    assert radius == 2.0  # M1 = 1 and 1 + 1/r = 4


def test_scale_entropy_diagonal(sierpinski):
    pifs, mu = projected(sierpinski, (1, 1))
    est, radius = scale_entropy(pifs, mu, 8)
    assert est == pytest.approx(brute_partition_entropy(pifs, mu, 5), abs=1e-12)
    assert radius >= 2.0
    with pytest.raises(ValueError):
        scale_entropy(pifs, mu, 0)


def test_dimension_axis_direction(sierpinski):
    pifs, mu = projected(sierpinski, (1, 0))
    rep = entropy_dimension_estimate(pifs, mu, range(1, 16))
    assert rep.dim_estimate == pytest.approx(H3 / math.log2(3), abs=1e-9)
    assert rep.dim_estimate == pytest.approx(0.985, abs=0.005)
    assert rep.dim_lower <= rep.dim_estimate <= rep.dim_upper


def test_dimension_lebesgue_and_degenerate():
    full = CarpetSpec(3, 1, [0, 1, 2], require_proper=False)
    pifs = project_ifs(carpet_to_ifs(full), (1,))
    rep = entropy_dimension_estimate(pifs, BernoulliMeasure.uniform(3), [3, 6, 9])
    assert rep.dim_estimate == pytest.approx(1.0, abs=1e-12)
    assert garsia_gap(rep) == pytest.approx(0.0, abs=1e-12)
    deg = entropy_dimension_estimate(pifs, BernoulliMeasure((1, 0, 0)), [3, 6, 9])
    assert deg.dim_estimate == 0.0
    assert garsia_gap(deg) == pytest.approx(deg.rows[-1].h * math.log2(3))


def test_garsia_gap_grows_for_singular(sierpinski):
    pifs, mu = projected(sierpinski, (1, 0))
    rep = entropy_dimension_estimate(pifs, mu, [5, 10, 15])
    gaps = [r.garsia_gap for r in rep.rows]
    assert gaps == sorted(gaps)
    assert gaps[-1] == pytest.approx((1 - H3 / math.log2(3)) * rep.rows[-1].h * math.log2(3), abs=1e-9)
    assert garsia_gap(rep) == gaps[-1]


def test_entropy_report_validation(sierpinski):
    pifs, mu = projected(sierpinski, (1, 0))
    with pytest.raises(ValueError):
        entropy_dimension_estimate(pifs, mu, [])
    with pytest.raises(ValueError):
        entropy_dimension_estimate(pifs, mu, [5, 3])
    with pytest.raises(ValueError):
        entropy_dimension_estimate(pifs, BernoulliMeasure.uniform(4), [3])


def test_entropy_lower_bound_dim():
    assert entropy_lower_bound_dim(2.0, Fraction(1, 4), 1) == 1.0
    assert entropy_lower_bound_dim(2.25, Fraction(1, 3), 5) == pytest.approx(-0.0454, abs=1e-3)
    assert entropy_lower_bound_dim(math.log2(3), Fraction(1, 3), 1) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        entropy_lower_bound_dim(1.0, Fraction(1, 2), 0)


def test_subadditivity_diagonal(sierpinski):
    pifs, mu = projected(sierpinski, (1, 1))
    rows = subadditivity_probe(pifs, mu, [(1, 1), (3, 3), (0, 4), (2, 5)])
    assert all(r.holds for r in rows)
    assert rows[1].slack > 0
    assert rows[2].slack == pytest.approx(0.0, abs=1e-12)


def test_drop_scan_sierpinski(sierpinski):
    res = dimension_drop_scan(sierpinski, BernoulliMeasure.uniform(8), 1)
    assert res.direction.v == (0, 1)
    assert res.dim_upper == pytest.approx(0.985, abs=0.005)
    assert res.drop == pytest.approx(1 - res.dim_upper)


def test_drop_scan_product_measure():
    # Lebesgue times the middle-thirds Cantor measure: the vertical projection drops to log 2 / log 3
    spec = CarpetSpec(3, 2, [(a, b) for a in range(3) for b in (0, 2)])
    res = dimension_drop_scan(spec, BernoulliMeasure.uniform(6), 1, n_list=[6, 12])
    assert res.direction.v == (0, 1)
    assert res.dim_upper == pytest.approx(math.log(2) / math.log(3), abs=1e-9)
    assert dict((v.v, r.dim_upper) for v, r in res.reports)[(1, 0)] == pytest.approx(1.0, abs=1e-9)


def test_drop_scan_rejects(sierpinski):
    with pytest.raises(ValueError):
        dimension_drop_scan(sierpinski, BernoulliMeasure.uniform(8), 0)
    with pytest.raises(ValueError):
        dimension_drop_scan(sierpinski, BernoulliMeasure.uniform(3), 1)


prob_vectors = st.lists(st.integers(1, 20), min_size=2, max_size=6).map(
    lambda xs: [x / sum(xs) for x in xs])


@settings(max_examples=60, deadline=None)
@given(st.lists(prob_vectors, min_size=2, max_size=4), st.data())
def test_entropy_convexity(components, data):
    k = max(len(c) for c in components)
    comps = [c + [0.0] * (k - len(c)) for c in components]
    p = data.draw(prob_vectors.filter(lambda v: len(v) == len(comps)) | st.just([1 / len(comps)] * len(comps)))
    mix = [sum(pi * c[j] for pi, c in zip(p, comps)) for j in range(k)]
    rhs = shannon_entropy(p) + sum(pi * shannon_entropy(c) for pi, c in zip(p, comps))
    assert shannon_entropy(mix) <= rhs + 1e-12
    assert shannon_entropy(mix) >= sum(pi * shannon_entropy(c) for pi, c in zip(p, comps)) - 1e-12


@settings(max_examples=60, deadline=None)
@given(prob_vectors, st.integers(1, 4), st.randoms(use_true_random=False))
def test_refinement_bound(cells, M, rnd):
    # A groups the cells of B at most M at a time, so the two partitions meet in at most M ways
    idx = list(range(len(cells)))
    rnd.shuffle(idx)
    groups, i = [], 0
    while i < len(idx):
        size = rnd.randint(1, M)
        groups.append(idx[i:i + size])
        i += size
    coarse = [sum(cells[j] for j in g) for g in groups]
    assert abs(shannon_entropy(cells) - shannon_entropy(coarse)) <= math.log2(M) + 1e-12


carpets = st.builds(
    lambda digits: CarpetSpec(3, 2, digits),
    st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=2, max_size=8),
)


@settings(max_examples=40, deadline=None)
@given(carpets, st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any), st.integers(1, 4), st.data())
def test_partition_entropy_bounds_and_additivity(spec, v, n, data):
    pifs = project_ifs(carpet_to_ifs(spec), v)
    raw = data.draw(st.lists(st.integers(1, 9), min_size=spec.size, max_size=spec.size))
    mu = BernoulliMeasure(tuple(Fraction(x, sum(raw)) for x in raw))
    mu_v = pushforward_weights(mu, pifs.classes)
    H = offset_partition_entropy(pifs, mu_v, n)
    assert -1e-12 <= H <= n * math.log2(pifs.size) + 1e-12
    if len(level_offsets(pifs, n)) == pifs.size**n:
        assert H == pytest.approx(n * offset_partition_entropy(pifs, mu_v, 1), abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(carpets, st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any))
def test_dimension_estimate_in_unit_interval(spec, v):
    pifs, mu = projected(spec, v)
    rep = entropy_dimension_estimate(pifs, mu, [2, 4, 6])
    assert 0.0 <= rep.dim_lower <= rep.dim_estimate <= rep.dim_upper <= 1.0


@settings(max_examples=25, deadline=None)
@given(carpets, st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any), st.integers(0, 4), st.integers(0, 4))
def test_subadditivity_property(spec, v, n, m):
    assume(n + m <= 6)
    pifs, mu = projected(spec, v)
    assert subadditivity_probe(pifs, mu, [(n, m)])[0].holds
