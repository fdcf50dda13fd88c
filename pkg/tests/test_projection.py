import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tubenull.core import BudgetExceeded, CarpetSpec, HomIfsSpec, carpet_to_ifs, word_translation
from tubenull.projection import (
    Direction, choose_high_level, exact_overlap_directions, level_offsets, overlap_classes,
    overlap_multiplicity, primitive_directions, project_ifs, projected_word_offset, reduce_word,
    scaled_levels, wsc_check,
)


def brute_offsets(ifs, v, n):
    d = Direction.of(v)
    return sorted({d.dot(word_translation(ifs, w)) for w in itertools.product(range(ifs.size), repeat=n)})


def test_direction_validation():
    with pytest.raises(ValueError):
        Direction((0, 0))
    with pytest.raises(ValueError):
        Direction((2, 2))
    with pytest.raises(ValueError):
        Direction((-1, 1))
    assert Direction.of((-2, 2)).v == (1, -1)
    assert Direction.of((0, -3)).v == (0, 1)
    assert str(Direction((1, -1))) == "(1,-1)"


def test_primitive_directions_small():
    assert [d.v for d in primitive_directions(2, 1)] == [(0, 1), (1, 0)]
    assert [d.v for d in primitive_directions(2, 2)] == [(0, 1), (1, 0), (1, -1), (1, 1)]
    assert len(primitive_directions(2, 1, norm="sup")) == 4
    assert primitive_directions(2, 0) == []


@pytest.mark.parametrize("d, R", [(2, 3), (2, 5), (3, 2)])
def test_primitive_directions_count(d, R):
    # independent count: nonzero primitive vectors in the ball, halved for the sign
    count = sum(1 for v in itertools.product(range(-R, R + 1), repeat=d)
                if any(v) and sum(c * c for c in v) <= R * R and math.gcd(*v) == 1)
    assert len(primitive_directions(d, R)) == count // 2


def test_sierpinski_diagonal_classes(sierpinski):
    pifs = project_ifs(carpet_to_ifs(sierpinski), (1, 1))
    assert sorted(len(c) for c in pifs.classes) == [1, 1, 2, 2, 2]
    assert pifs.hull == (0, 2)
    assert pifs.offsets == tuple(Fraction(k, 3) for k in range(5))


def test_sierpinski_axis_classes(sierpinski):
    pifs = project_ifs(carpet_to_ifs(sierpinski), (1, 0))
    assert [len(c) for c in pifs.classes] == [3, 2, 3]
    assert pifs.hull == (0, 1)


def test_classes_are_a_partition(triangle):
    for v in [(1, 0), (1, 1), (2, -1)]:
        classes = overlap_classes(triangle, v)
        assert sorted(i for c in classes for i in c) == list(range(triangle.size))


def test_level_offsets_diagonal_n2(sierpinski):
    ifs = carpet_to_ifs(sierpinski)
    pifs = project_ifs(ifs, (1, 1))
    offs = level_offsets(pifs, 2)
    assert len(offs) == 17
    assert offs == brute_offsets(ifs, (1, 1), 2)


@pytest.mark.parametrize("v, n", [((1, 0), 3), ((2, 1), 3), ((1, -2), 2)])
def test_level_offsets_against_brute(sierpinski, v, n):
    ifs = carpet_to_ifs(sierpinski)
    assert level_offsets(project_ifs(ifs, v), n) == brute_offsets(ifs, v, n)


def test_level_offsets_general_ifs(triangle):
    assert level_offsets(project_ifs(triangle, (1, 1)), 4) == brute_offsets(triangle, (1, 1), 4)


def test_scaled_levels_masses(sierpinski):
    pifs = project_ifs(carpet_to_ifs(sierpinski), (1, 1))
    w = [Fraction(1, 8), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 8)]
    vals, masses, _ = scaled_levels(pifs, 3, masses=w)
    assert sum(masses) == 1
    fvals, fmasses, _ = scaled_levels(pifs, 3, masses=[float(x) for x in w])
    assert [int(x) for x in fvals] == vals
    assert all(abs(float(a) - b) < 1e-15 for a, b in zip(masses, fmasses))


def test_scaled_levels_budget(sierpinski):
    pifs = project_ifs(carpet_to_ifs(sierpinski), (1, 7))
    with pytest.raises(BudgetExceeded):
        scaled_levels(pifs, 6, budget=1000)


def test_reduce_word_and_offset(sierpinski):
    ifs = carpet_to_ifs(sierpinski)
    pifs = project_ifs(ifs, (1, 1))
    word = (0, 7, 3, 4)
    k = reduce_word(pifs, word)
    assert projected_word_offset(pifs, k) == pifs.direction.dot(word_translation(ifs, word))
    with pytest.raises(ValueError):
        reduce_word(pifs, (8,))


def test_wsc_diagonal_depth2(sierpinski):
    rep = wsc_check(carpet_to_ifs(sierpinski), (1, 1), 2)
    assert rep.integral and rep.scaled_min_gap == 1
    assert rep.distinct_counts == (1, 5, 17)


def test_wsc_rejects_non_carpet(triangle):
    with pytest.raises(ValueError):
        wsc_check(triangle, (1, 1), 2)


def test_wsc_single_point():
    rep = wsc_check(carpet_to_ifs(CarpetSpec(2, 1, [1])), (1,), 3)
    assert rep.scaled_min_gap is math.inf and rep.integral


def test_overlap_directions_triangle(triangle):
    got = [(p, v.v) for p, v in exact_overlap_directions(triangle)]
    assert got == [((0, 1), (0, 1)), ((0, 2), (1, 0)), ((1, 2), (1, 1))]


def test_overlap_directions_need_dim_two():
    with pytest.raises(ValueError):
        exact_overlap_directions(HomIfsSpec(Fraction(1, 3), [(0,), (1,)]))


def test_overlap_multiplicity_closed_semantics(sierpinski):
    ifs = carpet_to_ifs(sierpinski)
    assert overlap_multiplicity(project_ifs(ifs, (1, 0))).multiplicity == 3
    assert overlap_multiplicity(project_ifs(ifs, (1, 1))).multiplicity == 5


@pytest.mark.parametrize("v", [(1, 0), (1, 1), (1, -1), (2, 1), (1, 2), (3, 1), (3, -2)])
def test_overlap_multiplicity_bound(sierpinski, v):
    # touching intervals at both ends add one to the 2 sqrt(d) R0 count
    rep = overlap_multiplicity(project_ifs(carpet_to_ifs(sierpinski), v))
    assert rep.multiplicity <= rep.bound_2sqrtd_R0 + 1


def test_choose_high_level():
    assert choose_high_level(648, 0.1, 3, 2) == 137
    assert choose_high_level(648, 0.2, 3, 2) == 69
    with pytest.raises(ValueError):
        choose_high_level(0, 0.1, 3, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5000), st.floats(0.01, 1.0), st.integers(2, 7), st.integers(1, 4))
def test_choose_high_level_is_minimal(R0, delta, N, d):
    m = choose_high_level(R0, delta, N, d)
    lhs = math.log2(2 * math.sqrt(d) * R0) / math.log2(N)
    assert lhs / m < delta / 2
    assert m == 1 or lhs / (m - 1) >= delta / 2


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(rationals, rationals, rationals), min_size=2, max_size=4, unique=True))
def test_overlap_directions_orthogonal_3d(trans):
    ifs = HomIfsSpec(Fraction(1, 3), trans)
    for (i, j), v in exact_overlap_directions(ifs):
        assert v.dot(ifs.translations[i]) == v.dot(ifs.translations[j])
        assert math.gcd(*v.v) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=2, max_size=8, unique=True),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any), st.integers(1, 3))
def test_wsc_holds_for_every_carpet(digits, v, n):
    spec = CarpetSpec(4, 2, digits)
    rep = wsc_check(carpet_to_ifs(spec), v, n)
    assert rep.integral
    assert rep.scaled_min_gap is math.inf or rep.scaled_min_gap >= 1
