from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latlim.errors import DimensionMismatch, SupportTooLarge, Unbounded
from latlim.ratcore import (
    AffineExpr,
    FeasibilityProblem,
    argmin_linear_over_max,
    box_vertices,
    fmt_rat,
    in_span,
    lp_feasible,
    lp_minimize,
    minimize_linear_over_max,
    rank,
    rat,
)
from oracles import fm_feasible
from strategies import pos_rats, rats


def test_rat_parses_strings_and_rejects_floats():
    assert rat("3/4") == F(3, 4)
    assert rat(2) == F(2)
    assert fmt_rat(F(-1, 2)) == "-1/2"
    with pytest.raises((TypeError, ValueError)):
        rat(0.5)


def test_midpoint_system_is_feasible():
    p = FeasibilityProblem.box([["1/2", "1/2"]], ["1/2"], [0, 0], [1, 1])
    res = lp_feasible(p)
    assert res.feasible
    # a vertex solution is returned; any exact solution is acceptable
    assert p.satisfied_by(res.point)


def test_bound_violation_has_certificate():
    p = FeasibilityProblem.box([[1]], [2], [0], [1])
    res = lp_feasible(p)
    assert not res.feasible
    assert res.certificate.verify(p)
    assert res.certificate.bound_gap > 0


def test_truncated_average_vertex_reached_by_first_unit():
    A = [["1/2", "1/2", 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    p = FeasibilityProblem.box(A, ["1/2", 0, 0], [0] * 4, [1, 0, 0, 0])
    res = lp_feasible(p)
    assert res.feasible and res.point == (1, 0, 0, 0)


def test_empty_box_certificate():
    p = FeasibilityProblem.box([[1]], [0], [1], [0])
    res = lp_feasible(p)
    assert not res.feasible and res.certificate.empty_box == 0
    assert res.certificate.verify(p)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        FeasibilityProblem.box([[1, 2]], [1], [0], [1])


def test_minimize_and_unbounded():
    p = FeasibilityProblem.box([[1, 1]], [1], [0, 0], [None, None])
    assert lp_minimize([1, 2], p).value == 1
    with pytest.raises(Unbounded):
        lp_minimize([-1, 0], FeasibilityProblem.box([[1, -1]], [0], [0, 0], [None, None]))


@pytest.mark.parametrize("terms, expected", [
    ([AffineExpr.of([1, 0], -1), AffineExpr.of([0, 1], -1), AffineExpr.of(["1/2", "1/2"])], F(1, 2)),
    ([AffineExpr.of([1])], F(0)),
    ([AffineExpr.of([1], -1), AffineExpr.of([1], 1)], F(1)),
])
def test_minmax_examples(terms, expected):
    value, point = argmin_linear_over_max(terms)
    assert value == expected
    assert max(abs(t(point)) for t in terms) == expected


def test_minmax_respects_bounds():
    assert minimize_linear_over_max([AffineExpr.of([1], -5)], [(0, 2)]) == 3


def test_minmax_splits_independent_blocks():
    terms = [AffineExpr.of([1, 0, 0], -1), AffineExpr.of([0, 1, 1], 0), AffineExpr.of([0, 1, -1], -4)]
    bounds = [(None, None), (0, 1), (0, 1)]
    value, point = argmin_linear_over_max(terms, bounds)
    # y - z - 4 <= -3 on the box, attained at y = 1, z = 0
    assert value == 3 and point[1:] == (1, 0)
    assert max(abs(t(point)) for t in terms) == 3


@pytest.mark.parametrize("c, expected", [
    ((1, 0), {(0, 0), (1, 0)}),
    ((1, 2), {(0, 0), (1, 0), (0, 2), (1, 2)}),
])
def test_box_vertices_examples(c, expected):
    assert set(box_vertices(c)) == expected


def test_box_vertices_cap():
    with pytest.raises(SupportTooLarge):
        box_vertices((1, 1, 1), cap=4)


@given(st.lists(pos_rats, min_size=1, max_size=5))
def test_box_vertices_count_and_membership(c):
    vs = box_vertices(c)
    support = sum(1 for v in c if v != 0)
    assert len(set(vs)) == len(vs) == 2 ** support
    assert all(0 <= vi <= ci for v in vs for vi, ci in zip(v, c))


small_problem = st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.tuples(*[rats] * n), min_size=1, max_size=3),
    st.tuples(*[rats] * n),
    st.tuples(*[st.one_of(st.none(), rats)] * n),
    st.tuples(*[st.one_of(st.none(), pos_rats)] * n),
    st.lists(rats, min_size=3, max_size=3),
))


@given(small_problem)
def test_lp_feasible_matches_fourier_motzkin(data):
    A, z0, lower, upper_gap, b_noise = data
    n = len(z0)
    upper = tuple(None if g is None or lo is None else lo + g for lo, g in zip(lower, upper_gap))
    # half the problems are feasible by construction (b = A z0 with z0 clamped into the box)
    z = tuple(max(lo, min(v, hi)) if lo is not None and hi is not None else v
              for v, lo, hi in zip(z0, lower, upper))
    b = [sum(a * v for a, v in zip(row, z)) for row in A]
    if b_noise[0] > 0:
        b = [bi + e for bi, e in zip(b, b_noise)]
    p = FeasibilityProblem(tuple(map(tuple, A)), tuple(b), lower, upper)
    res = lp_feasible(p)
    assert res.feasible == fm_feasible(A, b, lower, upper)
    if res.feasible:
        assert p.satisfied_by(res.point)
        assert len(res.point) == n
    else:
        assert res.certificate.verify(p)


@given(small_problem)
def test_lp_feasible_is_deterministic(data):
    A, z0, lower, _, _ = data
    b = [sum(a * v for a, v in zip(row, z0)) for row in A]
    p = FeasibilityProblem(tuple(map(tuple, A)), tuple(b), lower, (None,) * len(z0))
    assert lp_feasible(p) == lp_feasible(p)


def test_rank_and_span():
    assert rank([(1, 1), (2, 2)]) == 1
    assert in_span((3, 3), [(1, 1)])
    assert not in_span((1, 0), [(1, 1)])
