import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latlim.errors import DimensionMismatch, PreconditionViolated
from latlim.fdlat import (
    OrderInterval,
    absolute,
    ideal_descriptor,
    inf,
    is_ideal,
    leq,
    neg_part,
    pos_part,
    riesz_decompose,
    sup,
)
from latlim.ratcore import FeasibilityProblem, lp_feasible, vadd
from oracles import ideal_oracle
from strategies import pos_rats, rats, vectors


def test_lattice_operations():
    assert sup((1, -1), (0, 0)) == (1, 0)
    assert absolute((-2, 3)) == (2, 3)
    assert inf((1, 2), (2, 1)) == (1, 1)
    with pytest.raises(DimensionMismatch):
        sup((1,), (1, 2))


@given(vectors(3))
def test_positive_and_negative_parts(x):
    assert vadd(pos_part(x), tuple(-v for v in neg_part(x))) == x
    assert inf(pos_part(x), neg_part(x)) == (0, 0, 0)
    assert absolute(x) == vadd(pos_part(x), neg_part(x))


@pytest.mark.parametrize("x, a, b, expected", [
    ((1, 1), (1, 0), (0, 1), ((1, 0), (0, 1))),
    ((1,), (1,), (1,), ((1,), (0,))),
    ((F(3, 2),), (1,), (1,), ((1,), (F(1, 2),))),
])
def test_riesz_examples(x, a, b, expected):
    assert riesz_decompose(x, a, b) == expected


def test_riesz_precondition():
    with pytest.raises(PreconditionViolated):
        riesz_decompose((3,), (1,), (1,))


@given(vectors(3, pos_rats), vectors(3, pos_rats), st.tuples(*[st.fractions(0, 1)] * 3))
def test_riesz_postconditions(a, b, t):
    x = tuple(ti * (ai + bi) for ti, ai, bi in zip(t, a, b))
    y, z = riesz_decompose(x, a, b)
    assert vadd(y, z) == x
    assert all(0 <= v for v in y + z)
    assert leq(y, a) and leq(z, b)


@given(vectors(2, pos_rats), vectors(2, pos_rats), st.tuples(*[st.fractions(0, 1)] * 2))
def test_interval_sum_both_inclusions(a, b, t):
    # [0,a] + [0,b] contains [0,a+b]: a point of the right side splits (LP membership)
    x = tuple(ti * (ai + bi) for ti, ai, bi in zip(t, a, b))
    A = ((1, 0, 1, 0), (0, 1, 0, 1))
    p = FeasibilityProblem.box(A, x, [0] * 4, list(a) + list(b))
    assert lp_feasible(p).feasible
    # and the sum of points of [0,a], [0,b] lies in [0,a+b]
    y = tuple(ti * ai for ti, ai in zip(t, a))
    z = tuple(ti * bi for ti, bi in zip(t, b))
    assert vadd(y, z) in OrderInterval((0, 0), vadd(a, b))


@pytest.mark.parametrize("dim, basis, holds, support", [
    (2, [(1, 0)], True, [1]),
    (2, [(1, 1)], False, None),
    (3, [(1, 0, 0), (0, 0, 2)], True, [1, 3]),
])
def test_is_ideal_examples(dim, basis, holds, support):
    v = is_ideal(dim, basis)
    assert v.holds == holds
    if holds:
        assert v.witness["support"] == support
        assert ideal_descriptor(v, dim).support == frozenset(support)
    else:
        assert v.witness["v"] == ["1", "1"] and v.witness["u"] == ["1", "0"]


def _families(dim):
    vectors01 = [v for v in itertools.product((0, 1), repeat=dim) if any(v)]
    for k in range(0, dim + 1):
        yield from itertools.combinations(vectors01, k)


@pytest.mark.parametrize("dim", [2, 3])
def test_is_ideal_matches_definition_exhaustively(dim):
    for basis in _families(dim):
        assert is_ideal(dim, basis).holds == ideal_oracle(dim, basis), basis


@given(st.lists(vectors(3, rats), max_size=3))
def test_is_ideal_failure_witness_is_valid(basis):
    v = is_ideal(3, basis)
    if not v.holds:
        vv = tuple(F(s) for s in v.witness["v"])
        u = tuple(F(s) for s in v.witness["u"])
        assert leq(absolute(u), absolute(vv))
