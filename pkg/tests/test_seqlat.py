import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latlim.errors import BadIndices, EmptyPeriod, UnsupportedNorm
from latlim.ratcore import mat_vec
from latlim.seqlat import (
    EPSeq,
    NormValue,
    SpaceTag,
    averaging_map,
    averaging_truncation,
    duplicate,
    ep_le,
    ep_norm,
    ep_pointwise,
    is_member,
    is_positive,
    stabilization_index,
    unit,
    xprime,
    xprime_truncation,
)
from strategies import epseqs, finite_seqs, pos_rats

ALT = EPSeq.of((), (1, -1))
ONES = EPSeq.constant(1)
indices = st.integers(1, 8)


def terms(s, n):
    return [s[k] for k in range(n)]


@pytest.mark.parametrize("raw, prefix, period", [
    (EPSeq((1,), (0, 0)), (1,), (0,)),
    (EPSeq((1, 0), (0,)), (1,), (0,)),
    (EPSeq((), (1, -1)), (), (1, -1)),
])
def test_normal_form_examples(raw, prefix, period):
    c = raw.canonical()
    assert c.prefix == prefix and c.period == period


def test_empty_period_rejected():
    with pytest.raises(EmptyPeriod):
        EPSeq((1,), ())


@given(epseqs())
def test_normal_form_preserves_terms_and_is_idempotent(s):
    raw = EPSeq(s.prefix + s.period[:1], s.period[1:] + s.period[:1] + s.period[1:] + s.period[:1])
    c = raw.canonical()
    assert terms(c, 20) == terms(raw, 20)
    assert c.canonical().prefix == c.prefix and c.canonical().period == c.period
    assert len(c.prefix) <= len(raw.prefix) and len(c.period) <= len(raw.period)


def test_pointwise_examples():
    assert ALT | EPSeq.zero() == EPSeq.of((), (1, 0))
    assert ONES + EPSeq.constant(-1) == EPSeq.zero()
    s = ep_pointwise("sup", EPSeq.of((1,), (0,)), EPSeq.of((), (0, 2)))
    assert terms(s, 7) == [1, 2, 0, 2, 0, 2, 0]


@pytest.mark.parametrize("op, f", [("sup", max), ("inf", min), ("add", lambda a, b: a + b)])
@given(s=epseqs(), t=epseqs())
def test_pointwise_matches_termwise(op, f, s, t):
    n = max(len(s.prefix), len(t.prefix)) + 2 * math.lcm(len(s.period), len(t.period))
    assert terms(ep_pointwise(op, s, t), n) == [f(a, b) for a, b in zip(terms(s, n), terms(t, n))]


@given(epseqs(), epseqs())
def test_lattice_identities(s, t):
    assert (s | t) + (s & t) == s + t
    assert ep_le(s & t, s) and ep_le(s, s | t)
    assert is_positive(abs(s))


@pytest.mark.parametrize("s, tag, value", [
    (ALT, "inf", NormValue("exact", F(1))),
    (EPSeq.finite((3, -4)), 1, NormValue("exact", F(7))),
    (ONES, 1, NormValue("infinite")),
    (EPSeq.finite((3, 4)), 2, NormValue("exact_sqrt", F(25))),
])
def test_norm_examples(s, tag, value):
    assert ep_norm(s, tag) == value


def test_unsupported_norm():
    with pytest.raises(UnsupportedNorm):
        ep_norm(ONES, 3)


@pytest.mark.parametrize("s, kind, member", [
    (ALT, "linf", True),
    (ALT, "c", False),
    (EPSeq.finite((5,)), "c00", True),
    (ONES, "c", True),
    (ONES, "c0_closure_model", False),
])
def test_membership(s, kind, member):
    v = is_member(s, SpaceTag(kind))
    assert v.holds == member and v.method == "structural"


def test_averaging_examples():
    assert averaging_map(1, 2, EPSeq.finite((1, 1))) == unit(1)
    assert averaging_map(3, 3, ALT) == ALT
    assert averaging_map(1, 2, ALT) == EPSeq.of((0,), (1, -1))
    with pytest.raises(BadIndices):
        averaging_map(3, 2, ALT)


@given(st.tuples(pos_rats, pos_rats, pos_rats, pos_rats, pos_rats))
def test_averaging_first_block(x):
    s = EPSeq.finite(x)
    assert terms(averaging_map(1, 2, s), 4) == [(x[0] + x[1]) / 2, x[2], x[3], x[4]]


def test_xprime_examples():
    assert xprime(1, EPSeq.finite((1, 1))) == unit(1)
    a, b, c = F(2), F(-1), F(5)
    assert xprime(3, EPSeq.of((a, b), (c,))) == EPSeq.of((a, b), (c,))
    assert xprime(1, ALT) == EPSeq.zero()


@given(st.lists(indices, min_size=3, max_size=3), epseqs())
def test_cocycle(ijk, s):
    i, j, k = sorted(ijk)
    assert averaging_map(j, k, averaging_map(i, j, s)) == averaging_map(i, k, s)


@given(indices, indices, epseqs())
def test_xprime_factors_through_edges(i, d, s):
    j = i + d
    assert xprime(j, averaging_map(i, j, s)) == xprime(i, s)


@given(indices, indices, epseqs())
def test_averaging_contracts_sup_norm(i, d, s):
    assert ep_norm(averaging_map(i, i + d, s), "inf") <= ep_norm(s, "inf")


@given(indices, indices, finite_seqs())
def test_averaging_contracts_l1(i, d, s):
    assert ep_norm(averaging_map(i, i + d, s), 1) <= ep_norm(s, 1)


@given(indices, indices, epseqs(pos_rats))
def test_averaging_is_positive(i, d, s):
    assert is_positive(averaging_map(i, i + d, s))


@given(indices, finite_seqs())
def test_l1_norm_of_xprime_is_limit_of_edges(i, s):
    j0 = stabilization_index(i, s)
    norms = {ep_norm(averaging_map(i, j, s), 1) for j in range(j0, j0 + 5)}
    assert norms == {ep_norm(xprime(i, s), 1)}


@given(indices, epseqs(), st.sampled_from([1, 2, "inf"]))
def test_norm_is_constant_past_stabilization(i, s, p):
    j0 = stabilization_index(i, s)
    assert j0 >= i
    norms = {ep_norm(averaging_map(i, j, s), p) for j in range(j0, j0 + 5)}
    assert len(norms) == 1


@given(indices, epseqs())
def test_duplicate_is_right_inverse(i, s):
    assert xprime(i, duplicate(i, s)) == s


@given(indices, st.integers(0, 4), st.integers(1, 8), epseqs())
def test_truncation_matrices_agree_with_maps(i, d, n, s):
    j = i + d
    rows, n_in = averaging_truncation(i, j, n)
    assert list(mat_vec(rows, s.take(n_in))) == terms(averaging_map(i, j, s), n)
    rows, n_in = xprime_truncation(i, n)
    assert list(mat_vec(rows, s.take(n_in))) == terms(xprime(i, s), n)


def test_dict_round_trip():
    s = EPSeq.of(("1/2",), (1, -1))
    assert EPSeq.from_dict(s.to_dict()) == s
    assert s.to_dict() == {"prefix": ["1/2"], "period": ["1", "-1"]}
