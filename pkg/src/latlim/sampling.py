"""Seeded generators for exact random test data.

Every generator takes an explicit :class:`random.Random`; there is no module
level state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .seqlat import EPSeq, SpaceTag

SMALL_DENOMS = (1, 2, 3, 4)


def rng_for(seed: int, *salt) -> random.Random:
    """A generator derived deterministically from ``seed`` and ``salt``."""
    return random.Random(repr((seed,) + salt))


def random_rat(rng: random.Random, lo=-4, hi=4, positive=False) -> Fraction:
    if positive:
        lo = 0
    return Fraction(rng.randint(lo * 4, hi * 4), rng.choice(SMALL_DENOMS))


def random_vec(rng, n, positive=False, lo=-4, hi=4):
    return tuple(random_rat(rng, lo, hi, positive) for _ in range(n))


def random_unit_interval(rng) -> Fraction:
    d = rng.choice((1, 2, 3, 4, 5, 8))
    return Fraction(rng.randint(0, d), d)


def random_epseq(rng, tag: SpaceTag | None = None, positive=False, max_prefix=6, max_period=3) -> EPSeq:
    """Random sequence lying in the space named by ``tag`` (any EPSeq if None)."""
    prefix = [random_rat(rng, positive=positive) for _ in range(rng.randint(0, max_prefix))]
    kind = tag.kind if tag is not None else "linf"
    if kind in ("c00", "c0_closure_model", "lp"):
        period = [0]
    elif kind == "c":
        period = [random_rat(rng, positive=positive)]
    else:
        period = [random_rat(rng, positive=positive) for _ in range(rng.randint(1, max_period))]
    return EPSeq.of(prefix, period)


def random_c00(rng, max_len=8, positive=False) -> EPSeq:
    n = rng.randint(0, max_len)
    return EPSeq.finite([random_rat(rng, positive=positive) for _ in range(n)])


def random_ip_matrix(rng, n_out, n_in, values=(Fraction(1, 2), Fraction(1), Fraction(2)), p_zero=0.25):
    """Random positive matrix with at most one nonzero per column (hence interval preserving)."""
    rows = [[Fraction(0)] * n_in for _ in range(n_out)]
    for c in range(n_in):
        if n_out and rng.random() >= p_zero:
            rows[rng.randrange(n_out)][c] = rng.choice(values)
    return tuple(tuple(r) for r in rows)


def random_matrix(rng, n_out, n_in, values=(0, Fraction(1, 2), 1)):
    return tuple(tuple(Fraction(rng.choice(values)) for _ in range(n_in)) for _ in range(n_out))
