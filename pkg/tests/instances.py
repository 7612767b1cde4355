"""Seeded instance generators shared by the harness tests and the acceptance run."""

import itertools
from fractions import Fraction

from latlim.latmaps import CommSquare, MatrixMap
from latlim.sampling import random_ip_matrix, random_matrix, rng_for

HALF_GRID = (Fraction(0), Fraction(1, 2), Fraction(1))


def all_matrices(n_out, n_in, values=HALF_GRID):
    for entries in itertools.product(values, repeat=n_out * n_in):
        yield MatrixMap(tuple(tuple(entries[r * n_in:(r + 1) * n_in]) for r in range(n_out)), n_in)


def _keep_rows(n, keep):
    return MatrixMap(tuple(tuple(Fraction(int(c == k)) for c in range(n)) for k in keep), n)


def pushdown_instance(seed):
    """A square whose vertical maps are quotients by coordinate ideals.

    The top map is a random positive matrix (IP about half the time).  The
    ideal J killed on the right contains the image of the ideal I killed on
    the left, so the bottom map is well defined and the square commutes.
    """
    rng = rng_for(seed, "pushdown")
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    if rng.random() < 0.5:
        top = MatrixMap(random_ip_matrix(rng, m, n), n)
    else:
        top = MatrixMap(random_matrix(rng, m, n), n)
    ideal = {k for k in range(n) if rng.random() < 0.4}
    killed = {r for k in ideal for r in range(m) if top.entries[r][k] != 0}
    killed |= {r for r in range(m) if rng.random() < 0.2}
    keep_e = [k for k in range(n) if k not in ideal]
    keep_f = [r for r in range(m) if r not in killed]
    left = _keep_rows(n, keep_e)
    right = _keep_rows(m, keep_f)
    bottom = MatrixMap(tuple(tuple(top.entries[r][k] for k in keep_e) for r in keep_f), len(keep_e))
    return CommSquare(top, left, right, bottom)


def _surjective_ip(rng, n, extra):
    """An IP matrix Q^(n+extra) -> Q^n hitting every coordinate."""
    cols = [random_ip_matrix(rng, n, 1, p_zero=0.0) for _ in range(extra)]
    rows = []
    for r in range(n):
        row = [Fraction(int(r == c)) * rng.choice((Fraction(1, 2), Fraction(1), Fraction(2))) for c in range(n)]
        row += [c[r][0] for c in cols]
        rows.append(tuple(row))
    return MatrixMap(tuple(rows), n + extra)


def factoring_instance(seed):
    """IP legs into Q^n, one of which is onto, and a random positive chi out of Q^n."""
    rng = rng_for(seed, "factoring")
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    legs = [MatrixMap(random_ip_matrix(rng, n, d), d) for d in (rng.randint(1, 3) for _ in range(rng.randint(0, 2)))]
    legs.append(_surjective_ip(rng, n, rng.randint(0, 1)))
    rng.shuffle(legs)
    chi = MatrixMap(random_matrix(rng, m, n), n)
    return legs, chi
