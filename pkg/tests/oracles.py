"""Independent reference implementations used only by the tests.

None of these share the code paths they are compared against: LP feasibility
is decided by Fourier-Motzkin elimination, interval preservation by checking
every vertex of [0, Tx] straight from the definition, lattice homomorphisms
by |Tx| = T|x| on a grid, and ideals by closure under coordinate masks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from latlim.ratcore import FeasibilityProblem, in_span, lp_feasible

ZERO = Fraction(0)


def fm_feasible(A, b, lower, upper) -> bool:
    """Is ``{z : A z = b, lower <= z <= upper}`` nonempty?  (Fourier-Motzkin.)"""
    n = len(lower)
    ineqs = []  # (coeffs, rhs) meaning coeffs . z <= rhs
    for row, bi in zip(A, b):
        row = [Fraction(v) for v in row]
        ineqs.append((row, Fraction(bi)))
        ineqs.append(([-v for v in row], -Fraction(bi)))
    for k in range(n):
        e = [ZERO] * n
        if upper[k] is not None:
            e[k] = Fraction(1)
            ineqs.append((list(e), Fraction(upper[k])))
        if lower[k] is not None:
            e = [ZERO] * n
            e[k] = Fraction(-1)
            ineqs.append((e, -Fraction(lower[k])))
    for k in range(n):
        pos = [c for c in ineqs if c[0][k] > 0]
        neg = [c for c in ineqs if c[0][k] < 0]
        rest = [c for c in ineqs if c[0][k] == 0]
        for (p, pr), (q, qr) in itertools.product(pos, neg):
            a, m = p[k], -q[k]
            rest.append(([m * pv + a * qv for pv, qv in zip(p, q)], m * pr + a * qr))
        ineqs = _dedupe(rest)
    return all(rhs >= 0 for _, rhs in ineqs)


def _dedupe(ineqs):
    seen, out = set(), []
    for coeffs, rhs in ineqs:
        scale = next((abs(c) for c in coeffs if c != 0), None)
        if scale is not None:
            coeffs = [c / scale for c in coeffs]
            rhs = rhs / scale
        key = (tuple(coeffs), rhs)
        if key not in seen:
            seen.add(key)
            out.append((coeffs, rhs))
    return out


def mat_apply(A, x):
    return tuple(sum((a * v for a, v in zip(row, x)), ZERO) for row in A)


def all_vertices(c):
    """Every vertex of the box [0, c], zero coordinates included."""
    return [tuple(ci if bit else ZERO for ci, bit in zip(c, bits))
            for bits in itertools.product((0, 1), repeat=len(c))]


def ip_vertex_oracle(A, n_in, xs) -> bool:
    """``[0, Ax] subset A[0, x]`` for every x in ``xs``, vertex by vertex."""
    if any(v < 0 for row in A for v in row):
        return False
    zero = (ZERO,) * n_in
    for x in xs:
        for v in all_vertices(mat_apply(A, x)):
            if not lp_feasible(FeasibilityProblem(tuple(map(tuple, A)), v, zero, tuple(x))).feasible:
                return False
    return True


def hom_oracle(A, n_in) -> bool:
    """``|Ax| = A|x|`` for every x in {-1, 0, 1}^n (positive A)."""
    if any(v < 0 for row in A for v in row):
        return False
    for x in itertools.product((-1, 0, 1), repeat=n_in):
        ax = mat_apply(A, x)
        a_abs = mat_apply(A, [abs(v) for v in x])
        if tuple(abs(v) for v in ax) != a_abs:
            return False
    return True


def ideal_oracle(dim, basis, coeffs=(-1, 0, 1, 2)) -> bool:
    """span(basis) is closed under every coordinate mask of every small combination."""
    basis = [tuple(Fraction(v) for v in b) for b in basis]
    for cs in itertools.product(coeffs, repeat=len(basis)):
        v = [sum((c * b[k] for c, b in zip(cs, basis)), ZERO) for k in range(dim)]
        for mask in itertools.product((0, 1), repeat=dim):
            u = tuple(vk if m else ZERO for vk, m in zip(v, mask))
            if any(u) and not in_span(u, basis):
                return False
    return True
