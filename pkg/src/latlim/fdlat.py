"""The coordinatewise vector lattice Q^n.

Elements are plain tuples of fractions.  Dimension 0 (the empty tuple) is the
zero lattice and is accepted everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, PreconditionViolated
from .ratcore import ONE, ZERO, fmt_vec, in_span, rref, vadd, vec, vsub
from .report import Verdict


def _check(x, y):
    if len(x) != len(y):
        raise DimensionMismatch(f"elements of dimensions {len(x)} and {len(y)}")


def sup(x, y):
    _check(x, y)
    return tuple(max(a, b) for a, b in zip(x, y))


def inf(x, y):
    _check(x, y)
    return tuple(min(a, b) for a, b in zip(x, y))


def absolute(x):
    return tuple(abs(a) for a in x)


def pos_part(x):
    return tuple(max(a, ZERO) for a in x)


def neg_part(x):
    return tuple(max(-a, ZERO) for a in x)


def leq(x, y) -> bool:
    _check(x, y)
    return all(a <= b for a, b in zip(x, y))


def is_positive_element(x) -> bool:
    return all(a >= 0 for a in x)


def support(x) -> frozenset:
    """1-based coordinates where ``x`` is nonzero."""
    return frozenset(k + 1 for k, a in enumerate(x) if a != 0)


@dataclass(frozen=True)
class OrderInterval:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        if not leq(self.lower, self.upper):
            raise PreconditionViolated("order interval needs lower <= upper")

    def __contains__(self, x) -> bool:
        return leq(self.lower, x) and leq(x, self.upper)


@dataclass(frozen=True)
class IdealDescriptor:
    """The ideal {x : support(x) is contained in ``support``} of Q^dim."""

    dim: int
    support: frozenset

    def __post_init__(self):
        if not all(1 <= k <= self.dim for k in self.support):
            raise ValueError(f"support {sorted(self.support)} not inside 1..{self.dim}")

    def __contains__(self, x) -> bool:
        return len(x) == self.dim and all(a == 0 for k, a in enumerate(x) if k + 1 not in self.support)


def riesz_decompose(x, a, b):
    """Split ``0 <= x <= a + b`` as ``y + z`` with ``y`` in [0,a], ``z`` in [0,b].

    Uses ``y = x /\\ a``.
    """
    x, a, b = vec(x), vec(a), vec(b)
    _check(x, a)
    _check(x, b)
    if not (is_positive_element(a) and is_positive_element(b)):
        raise PreconditionViolated("riesz_decompose needs a >= 0 and b >= 0")
    if not (is_positive_element(x) and leq(x, vadd(a, b))):
        raise PreconditionViolated("riesz_decompose needs 0 <= x <= a + b")
    y = inf(x, a)
    return y, vsub(x, y)


def is_ideal(dim: int, basis) -> Verdict:
    """Decide whether span(basis) is an ideal of Q^dim.

    Ideals of Q^n are exactly the coordinate subspaces, so the span is an
    ideal iff its rank equals the size of the union of supports.  On failure
    the witness is a span element ``v`` and ``u`` with |u| <= |v| outside the
    span.
    """
    basis = [vec(b) for b in basis]
    for b in basis:
        if len(b) != dim:
            raise DimensionMismatch(f"basis vector of length {len(b)} in dimension {dim}")
    rows, _ = rref(basis)
    S = frozenset().union(*(support(r) for r in rows)) if rows else frozenset()
    if len(rows) == len(S):
        return Verdict(True, "structural", {"support": sorted(S)})
    for k in sorted(S):
        e_k = tuple(ONE if i == k - 1 else ZERO for i in range(dim))
        if not in_span(e_k, rows):
            v = next(b for b in basis if b[k - 1] != 0)
            u = tuple(v[k - 1] if i == k - 1 else ZERO for i in range(dim))
            return Verdict(False, "structural", {"v": fmt_vec(v), "u": fmt_vec(u), "coordinate": k})
    raise AssertionError("unreachable: rank below support size but every unit vector spanned")


def ideal_descriptor(verdict: Verdict, dim: int) -> IdealDescriptor:
    if not verdict.holds:
        raise ValueError("span is not an ideal")
    return IdealDescriptor(dim, frozenset(verdict.witness["support"]))
