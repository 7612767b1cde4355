"""Exact rational arithmetic and a small exact LP kernel.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are tuples of row tuples.  Nothing in this module touches floating
point, so every verdict built on top of it is an exact statement.

The LP kernel is a dense two-phase simplex with Bland's rule.  It is meant
for the tiny systems produced by the lattice checkers (a handful of rows),
not for general-purpose optimization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, ParseError, SupportTooLarge, Unbounded

Rat = Fraction
RatVec = tuple  # tuple[Fraction, ...]
RatMat = tuple  # tuple[RatVec, ...], row-major

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# scalars and serialization
# ---------------------------------------------------------------------------

def rat(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, fractions and strings of the form ``"n"`` or ``"n/d"``.
    Floats are rejected: a float has already lost the exact value.
    """
    if isinstance(value, bool):
        raise ParseError(f"booleans are not rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ParseError(f"not a rational string: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational string: {value!r}") from exc
    raise ParseError(f"cannot read {type(value).__name__} {value!r} as a rational")


def fmt_rat(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(values) -> RatVec:
    return tuple(rat(v) for v in values)


def mat(rows) -> RatMat:
    rows = tuple(vec(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("ragged matrix rows")
    return rows


def fmt_vec(v) -> list:
    return [fmt_rat(x) for x in v]


# ---------------------------------------------------------------------------
# linear algebra helpers
# ---------------------------------------------------------------------------

def zeros(n: int) -> RatVec:
    return (ZERO,) * n


def unit(n: int, k: int) -> RatVec:
    """Standard basis vector e_k of Q^n (0-based ``k``)."""
    return tuple(ONE if i == k else ZERO for i in range(n))


def identity(n: int) -> RatMat:
    return tuple(unit(n, k) for k in range(n))


def vadd(x, y) -> RatVec:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)}")
    return tuple(a + b for a, b in zip(x, y))


def vsub(x, y) -> RatVec:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)}")
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x) -> RatVec:
    c = Fraction(c)
    return tuple(c * a for a in x)


def dot(x, y) -> Fraction:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)}")
    return sum((a * b for a, b in zip(x, y)), ZERO)


def mat_vec(A: RatMat, x, n_cols: Optional[int] = None) -> RatVec:
    cols = len(A[0]) if A else (n_cols if n_cols is not None else len(x))
    if len(x) != cols:
        raise DimensionMismatch(f"matrix has {cols} columns, vector has {len(x)} entries")
    return tuple(dot(row, x) for row in A)


def transpose(A: RatMat, n_cols: int = 0) -> RatMat:
    if not A:
        return tuple(() for _ in range(n_cols))
    return tuple(zip(*A))


def mat_mul(A: RatMat, B: RatMat, inner: Optional[int] = None, n_cols: int = 0) -> RatMat:
    """Product AB; ``inner``/``n_cols`` disambiguate empty shapes."""
    a_cols = len(A[0]) if A else inner
    b_rows = len(B)
    if A and a_cols != b_rows:
        raise DimensionMismatch(f"cannot multiply {len(A)}x{a_cols} by {b_rows}x?")
    cols = len(B[0]) if B else n_cols
    Bt = transpose(B, cols)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    n = len(M[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def in_span(v, basis) -> bool:
    basis = [tuple(b) for b in basis]
    if not basis:
        return all(x == 0 for x in v)
    return rank(basis + [tuple(v)]) == rank(basis)


# ---------------------------------------------------------------------------
# feasibility problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityProblem:
    """``A z = b`` with per-variable bounds; ``None`` bounds mean -inf/+inf."""

    A: RatMat
    b: RatVec
    lower: tuple
    upper: tuple

    def __post_init__(self):
        n = len(self.lower)
        if len(self.upper) != n:
            raise DimensionMismatch("lower and upper bounds differ in length")
        if len(self.A) != len(self.b):
            raise DimensionMismatch(f"{len(self.A)} rows but {len(self.b)} right-hand sides")
        for row in self.A:
            if len(row) != n:
                raise DimensionMismatch(f"row of length {len(row)} for {n} variables")

    @property
    def n_vars(self) -> int:
        return len(self.lower)

    @classmethod
    def box(cls, A, b, lower, upper) -> "FeasibilityProblem":
        conv = lambda bs: tuple(None if v is None else rat(v) for v in bs)  # noqa: E731
        return cls(mat(A), vec(b), conv(lower), conv(upper))

    def satisfied_by(self, z) -> bool:
        if len(z) != self.n_vars:
            return False
        for v, lo, hi in zip(z, self.lower, self.upper):
            if lo is not None and v < lo:
                return False
            if hi is not None and v > hi:
                return False
        return all(dot(row, z) == bi for row, bi in zip(self.A, self.b))


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers ``y`` with ``sup_{box} (y^T A) z < y^T b``.

    ``empty_box`` is set instead when some variable has lower > upper.
    """

    y: RatVec = ()
    bound_gap: Optional[Fraction] = None
    empty_box: Optional[int] = None

    def verify(self, p: FeasibilityProblem) -> bool:
        if self.empty_box is not None:
            k = self.empty_box
            lo, hi = p.lower[k], p.upper[k]
            return lo is not None and hi is not None and lo > hi
        if len(self.y) != len(p.A):
            return False
        c = [dot(self.y, col) for col in transpose(p.A, p.n_vars)]
        sup = ZERO
        for cj, lo, hi in zip(c, p.lower, p.upper):
            if cj > 0:
                if hi is None:
                    return False
                sup += cj * hi
            elif cj < 0:
                if lo is None:
                    return False
                sup += cj * lo
        return sup < dot(self.y, p.b)

    def to_dict(self) -> dict:
        if self.empty_box is not None:
            return {"kind": "empty_box", "variable": self.empty_box + 1}
        return {"kind": "farkas", "y": fmt_vec(self.y), "gap": fmt_rat(self.bound_gap)}


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    point: Optional[RatVec] = None
    certificate: Optional[FarkasCertificate] = None

    def to_dict(self) -> dict:
        out = {"feasible": self.feasible}
        if self.point is not None:
            out["point"] = fmt_vec(self.point)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    point: RatVec


# ---------------------------------------------------------------------------
# simplex core
# ---------------------------------------------------------------------------

@dataclass
class _StandardForm:
    """x >= 0 columns; z = offset + sum_k coef_k x_k per original variable."""

    A: list
    b: list
    n_orig_rows: int
    offset: list
    columns: list = field(default_factory=list)  # (orig var, sign) per column


def _standardize(p: FeasibilityProblem):
    n = p.n_vars
    offset = [ZERO] * n
    columns = []
    bound_rows = []  # (column index, width)
    for j, (lo, hi) in enumerate(zip(p.lower, p.upper)):
        if lo is not None and hi is not None:
            if lo > hi:
                return None, FarkasCertificate(empty_box=j)
            offset[j] = lo
            if lo == hi:
                continue  # fixed variable: no column
            columns.append((j, 1))
            bound_rows.append((len(columns) - 1, hi - lo))
        elif lo is not None:
            offset[j] = lo
            columns.append((j, 1))
        elif hi is not None:
            offset[j] = hi
            columns.append((j, -1))
        else:
            columns.append((j, 1))
            columns.append((j, -1))
    n_struct = len(columns)
    n_cols = n_struct + len(bound_rows)
    rows = []
    rhs = []
    for row, bi in zip(p.A, p.b):
        r = [ZERO] * n_cols
        for k, (j, s) in enumerate(columns):
            r[k] = row[j] * s
        rows.append(r)
        rhs.append(bi - dot(row, offset))
    for t, (k, width) in enumerate(bound_rows):
        r = [ZERO] * n_cols
        r[k] = ONE
        r[n_struct + t] = ONE
        rows.append(r)
        rhs.append(width)
    sf = _StandardForm(rows, rhs, len(p.A), offset, columns)
    return sf, None


def _pivot(T, rhs, obj, basis, r, c):
    inv = 1 / T[r][c]
    if inv != 1:
        T[r] = [v * inv for v in T[r]]
        rhs[r] *= inv
    row_r = T[r]
    nz = [(k, v) for k, v in enumerate(row_r) if v != 0]
    for i in range(len(T)):
        if i != r:
            f = T[i][c]
            if f != 0:
                Ti = T[i]
                for k, v in nz:
                    Ti[k] -= f * v
                rhs[i] -= f * rhs[r]
    f = obj[0][c]
    if f != 0:
        for k, v in nz:
            obj[0][k] -= f * v
        obj[1] -= f * rhs[r]
    basis[r] = c


def _bland(T, rhs, obj, basis, allowed):
    """Minimize; ``obj = [reduced costs, -objective value]``.  Returns False if unbounded."""
    while True:
        enter = next((j for j in allowed if obj[0][j] < 0), None)
        if enter is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                key = (rhs[i] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, rhs, obj, basis, best[1], enter)


def _solve_standard(sf: _StandardForm, cost: Optional[list]):
    """Two-phase simplex.  Returns ('infeasible', y) | ('unbounded', None) | ('optimal', x)."""
    m = len(sf.A)
    n = len(sf.A[0]) if sf.A else len(sf.columns)
    sign = [ONE if bi >= 0 else -ONE for bi in sf.b]
    T = [[s * v for v in row] + [ONE if k == i else ZERO for k in range(m)]
         for i, (row, s) in enumerate(zip(sf.A, sign))]
    rhs = [s * bi for s, bi in zip(sign, sf.b)]
    basis = [n + i for i in range(m)]
    red = [-sum((T[i][j] for i in range(m)), ZERO) for j in range(n)] + [ZERO] * m
    obj = [red, -sum(rhs, ZERO)]
    _bland(T, rhs, obj, basis, range(n))
    if obj[1] != 0:
        # Phase-I duals: pi_i = 1 - reduced cost of artificial i.
        pi = [ONE - obj[0][n + i] for i in range(m)]
        y_std = [-p * s for p, s in zip(pi, sign)]
        return "infeasible", y_std
    # drive zero-level artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            c = next((j for j in range(n) if T[i][j] != 0), None)
            if c is None:
                continue  # redundant row
            _pivot(T, rhs, obj, basis, i, c)
        keep.append(i)
    T = [T[i][:n] for i in keep]
    rhs = [rhs[i] for i in keep]
    basis = [basis[i] for i in keep]
    if cost is not None:
        red = list(cost)
        val = ZERO
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb != 0:
                red = [rj - cb * tij for rj, tij in zip(red, T[i])]
                val -= cb * rhs[i]
        obj = [red, val]
        if not _bland(T, rhs, obj, basis, range(n)):
            return "unbounded", None
    x = [ZERO] * n
    for i, bi in enumerate(basis):
        x[bi] = rhs[i]
    return "optimal", x


def _recover(sf: _StandardForm, x, n_vars):
    z = list(sf.offset)
    for k, (j, s) in enumerate(sf.columns):
        z[j] += s * x[k]
    return tuple(z[:n_vars])


def lp_feasible(p: FeasibilityProblem) -> FeasibilityResult:
    """Decide ``A z = b, lower <= z <= upper`` exactly.

    A feasible answer carries a point satisfying every constraint exactly; an
    infeasible one carries a Farkas certificate checkable via
    :meth:`FarkasCertificate.verify`.
    """
    sf, early = _standardize(p)
    if early is not None:
        return FeasibilityResult(False, certificate=early)
    if not sf.A:
        return FeasibilityResult(True, point=tuple(sf.offset))
    status, payload = _solve_standard(sf, None)
    if status == "infeasible":
        y = tuple(-v for v in payload[: sf.n_orig_rows])
        cert = FarkasCertificate(y=y, bound_gap=_gap(p, y))
        return FeasibilityResult(False, certificate=cert)
    return FeasibilityResult(True, point=_recover(sf, payload, p.n_vars))


def _gap(p, y):
    c = [dot(y, col) for col in transpose(p.A, p.n_vars)]
    sup = ZERO
    for cj, lo, hi in zip(c, p.lower, p.upper):
        if cj > 0:
            sup += cj * hi
        elif cj < 0:
            sup += cj * lo
    return dot(y, p.b) - sup


def lp_minimize(cost, p: FeasibilityProblem) -> LPResult:
    """Minimize ``cost . z`` over the feasible set of ``p``.

    Raises :class:`ValueError` when infeasible and :class:`Unbounded` when the
    objective has no lower bound.
    """
    cost = vec(cost)
    if len(cost) != p.n_vars:
        raise DimensionMismatch("cost vector length differs from variable count")
    sf, early = _standardize(p)
    if early is not None:
        raise ValueError("infeasible: empty variable box")
    std_cost = [cost[j] * s for j, s in sf.columns]
    n_cols = len(sf.A[0]) if sf.A else len(sf.columns)
    std_cost += [ZERO] * (n_cols - len(std_cost))
    if not sf.A:
        if any(c < 0 for c in std_cost):
            raise Unbounded("objective unbounded below")
        z = tuple(sf.offset)
        return LPResult(dot(cost, z), z)
    status, payload = _solve_standard(sf, std_cost)
    if status == "infeasible":
        raise ValueError("infeasible")
    if status == "unbounded":
        raise Unbounded("objective unbounded below")
    z = _recover(sf, payload, p.n_vars)
    return LPResult(dot(cost, z), z)


# ---------------------------------------------------------------------------
# min-max of absolute affine terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineExpr:
    """``coeffs . x + const`` over a fixed variable vector."""

    coeffs: RatVec
    const: Fraction = ZERO

    @classmethod
    def of(cls, coeffs, const=0) -> "AffineExpr":
        return cls(vec(coeffs), rat(const))

    def __call__(self, x) -> Fraction:
        return dot(self.coeffs, x) + self.const

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, c in enumerate(self.coeffs) if c != 0)


def _components(terms):
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for t in terms:
        s = sorted(t.support)
        for a, b in zip(s, s[1:]):
            parent[find(a)] = find(b)
    groups = {}
    for idx, t in enumerate(terms):
        key = find(min(t.support)) if t.support else None
        groups.setdefault(key, []).append(idx)
    return groups


def _minmax_block(terms, variables, bounds):
    """Epigraph LP on one block of variables; returns (value, {var: value})."""
    nv = len(variables)
    pos = {v: k for k, v in enumerate(variables)}
    m = len(terms)
    # columns: x (nv), t, slacks (2m)
    n_cols = nv + 1 + 2 * m
    A = []
    b = []
    for r, term in enumerate(terms):
        for sgn, slack in ((ONE, nv + 1 + 2 * r), (-ONE, nv + 2 + 2 * r)):
            row = [ZERO] * n_cols
            for v in term.support:
                row[pos[v]] = sgn * term.coeffs[v]
            row[nv] = -ONE
            row[slack] = ONE
            A.append(tuple(row))
            b.append(-sgn * term.const)
    lower = [bounds[v][0] for v in variables] + [ZERO] + [ZERO] * (2 * m)
    upper = [bounds[v][1] for v in variables] + [None] + [None] * (2 * m)
    p = FeasibilityProblem(tuple(A), tuple(b), tuple(lower), tuple(upper))
    cost = [ZERO] * n_cols
    cost[nv] = ONE
    res = lp_minimize(cost, p)
    return res.value, {v: res.point[pos[v]] for v in variables}


def _clamp(v, lo, hi):
    if lo is not None and v < lo:
        return lo
    if hi is not None and v > hi:
        return hi
    return v


def argmin_linear_over_max(terms: Sequence[AffineExpr], bounds=None):
    """Exact ``min_x max_k |terms[k](x)|`` together with a minimizer.

    Terms sharing no variables are solved as independent blocks; the overall
    optimum is the largest block optimum.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one term")
    n = len(terms[0].coeffs)
    if any(len(t.coeffs) != n for t in terms):
        raise DimensionMismatch("terms over different variable counts")
    if bounds is None:
        bounds = [(None, None)] * n
    bounds = [(None if lo is None else rat(lo), None if hi is None else rat(hi)) for lo, hi in bounds]
    if len(bounds) != n:
        raise DimensionMismatch("bounds length differs from variable count")
    point = [_clamp(ZERO, lo, hi) for lo, hi in bounds]
    best = ZERO
    for key, idxs in sorted(_components(terms).items(), key=lambda kv: (kv[0] is not None, kv[0] or 0)):
        block = [terms[i] for i in idxs]
        if key is None:
            best = max([best] + [abs(t.const) for t in block])
            continue
        variables = sorted(set().union(*(t.support for t in block)))
        val, sol = _minmax_block(block, variables, bounds)
        for v, x in sol.items():
            point[v] = x
        best = max(best, val)
    return best, tuple(point)


def minimize_linear_over_max(terms: Sequence[AffineExpr], bounds=None) -> Fraction:
    """Exact minimum over ``x`` of ``max_k |terms[k](x)|``."""
    return argmin_linear_over_max(terms, bounds)[0]


# ---------------------------------------------------------------------------
# order-interval vertices
# ---------------------------------------------------------------------------

def box_vertices(c, cap: int = 1 << 16) -> list:
    """All vertices of the order interval ``[0, c]`` for ``c >= 0``.

    Only coordinates in the support of ``c`` branch, so there are
    ``2**len(support)`` vertices.  Earlier support coordinates toggle fastest.
    """
    c = vec(c)
    if any(v < 0 for v in c):
        raise ValueError("box_vertices needs c >= 0")
    support = [k for k, v in enumerate(c) if v != 0]
    if (1 << len(support)) > cap:
        raise SupportTooLarge(len(support), cap)
    out = []
    for mask in range(1 << len(support)):
        v = [ZERO] * len(c)
        for bit, k in enumerate(support):
            if mask >> bit & 1:
                v[k] = c[k]
        out.append(tuple(v))
    return out


def iter_grid(values, n):
    """All length-``n`` tuples over ``values`` (last coordinate fastest)."""
    return itertools.product(values, repeat=n)
