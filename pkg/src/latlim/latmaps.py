"""Linear maps between lattices and decision procedures for their properties.

Two kinds of map are supported:

* :class:`MatrixMap` -- a rational matrix between coordinate lattices Q^n.
  Every property check here is exact.
* :class:`SequenceMap` -- a named transformer of eventually periodic
  sequences (the pairwise averaging maps and friends), optionally with a
  finite-dimensional domain.  Checks are exact where a finite argument exists
  and otherwise sampled, in which case a positive answer is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import fdlat
from .errors import (
    DimensionMismatch,
    InconsistencyError,
    NotMatrixKind,
    PreconditionViolated,
    SquareNotCommuting,
)
from .ratcore import (
    ONE,
    ZERO,
    AffineExpr,
    FeasibilityProblem,
    argmin_linear_over_max,
    box_vertices,
    fmt_rat,
    fmt_vec,
    lp_feasible,
    mat,
    mat_mul,
    mat_vec,
    rank,
    transpose,
    unit,
    vec,
)
from .report import FAIL, INCONCLUSIVE, PASS, SKIPPED, Report, Verdict
from .sampling import random_epseq, random_unit_interval, random_vec, rng_for
from .seqlat import (
    EPSeq,
    SpaceTag,
    averaging_map,
    averaging_truncation,
    duplicate,
    ep_le,
    xprime,
    xprime_truncation,
)
from .seqlat import unit as seq_unit

CLOSURE_GAP_NOTE = "closures are only probed on eventually periodic sequences"
FINITE_DIM_NOTE = "AIP<=>IP: finite-dimensional"
RIESZ_NOTE = "reduced to basis vectors by Riesz decomposition"


# ---------------------------------------------------------------------------
# map types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixMap:
    """A matrix ``Q^n_in -> Q^n_out``; ``n_in`` is kept so 0-row maps work."""

    entries: tuple
    n_in: int

    kind = "matrix"

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.n_in:
                raise DimensionMismatch(f"row of length {len(row)} in a map from Q^{self.n_in}")

    @classmethod
    def of(cls, rows, n_in=None) -> "MatrixMap":
        rows = mat(rows)
        if n_in is None:
            if not rows:
                raise DimensionMismatch("an empty matrix needs an explicit domain dimension")
            n_in = len(rows[0])
        return cls(rows, n_in)

    @classmethod
    def identity(cls, n) -> "MatrixMap":
        return cls(tuple(unit(n, k) for k in range(n)), n)

    @classmethod
    def zero(cls, n_out, n_in) -> "MatrixMap":
        return cls(tuple((ZERO,) * n_in for _ in range(n_out)), n_in)

    @property
    def n_out(self) -> int:
        return len(self.entries)

    @property
    def domain(self) -> int:
        return self.n_in

    @property
    def codomain(self) -> int:
        return self.n_out

    def __call__(self, x):
        x = vec(x)
        if len(x) != self.n_in:
            raise DimensionMismatch(f"input of length {len(x)} for a map from Q^{self.n_in}")
        return mat_vec(self.entries, x, self.n_in)

    def column(self, k: int) -> tuple:
        return tuple(row[k] for row in self.entries)

    def truncate(self, n_out=None):
        return self.entries, self.n_in

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def __eq__(self, other):
        if not isinstance(other, MatrixMap):
            return NotImplemented
        return self.n_in == other.n_in and self.entries == other.entries

    def __hash__(self):
        return hash((self.n_in, self.entries))

    def to_dict(self) -> dict:
        return {
            "kind": "matrix",
            "entries": [fmt_vec(r) for r in self.entries],
            "domain": self.n_in,
            "codomain": self.n_out,
        }


@dataclass(frozen=True, eq=False)
class SequenceMap:
    """A named linear transformer whose values are eventually periodic sequences.

    ``domain`` is either a :class:`SpaceTag` or an int ``d`` meaning Q^d.
    ``truncation(n_out)`` returns ``(rows, n_in)``: the first ``n_out``
    outputs depend only on the first ``n_in`` inputs, through ``rows``.
    ``separation_probes`` are pairs ``(x, y)`` worth trying when looking for a
    closure separation certificate.
    """

    name: str
    params: tuple
    func: Callable
    domain: object
    codomain: SpaceTag
    truncation: Optional[Callable] = None
    nonnegative_coefficients: bool = False
    contractive: Optional[bool] = None
    separation_probes: tuple = ()
    right_inverse: Optional[Callable] = None

    kind = "sequence"

    def __call__(self, x) -> EPSeq:
        if self.finite_domain:
            x = vec(x)
            if len(x) != self.domain:
                raise DimensionMismatch(f"input of length {len(x)} for a map from Q^{self.domain}")
        return self.func(x)

    @property
    def finite_domain(self) -> bool:
        return isinstance(self.domain, int)

    def truncate(self, n_out: int):
        if self.truncation is None:
            raise NotImplementedError(f"{self.name} has no truncation")
        return self.truncation(n_out)

    def param(self, key):
        return dict(self.params)[key]

    def to_dict(self) -> dict:
        out = {"kind": self.name}
        for k, v in self.params:
            out[k] = fmt_rat(v) if isinstance(v, Fraction) else (str(v) if isinstance(v, SpaceTag) else v)
        return out

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({args})"


def _tag(space) -> SpaceTag:
    if isinstance(space, SpaceTag):
        return space
    if isinstance(space, int):
        return SpaceTag.lp(space)
    text = str(space).strip()
    if text.isdigit():
        return SpaceTag.lp(int(text))
    if text in ("inf", "linf"):
        return SpaceTag("linf")
    return SpaceTag.parse(text)


def averaging(i: int, j: int, space=1) -> SequenceMap:
    """The pairwise averaging map phi_ji on a sequence space (default l^1)."""
    tag = _tag(space)
    averaging_truncation(i, j, 0)  # index validation
    return SequenceMap(
        "averaging", (("i", i), ("j", j), ("p", str(tag))),
        lambda s: averaging_map(i, j, s), tag, tag,
        truncation=lambda n: averaging_truncation(i, j, n),
        nonnegative_coefficients=True, contractive=True,
    )


def xprime_leg(i: int, space=1) -> SequenceMap:
    """The map x -> x' (average everything from position i on in pairs)."""
    tag = _tag(space)
    return SequenceMap(
        "xprime", (("i", i), ("p", str(tag))),
        lambda s: xprime(i, s), tag, tag,
        truncation=lambda n: xprime_truncation(i, n),
        nonnegative_coefficients=True, contractive=True,
        right_inverse=lambda s: duplicate(i, s),
    )


def finite_inclusion(n: int, space="c00") -> SequenceMap:
    """Q^n -> sequences, padding with zeros."""
    tag = _tag(space)

    def trunc(n_out):
        return tuple(unit(n, r) if r < n else (ZERO,) * n for r in range(n_out)), n

    return SequenceMap(
        "finite_inclusion", (("n", n), ("space", str(tag))),
        lambda x: EPSeq.finite(x), n, tag,
        truncation=trunc, nonnegative_coefficients=True, contractive=True,
    )


def eventually_constant_inclusion(i: int) -> SequenceMap:
    """Q^i viewed as the sequences constant from position i on, inside c.

    ``(x_1, ..., x_i) -> (x_1, ..., x_{i-1}, x_i, x_i, ...)``.
    """
    if i < 1:
        raise ValueError("need i >= 1")

    def trunc(n_out):
        return tuple(unit(i, min(r, i - 1)) for r in range(n_out)), i

    half = Fraction(1, 2)
    probe_x = (ONE,) * i
    probe_y = EPSeq.of((ONE,) * (i - 1) + (half,), (ONE,))
    return SequenceMap(
        "eventually_constant_inclusion", (("i", i),),
        lambda x: EPSeq.of(x[:-1], x[-1:]), i, SpaceTag("c"),
        truncation=trunc, nonnegative_coefficients=True, contractive=True,
        separation_probes=((probe_x, probe_y),),
    )


def _identity_like(T):
    return isinstance(T, MatrixMap) and T.n_in == T.n_out and T.entries == MatrixMap.identity(T.n_in).entries


def compose(S, T):
    """``S o T`` (apply T first)."""
    if isinstance(S, MatrixMap) and isinstance(T, MatrixMap):
        if S.n_in != T.n_out:
            raise DimensionMismatch(f"cannot compose Q^{S.n_in} <- Q^{T.n_out}")
        return MatrixMap(mat_mul(S.entries, T.entries, T.n_out, T.n_in), T.n_in)
    if isinstance(S, MatrixMap):
        raise DimensionMismatch("a matrix cannot follow a sequence-valued map")
    mid = T.n_out if isinstance(T, MatrixMap) else T.codomain
    if S.domain != mid and not (isinstance(mid, SpaceTag) and isinstance(S.domain, SpaceTag)):
        raise DimensionMismatch(f"codomain {mid} does not match domain {S.domain}")
    if _identity_like(T):
        return S

    trunc = None
    if S.truncation is not None and (isinstance(T, MatrixMap) or T.truncation is not None):
        def trunc(n):
            rows_s, m = S.truncate(n)
            rows_t, n_in = T.truncate(m)
            return mat_mul(rows_s, rows_t, m, n_in), n_in

    return SequenceMap(
        f"({S.name})o({getattr(T, 'name', 'matrix')})",
        (("outer", repr(S)), ("inner", repr(T))),
        lambda x: S(T(x)), T.domain, S.codomain,
        truncation=trunc,
        nonnegative_coefficients=S.nonnegative_coefficients and getattr(T, "nonnegative_coefficients", False),
        contractive=S.contractive and getattr(T, "contractive", None),
    )


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _abs_seq(x):
    return abs(x) if isinstance(x, EPSeq) else fdlat.absolute(x)


def _fmt_elem(x):
    return x.to_dict() if isinstance(x, EPSeq) else fmt_vec(x)


def _shrink(x, still_fails):
    """Greedily zero out entries of a witness while it keeps failing."""
    if isinstance(x, EPSeq):
        x = x.canonical()
        if x.period != (ZERO,):
            cand = EPSeq.of(x.prefix, (ZERO,))
            if still_fails(cand):
                x = cand
        prefix = list(x.prefix)
        for k in range(len(prefix)):
            if prefix[k] != 0:
                old, prefix[k] = prefix[k], ZERO
                cand = EPSeq.of(prefix, x.period)
                if still_fails(cand):
                    x = cand
                else:
                    prefix[k] = old
        return x.canonical()
    x = list(x)
    for k in range(len(x)):
        if x[k] != 0:
            old, x[k] = x[k], ZERO
            if not still_fails(tuple(x)):
                x[k] = old
    return tuple(x)


def _domain_unit(T, k):
    """The k-th (0-based) unit vector of the domain of T."""
    if isinstance(T, MatrixMap):
        return unit(T.n_in, k)
    if T.finite_domain:
        return unit(T.domain, k)
    return seq_unit(k + 1)


def _random_domain_element(T, rng, positive=False):
    if isinstance(T, MatrixMap):
        return random_vec(rng, T.n_in, positive)
    if T.finite_domain:
        return random_vec(rng, T.domain, positive)
    return random_epseq(rng, T.domain, positive)


def _image_support(s: EPSeq):
    """1-based support of an eventually periodic sequence, or None if infinite."""
    s = s.canonical()
    if s.period != (ZERO,):
        return None
    return [k + 1 for k, v in enumerate(s.prefix) if v != 0]


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

def is_positive(T, seed: int = 0, samples: int = 32, horizon: int = 16) -> Verdict:
    if isinstance(T, MatrixMap):
        for r, row in enumerate(T.entries):
            for c, v in enumerate(row):
                if v < 0:
                    return Verdict(False, "structural", {"entry": [r + 1, c + 1], "value": fmt_rat(v)})
        return Verdict(True, "structural")
    if T.nonnegative_coefficients:
        return Verdict(True, "structural", notes=("nonnegative coefficients",))
    if T.truncation is not None:
        rows, _ = T.truncate(horizon)
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v < 0:
                    return Verdict(False, "structural", {
                        "x": _fmt_elem(_domain_unit(T, c)), "position": r + 1, "value": fmt_rat(v)})
    rng = rng_for(seed, "positive")
    for _ in range(samples):
        x = _random_domain_element(T, rng, positive=True)
        tx = T(x)
        bad = next((k for k, v in enumerate(tx.take(tx.window)) if v < 0), None)
        if bad is not None:
            x = _shrink(x, lambda z: any(v < 0 for v in T(z).take(T(z).window)))
            return Verdict(False, "structural", {"x": _fmt_elem(x), "image": T(x).to_dict()})
    return Verdict(True, "sampled", seed=seed, samples=samples, notes=(CLOSURE_GAP_NOTE,))


# ---------------------------------------------------------------------------
# lattice homomorphisms
# ---------------------------------------------------------------------------

def _hom_violation(T, x):
    tx = T(x)
    return _abs_seq(tx) != T(_abs_seq(x))


def _hom_witness(T, x):
    return {"x": _fmt_elem(x), "abs_Tx": _fmt_elem(_abs_seq(T(x))), "T_abs_x": _fmt_elem(T(_abs_seq(x)))}


def _sup_preserved(T, x, y):
    if isinstance(T, MatrixMap):
        return T(fdlat.sup(x, y)) == fdlat.sup(T(x), T(y))
    return T(x | y) == (T(x) | T(y))


def is_lattice_hom(T, seed: int = 0, samples: int = 8) -> Verdict:
    """Decide whether T is a lattice homomorphism.

    Matrices: positive with at most one nonzero per row.  The structural
    answer is cross-checked against ``T(x v y) = Tx v Ty`` on seeded samples
    and any disagreement raises :class:`InconsistencyError`.
    Sequence maps: definitional oracle on probes ``e_k - e_{k+1}`` and seeded
    random inputs.
    """
    pos = is_positive(T, seed=seed)
    if not pos.holds:
        return Verdict(False, pos.method, {"reason": "not positive", **pos.witness})
    if isinstance(T, MatrixMap):
        return _matrix_hom(T, seed, samples)
    if T.finite_domain:
        return _finite_domain_hom(T)
    probes = []
    n_probe = T.domain if T.finite_domain else 8
    for k in range(n_probe - 1):
        e, f = _domain_unit(T, k), _domain_unit(T, k + 1)
        probes.append(e - f if isinstance(e, EPSeq) else tuple(a - b for a, b in zip(e, f)))
    rng = rng_for(seed, "hom")
    for _ in range(samples):
        probes.append(_random_domain_element(T, rng))
    for x in probes:
        if _hom_violation(T, x):
            x = _shrink(x, lambda z: _hom_violation(T, z))
            return Verdict(False, "structural", _hom_witness(T, x))
    return Verdict(True, "sampled", seed=seed, samples=len(probes), notes=(CLOSURE_GAP_NOTE,))


def _image_window(cols, extra=()):
    """Positions after which every listed sequence is periodic with a common period."""
    everything = [c.canonical() for c in list(cols) + list(extra)]
    if not everything:
        return 0
    period = math.lcm(*(len(s.period) for s in everything))
    return max(len(s.prefix) for s in everything) + period


def _finite_domain_hom(T: SequenceMap) -> Verdict:
    """Q^d -> sequences: a hom iff every output position reads at most one coordinate."""
    cols = [T(unit(T.domain, k)) for k in range(T.domain)]
    for n in range(_image_window(cols)):
        nz = [k for k, c in enumerate(cols) if c[n] != 0]
        if len(nz) > 1:
            a, b = nz[0], nz[1]
            x = tuple(ONE if c == a else (-ONE if c == b else ZERO) for c in range(T.domain))
            return Verdict(False, "structural", {"position": n + 1, **_hom_witness(T, x)})
    return Verdict(True, "structural")


def _matrix_hom(T: MatrixMap, seed, samples) -> Verdict:
    verdict = Verdict(True, "structural")
    for row in T.entries:
        nz = [c for c, v in enumerate(row) if v != 0]
        if len(nz) > 1:
            a, b = nz[0], nz[1]
            x = tuple(ONE if c == a else (-ONE if c == b else ZERO) for c in range(T.n_in))
            verdict = Verdict(False, "structural", _hom_witness(T, x))
            break
    if not verdict.holds and not _hom_violation(T, tuple(vec(verdict.witness["x"]))):
        raise InconsistencyError("structural hom witness does not violate |Tx| = T|x|", [verdict.witness])
    if verdict.holds and T.n_in:
        rng = rng_for(seed, "hom-cross", T.entries)
        for _ in range(samples):
            x, y = random_vec(rng, T.n_in), random_vec(rng, T.n_in)
            if not _sup_preserved(T, x, y):
                raise InconsistencyError(
                    "structural hom test disagrees with T(x v y) = Tx v Ty",
                    [{"x": fmt_vec(x), "y": fmt_vec(y)}])
    return verdict


# ---------------------------------------------------------------------------
# interval preservation
# ---------------------------------------------------------------------------

def _column_ip(T: MatrixMap, k: int, cap: int):
    """None if T[0,e_k] = [0,Te_k]; else the failing vertex and its certificate."""
    col = T.column(k)
    e_k = unit(T.n_in, k)
    vertices = sorted(box_vertices(col, cap), key=lambda v: (sum(1 for a in v if a != 0), [a == 0 for a in v]))
    zero = (ZERO,) * T.n_in
    for v in vertices:
        res = lp_feasible(FeasibilityProblem(T.entries, v, zero, e_k))
        if not res.feasible:
            return v, res.certificate
    return None


def is_interval_preserving(T, cap: int = 1 << 16, seed: int = 0, samples: int = 32, horizon: int = 12) -> Verdict:
    """Decide whether ``T[0,x] = [0,Tx]`` for all ``x >= 0``.

    Matrices: by Riesz decomposition ``[0, T x] = sum_i x_i [0, T e_i]``, so it
    suffices that every vertex of each box ``[0, T e_i]`` is ``T z`` for some
    ``z`` in ``[0, e_i]``; each vertex is one exact LP.
    """
    pos = is_positive(T, seed=seed)
    if not pos.holds:
        return Verdict(False, pos.method, {"reason": "not positive", **pos.witness})
    if isinstance(T, MatrixMap):
        for k in range(T.n_in):
            bad = _column_ip(T, k, cap)
            if bad is not None:
                v, cert = bad
                return Verdict(False, "lp_exact", {
                    "e": k + 1, "x": fmt_vec(unit(T.n_in, k)), "v": fmt_vec(v), "certificate": cert.to_dict()})
        return Verdict(True, "lp_exact", notes=(RIESZ_NOTE,))
    if T.finite_domain:
        return _finite_domain_ip(T)
    return _sampled_interval_check(T, seed, samples, horizon, closure=False)


def _finite_domain_ip(T: SequenceMap) -> Verdict:
    """Q^d -> sequences: IP iff every T e_k has at most one nonzero coordinate.

    Riesz decomposition reduces to the segments T[0,e_k] = {t T e_k}, and a
    box [0, T e_k] is a segment only when T e_k has support of size <= 1.
    """
    for k in range(T.domain):
        col = T(unit(T.domain, k))
        supp = _image_support(col)
        if supp is None or len(supp) > 1:
            m = supp[0] if supp else next(n for n in range(1, col.window + 1) if col[n - 1] != 0)
            v = EPSeq.finite([col[n] if n == m - 1 else ZERO for n in range(m)])
            return Verdict(False, "structural", {
                "e": k + 1, "x": fmt_vec(unit(T.domain, k)), "v": v.to_dict(), "Te": col.to_dict(),
                "reason": "v lies in [0,Te] but is not a multiple of Te"})
    return Verdict(True, "structural", notes=(RIESZ_NOTE,))


def _sampled_interval_check(T, seed, samples, horizon, closure: bool) -> Verdict:
    """Probe random ``x >= 0`` and ``y`` in ``[0, Tx]`` at a truncation.

    A probe whose truncated system has no solution is an exact refutation,
    because the first ``horizon`` outputs only see the first ``n_in`` inputs.
    For closures the refutation is the positive distance itself.
    """
    rng = rng_for(seed, "closure" if closure else "interval")
    rows, n_in = T.truncate(horizon)
    for _ in range(samples):
        x = _random_domain_element(T, rng, positive=True)
        tx = T(x)
        r = [random_unit_interval(rng) for _ in range(horizon)]
        y_head = tuple(rk * tk for rk, tk in zip(r, tx.take(horizon)))
        tail = tx.drop(horizon)
        y = EPSeq.of(y_head + tail.prefix, tail.period)
        xs = x.take(n_in)
        if closure:
            cert = _truncated_separation(rows, n_in, xs, y_head)
            if cert is not None:
                return Verdict(False, "certificate", {"x": x.to_dict(), "y": y.to_dict(), **cert})
        else:
            res = lp_feasible(FeasibilityProblem(rows, y_head, (ZERO,) * n_in, xs))
            if not res.feasible:
                return Verdict(False, "lp_exact", {
                    "x": x.to_dict(), "y": y.to_dict(), "horizon": horizon, "certificate": res.certificate.to_dict()})
    return Verdict(True, "sampled", seed=seed, samples=samples, notes=(f"truncation horizon {horizon}", CLOSURE_GAP_NOTE))


def sampled_interval_preserving(T: MatrixMap, seed: int = 0, samples: int = 32) -> Verdict:
    """Probe random ``x >= 0`` and ``y`` in ``[0, Tx]``; for boxes too large to enumerate.

    An infeasible probe is an exact refutation; surviving every probe is only evidence.
    """
    pos = is_positive(T, seed=seed)
    if not pos.holds:
        return Verdict(False, pos.method, {"reason": "not positive", **pos.witness})
    rng = rng_for(seed, "interval", "matrix")
    zero = (ZERO,) * T.n_in
    for _ in range(samples):
        x = random_vec(rng, T.n_in, positive=True)
        y = tuple(random_unit_interval(rng) * t for t in T(x))
        res = lp_feasible(FeasibilityProblem(T.entries, y, zero, x))
        if not res.feasible:
            return Verdict(False, "lp_exact", {"x": fmt_vec(x), "v": fmt_vec(y), "certificate": res.certificate.to_dict()})
    return Verdict(True, "sampled", seed=seed, samples=samples)


def _truncated_separation(rows, n_in, xs, y_head):
    terms = [AffineExpr(tuple(row), -yv) for row, yv in zip(rows, y_head)]
    if not terms:
        return None
    value, z = argmin_linear_over_max(terms, list(zip((ZERO,) * n_in, xs)))
    if value > 0:
        return {"bound": fmt_rat(value), "positions": len(rows),
                "statement": "every z in [0,x] has sup_n |(Tz)_n - y_n| >= bound on the listed positions"}
    return None


@dataclass(frozen=True)
class SeparationCertificate:
    """``y`` in ``[0, Tx]`` with ``inf_{z in [0,x]} ||Tz - y||_inf = bound > 0``.

    For a map from Q^d, ``T[0,x]`` is compact, so a positive distance shows
    that ``y`` is not in its closure.  The distance is computed over a window
    of positions past which every sequence involved is periodic with a common
    period, which makes the finite min-max exact.
    """

    x: tuple
    y: EPSeq
    bound: Fraction
    window: int
    minimizer: tuple

    def verify(self, T) -> bool:
        again = separation_certificate(T, self.x, self.y)
        return again is not None and again.bound == self.bound and self.bound > 0

    def to_dict(self) -> dict:
        return {
            "x": fmt_vec(self.x),
            "y": self.y.to_dict(),
            "bound": fmt_rat(self.bound),
            "window": self.window,
            "closest_z": fmt_vec(self.minimizer),
            "statement": f"||Tz - y||_inf >= {fmt_rat(self.bound)} for every z in [0,x]",
        }


def separation_certificate(T: SequenceMap, x, y: EPSeq) -> Optional[SeparationCertificate]:
    """Exact sup-norm distance from ``y`` to ``T[0,x]`` for a map from Q^d.

    Returns None when ``y`` is not in ``[0, Tx]`` (no certificate possible).
    The returned bound may be zero; callers decide what that means.
    """
    if not T.finite_domain:
        raise NotMatrixKind("separation certificates need a finite-dimensional domain")
    x = vec(x)
    tx = T(x)
    if not (ep_le(EPSeq.zero(), y) and ep_le(y, tx)):
        return None
    cols = [T(unit(T.domain, k)).canonical() for k in range(T.domain)]
    y = y.canonical()
    window = _image_window(cols, [y])
    terms = [AffineExpr(tuple(c[n] for c in cols), -y[n]) for n in range(window)]
    value, z = argmin_linear_over_max(terms, list(zip((ZERO,) * T.domain, x)))
    return SeparationCertificate(x, y, value, window, z)


def is_almost_interval_preserving(T, cap: int = 1 << 16, seed: int = 0, samples: int = 32, horizon: int = 12) -> Verdict:
    """Decide whether ``closure(T[0,x]) = [0,Tx]`` for all ``x >= 0``.

    Matrices and maps from Q^d have compact images of order intervals, so the
    answer equals the interval-preserving one; a failure from Q^d is reported
    with a :class:`SeparationCertificate`.  Maps between sequence spaces are
    probed at a truncation: a positive truncated distance is an exact
    separation, otherwise the verdict is a sampled (inconclusive) positive.
    """
    if isinstance(T, MatrixMap):
        return is_interval_preserving(T, cap, seed).with_notes(FINITE_DIM_NOTE)
    pos = is_positive(T, seed=seed)
    if not pos.holds:
        return Verdict(False, pos.method, {"reason": "not positive", **pos.witness})
    if T.finite_domain:
        for x, y in T.separation_probes:
            cert = separation_certificate(T, x, y)
            if cert is not None and cert.bound > 0:
                return Verdict(False, "certificate", cert.to_dict(), notes=(FINITE_DIM_NOTE,))
        ip = _finite_domain_ip(T)
        if ip.holds:
            return ip.with_notes(FINITE_DIM_NOTE)
        x = vec(ip.witness["x"])
        cert = separation_certificate(T, x, EPSeq.from_dict(ip.witness["v"]))
        if cert is None or cert.bound <= 0:
            raise InconsistencyError("finite-dimensional IP failure without a separation", [ip.witness])
        return Verdict(False, "certificate", cert.to_dict(), notes=(FINITE_DIM_NOTE,))
    return _sampled_interval_check(T, seed, samples, horizon, closure=True)


# ---------------------------------------------------------------------------
# adjoints and duality
# ---------------------------------------------------------------------------

def adjoint(T) -> MatrixMap:
    """Transpose, with finite-dimensional duals identified with the spaces."""
    if not isinstance(T, MatrixMap):
        raise NotMatrixKind(f"adjoint needs a matrix, got {getattr(T, 'name', type(T).__name__)}")
    return MatrixMap(transpose(T.entries, T.n_in), T.n_out)


def check_duality(T: MatrixMap, cap: int = 1 << 16, seed: int = 0) -> Report:
    """Check ``hom(T) <=> IP(T^T)`` and ``IP(T) <=> hom(T^T)`` for a positive matrix."""
    pos = is_positive(T)
    if not pos.holds:
        raise PreconditionViolated(f"duality check needs a positive matrix: {pos.witness}")
    Ta = adjoint(T)
    rep = Report("duality")
    pairs = [
        ("hom(T) <=> IP(T^T)", is_lattice_hom(T, seed), is_interval_preserving(Ta, cap, seed)),
        ("IP(T) <=> hom(T^T)", is_interval_preserving(T, cap, seed), is_lattice_hom(Ta, seed)),
    ]
    for name, left, right in pairs:
        detail = {"left": left.to_dict(), "right": right.to_dict()}
        if left.holds != right.holds:
            raise InconsistencyError(f"duality violated: {name}", [detail])
        rep.add(name, PASS, detail)
    return rep


# ---------------------------------------------------------------------------
# pushdown, factoring
# ---------------------------------------------------------------------------

CHECKERS = {
    "positive": lambda T, **kw: is_positive(T, seed=kw.get("seed", 0)),
    "hom": lambda T, **kw: is_lattice_hom(T, seed=kw.get("seed", 0)),
    "IP": lambda T, **kw: is_interval_preserving(T, kw.get("cap", 1 << 16), kw.get("seed", 0)),
    "AIP": lambda T, **kw: is_almost_interval_preserving(T, kw.get("cap", 1 << 16), kw.get("seed", 0)),
    "linear": lambda T, **kw: Verdict(True, "structural", notes=("every map here is linear",)),
}


def check_property(T, prop: str, **kw) -> Verdict:
    try:
        checker = CHECKERS[prop]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; choose from {sorted(CHECKERS)}") from None
    return checker(T, **kw)


@dataclass(frozen=True)
class CommSquare:
    """``bottom o left = right o top``, all matrices::

        E  --top-->   F
        |left         |right
        E' --bottom-> F'
    """

    top: MatrixMap
    left: MatrixMap
    right: MatrixMap
    bottom: MatrixMap

    def __post_init__(self):
        lhs = compose(self.bottom, self.left)
        rhs = compose(self.right, self.top)
        if lhs != rhs:
            k = next(k for k in range(lhs.n_in) if lhs.column(k) != rhs.column(k))
            raise SquareNotCommuting("bottom o left != right o top", {
                "e": k + 1, "bottom_left": fmt_vec(lhs.column(k)), "right_top": fmt_vec(rhs.column(k))})


def _maps_positive_cone_onto(T: MatrixMap) -> Verdict:
    """Positive and T(E+) = F+: every unit vector of F is a positive multiple of a column."""
    pos = is_positive(T)
    if not pos.holds:
        return pos
    cols = [T.column(k) for k in range(T.n_in)]
    for r in range(T.n_out):
        hit = any(c[r] > 0 and all(v == 0 for s, v in enumerate(c) if s != r) for c in cols)
        if not hit:
            return Verdict(False, "structural", {"missing": fmt_vec(unit(T.n_out, r))})
    return Verdict(True, "structural")


def _surjective(T: MatrixMap) -> Verdict:
    if rank(T.entries) == T.n_out:
        return Verdict(True, "structural")
    return Verdict(False, "structural", {"rank": rank(T.entries), "codomain": T.n_out})


def verify_pushdown_square(sq: CommSquare, prop: str = "IP", cap: int = 1 << 16) -> Report:
    """If ``top`` has ``prop`` then ``bottom`` has it, under the square's hypotheses."""
    if prop not in ("IP", "AIP"):
        raise ValueError("pushdown squares are checked for IP or AIP")
    rep = Report(f"pushdown square ({prop})")
    h1 = _maps_positive_cone_onto(sq.left)
    h2 = _surjective(sq.right)
    h3 = is_lattice_hom(sq.right)
    rep.add_verdict("hypothesis: left positive with left(E+) = E'+", h1, required=False)
    rep.add_verdict("hypothesis: right surjective", h2, required=False)
    rep.add_verdict("hypothesis: right lattice homomorphism", h3, required=False)
    top = check_property(sq.top, prop, cap=cap)
    bottom = check_property(sq.bottom, prop, cap=cap)
    detail = {"top": top.to_dict(), "bottom": bottom.to_dict()}
    if not (h1.holds and h2.holds and h3.holds):
        rep.add("implication", SKIPPED, detail)
        rep.notes.append("hypotheses failed; implication not claimed")
    elif not top.holds:
        rep.add("implication", PASS, {**detail, "vacuous": True})
    else:
        rep.add("implication", bottom.holds, detail)
    return rep


def verify_factoring(legs, chi, prop: str, cap: int = 1 << 16, seed: int = 0, samples: int = 16) -> Report:
    """Check ``(chi o leg_i has prop for all i) <=> chi has prop``."""
    rep = Report(f"factoring ({prop})")
    composites = [check_property(compose(chi, leg), prop, cap=cap, seed=seed) for leg in legs]
    whole = check_property(chi, prop, cap=cap, seed=seed)
    all_legs = all(v.holds for v in composites)
    detail = {
        "composites": [v.to_dict() for v in composites],
        "chi": whole.to_dict(),
    }
    if all_legs != whole.holds:
        status = FAIL
    elif whole.inconclusive or any(v.inconclusive for v in composites):
        status = INCONCLUSIVE
    else:
        status = PASS
    rep.add("all composites <=> chi", status, detail)
    rep.add("coverage: E is the union of leg images", _coverage(legs, chi, seed, samples), required=False)
    return rep


def _coverage(legs, chi, seed, samples) -> str:
    if all(isinstance(L, MatrixMap) for L in legs) and isinstance(chi, MatrixMap):
        n = chi.n_in
        # union of subspaces equals the whole space iff one of them is everything
        return PASS if any(rank(transpose(L.entries, L.n_in)) == n for L in legs) else FAIL
    return INCONCLUSIVE


def verify_composition(S, T, prop: str = "IP", cap: int = 1 << 16) -> Report:
    """Composition harness: S and T have ``prop`` => S o T has it."""
    rep = Report(f"composition ({prop})")
    s, t = check_property(S, prop, cap=cap), check_property(T, prop, cap=cap)
    st = check_property(compose(S, T), prop, cap=cap)
    detail = {"S": s.to_dict(), "T": t.to_dict(), "ST": st.to_dict()}
    if s.holds and t.holds:
        rep.add("S, T have it => S o T has it", st.status if st.holds else FAIL, detail)
    else:
        rep.add("S, T have it => S o T has it", PASS, {**detail, "vacuous": True})
    return rep


def map_from_dict(data: dict):
    """Read the JSON map formats ``{"kind": "matrix", ...}`` and ``{"kind": "averaging", ...}``."""
    kind = data.get("kind")
    if kind == "matrix":
        rows = data["entries"]
        n_in = data.get("domain")
        return MatrixMap.of(rows, n_in if n_in is not None else None)
    if kind == "averaging":
        return averaging(int(data["i"]), int(data["j"]), data.get("p", 1))
    if kind == "xprime":
        return xprime_leg(int(data["i"]), data.get("p", 1))
    if kind == "finite_inclusion":
        return finite_inclusion(int(data["n"]), data.get("space", "c00"))
    if kind == "eventually_constant_inclusion":
        return eventually_constant_inclusion(int(data["i"]))
    raise ValueError(f"unknown map kind {kind!r}")
