"""Order-continuity witnesses, band projections and the prebuilt examples.

Order continuity of an infinite-dimensional model is never asserted from a
search.  What is checked exactly is whether a proposed witness against order
continuity is valid (increasing, order bounded, not Cauchy; or disjoint,
order bounded, bounded below in norm).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import dirlimit as dl
from . import latmaps as lm
from .errors import InconsistencyError, NotRepresentable, PreconditionViolated, UnknownExample
from .fdlat import is_ideal
from .ratcore import ONE, ZERO, AffineExpr, fmt_rat, minimize_linear_over_max, rank, unit, vec
from .report import FAIL, INCONCLUSIVE, PASS, Report, Verdict
from .sampling import random_c00, random_unit_interval, rng_for
from .seqlat import EPSeq, NormValue, SpaceTag, averaging_map, averaging_truncation, ep_le, ep_norm, is_member
from .seqlat import unit as seq_unit

HALF = Fraction(1, 2)


def _norm_at_least(s: EPSeq, space: SpaceTag, delta) -> bool:
    return not (ep_norm(s, space) < NormValue("exact", Fraction(delta)))


def _membership_failure(space, named):
    for name, s in named:
        v = is_member(s, space)
        if not v.holds:
            return Verdict(False, "structural", {"reason": f"{name} is not a member of {space}", "membership": v.witness})
    return None


# ---------------------------------------------------------------------------
# witnesses against order continuity
# ---------------------------------------------------------------------------

def verify_increasing_non_cauchy(space: SpaceTag, xs, bound: EPSeq, delta) -> Verdict:
    """Check ``0 <= x_1 <= x_2 <= ... <= bound`` with ``||x_{n+1} - x_n|| >= delta``.

    A holding verdict means the checked terms form a valid witness that the
    completion of the space is not order continuous.
    """
    xs = list(xs)
    if len(xs) < 2:
        raise PreconditionViolated("need at least two terms")
    delta = Fraction(delta)
    if delta <= 0:
        raise PreconditionViolated("delta must be positive")
    bad = _membership_failure(space, [("bound", bound)] + [(f"x_{n + 1}", x) for n, x in enumerate(xs)])
    if bad is not None:
        return bad
    if not ep_le(EPSeq.zero(), xs[0]):
        return Verdict(False, "structural", {"reason": "x_1 is not positive"})
    for n, (a, b) in enumerate(zip(xs, xs[1:]), start=1):
        if not ep_le(a, b):
            return Verdict(False, "structural", {"reason": f"x_{n} <= x_{n + 1} fails"})
        if not _norm_at_least(b - a, space, delta):
            return Verdict(False, "structural", {
                "reason": f"||x_{n + 1} - x_{n}|| < delta", "norm": str(ep_norm(b - a, space))})
    for n, x in enumerate(xs, start=1):
        if not ep_le(x, bound):
            return Verdict(False, "structural", {"reason": f"x_{n} <= bound fails"})
    return Verdict(True, "certificate", {"terms": len(xs), "delta": fmt_rat(delta), "space": str(space)},
                   notes=("increasing, order bounded and not Cauchy: the completion is not order continuous",))


def verify_disjoint_witness(space: SpaceTag, x: EPSeq, xs, delta) -> Verdict:
    """Check ``x_m /\\ x_n = 0``, ``0 <= x_n <= x`` and ``||x_n|| >= delta``."""
    xs = list(xs)
    if len(xs) < 2:
        raise PreconditionViolated("need at least two terms")
    delta = Fraction(delta)
    bad = _membership_failure(space, [("x", x)] + [(f"x_{n + 1}", t) for n, t in enumerate(xs)])
    if bad is not None:
        return bad
    for m in range(len(xs)):
        for n in range(m + 1, len(xs)):
            if (abs(xs[m]) & abs(xs[n])) != EPSeq.zero():
                return Verdict(False, "structural", {"reason": f"x_{m + 1} and x_{n + 1} are not disjoint"})
    for n, t in enumerate(xs, start=1):
        if not (ep_le(EPSeq.zero(), t) and ep_le(t, x)):
            return Verdict(False, "structural", {"reason": f"0 <= x_{n} <= x fails"})
        if not _norm_at_least(t, space, delta):
            return Verdict(False, "structural", {"reason": f"||x_{n}|| < delta", "norm": str(ep_norm(t, space))})
    return Verdict(True, "certificate", {"terms": len(xs), "delta": fmt_rat(delta), "space": str(space)},
                   notes=("disjoint, order bounded, bounded below: the norm is not order continuous",))


# ---------------------------------------------------------------------------
# band projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandProjection:
    """Coordinate mask onto ``support`` (or onto its complement if ``cofinite``)."""

    space: SpaceTag
    support: frozenset
    cofinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        if any((not isinstance(k, int)) or k < 1 for k in self.support):
            raise ValueError("coordinates are positive integers")

    @classmethod
    def first(cls, space, n) -> "BandProjection":
        return cls(space, frozenset(range(1, n + 1)))

    def complement(self) -> "BandProjection":
        return BandProjection(self.space, self.support, not self.cofinite)

    def keeps(self, k: int) -> bool:
        return (k in self.support) != self.cofinite

    def __call__(self, s):
        return band_project(self, s)


def band_project(P: BandProjection, s: EPSeq) -> EPSeq:
    if not isinstance(s, EPSeq):
        raise NotRepresentable(f"cannot mask a {type(s).__name__}")
    s = s.canonical()
    top = max(P.support, default=0)
    if not P.cofinite:
        return EPSeq.finite([s[n] if P.keeps(n + 1) else ZERO for n in range(top)])
    n_pre = max(top, len(s.prefix))
    prefix = [s[n] if P.keeps(n + 1) else ZERO for n in range(n_pre)]
    tail = s.drop(n_pre)
    return EPSeq.of(prefix + list(tail.prefix), tail.period)


def check_band_density(space: SpaceTag, bands, probes, eps) -> Report:
    """For each probe ``x``: is there a band with ``||x - P x|| < eps``?"""
    bands = list(bands)
    eps = Fraction(eps)
    for a, b in zip(bands, bands[1:]):
        if a.cofinite or b.cofinite or not a.support <= b.support:
            raise PreconditionViolated("bands must be finite and nested by support")
    rep = Report(f"band density in {space}")
    for k, x in enumerate(probes, start=1):
        norms = []
        hit = None
        for i, P in enumerate(bands, start=1):
            r = ep_norm(x - band_project(P, x), space)
            norms.append(str(r))
            if r < NormValue("exact", eps):
                hit = i
                break
        detail = {"probe": x.to_dict(), "eps": fmt_rat(eps), "norms": norms}
        if hit is not None:
            detail["band"] = hit
        rep.add(f"probe {k}", hit is not None, detail)
    return rep


# ---------------------------------------------------------------------------
# the l^infinity averaging system: the lower bound 1/2
# ---------------------------------------------------------------------------

ALTERNATING = EPSeq.of((), (ONE, -ONE))


def example_53_terms(N: int, drop_average: bool = False):
    """Affine terms ``(phi_j1 x)_n - |phi_j1 a|_n`` for j in {N, N+1}, positions 1..N+1.

    ``a`` is the alternating sequence (1, -1, 1, -1, ...); ``x`` ranges over
    its first 2N+1 coordinates (later coordinates only meet later positions).
    """
    if N < 1:
        raise ValueError("need N >= 1")
    n_out = N + 1
    width = n_out + N
    terms = []
    for j in (N, N + 1):
        rows, n_in = averaging_truncation(1, j, n_out)
        target = abs(averaging_map(1, j, ALTERNATING)).take(n_out)
        for n, (row, t) in enumerate(zip(rows, target), start=1):
            if drop_average and j == N + 1 and n == N:
                continue
            terms.append(AffineExpr(tuple(row) + (ZERO,) * (width - n_in), -t))
    return terms


def example_53_lower_bound(N: int) -> Fraction:
    """Exact ``min_x max(|x_{2N-1} - 1|, |x_{2N} - 1|, |x_{2N-1} + x_{2N}| / 2)``.

    The three terms are the coordinates that the sup-norm bound has to control
    at j = N and j = N+1; the value 1/2 shows that no representative comes
    within distance 1/2 of |phi_1(1,-1,1,-1,...)|.
    """
    value = minimize_linear_over_max(example_53_terms(N))
    if value != HALF:
        raise InconsistencyError(f"lower bound {value} differs from 1/2 at N={N}", [{"N": N}])
    return value


# ---------------------------------------------------------------------------
# example bundles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClaimSpec:
    name: str
    check: Callable  # () -> (status or Verdict or bool, detail)
    expect: bool = True
    required: bool = True


@dataclass(frozen=True, eq=False)
class ExampleBundle:
    id: str
    title: str
    system: object
    claims: tuple = field(default=())

    @property
    def expected_claims(self) -> list:
        return [{"name": c.name, "expect": "holds" if c.expect else "fails", "required": c.required}
                for c in self.claims]

    def run(self) -> Report:
        rep = Report(f"example {self.id}: {self.title}")
        for c in self.claims:
            out = c.check()
            if isinstance(out, Verdict):
                rep.add_verdict(c.name, out, expect=c.expect, required=c.required)
            elif isinstance(out, Report):
                rep.add(c.name, out.status if c.expect else _negate(out.status), {"report": out.to_dict()},
                        required=c.required)
            else:
                status, detail = out
                rep.add(c.name, status, detail, c.required)
                if status == PASS and "message" in detail:
                    rep.notes.append(detail["message"])
        return rep


def _negate(status):
    return {PASS: FAIL, FAIL: PASS}.get(status, status)


def _claim_status(rep: Report, name):
    c = rep.claim(name)
    return c.status, c.detail


def _edges_not_hom(sys, depth):
    rows = []
    for i, j in sys.generating_pairs(depth):
        v = lm.is_lattice_hom(sys.phi(j, i))
        rows.append({"i": i, "j": j, **v.to_dict()})
    ok = all(r["status"] == FAIL for r in rows)
    return (PASS if ok else FAIL), {"edges": rows}


def _isometry_claim(sys, cone, samples, seed, depth=4):
    """Sampled check that the cone legs preserve the certified colimit norm, exactly."""
    rng = rng_for(seed, "isometry")
    mismatches = []
    for _ in range(samples):
        i = rng.randint(1, depth)
        x = random_c00(rng)
        bracket = dl.colimit_norm(dl.class_of(sys, i, x), horizon=i + 4)
        img = cone.leg(i)(x)
        if bracket.certified_limit is None or ep_norm(img, cone.target) != bracket.certified_limit:
            mismatches.append({"i": i, "x": x.to_dict(), "leg_norm": str(ep_norm(img, cone.target)),
                               "limit": str(bracket.certified_limit)})
    if mismatches:
        return Verdict(False, "structural", {"mismatches": mismatches[:3]})
    return Verdict(True, "sampled", seed=seed, samples=samples)


def _once(fn):
    return functools.lru_cache(maxsize=None)(fn)


def _averaging_bundle(ex_id, title, p, category, depth, seed, works: bool):
    sys = dl.averaging_system(p, category)
    cone = dl.xprime_cone(p)
    val = _once(lambda: dl.validate_system(sys, depth, seed))
    claims = [
        ClaimSpec("system valid (identity, cocycle)", lambda: (
            PASS if all(val().claim(n).status == PASS for n in ("identity edges", "cocycle")) else FAIL,
            {"validation": val().to_dict()})),
        ClaimSpec("edges IP on truncations", lambda: _claim_status(val(), "edges IP")),
        ClaimSpec("edges not lattice homomorphisms", lambda: _edges_not_hom(sys, depth)),
    ]
    if works:
        struct = _once(lambda: dl.verify_structure(sys, cone, depth=4, seed=seed))
        claims.append(ClaimSpec("images coincide", lambda: _claim_status(struct(), "images coincide with the model")))
        claims.append(ClaimSpec("legs compatible with the edges", lambda: (
            PASS, {"factoring_map": dl.build_factoring_map(sys, cone, depth=4, seed=seed).system.name})))
        if sys.category.normed:
            claims.append(ClaimSpec("legs isometric (sampled)",
                                    lambda: _isometry_claim(sys, cone, 100, seed), required=False))
    else:
        claims.append(ClaimSpec("distance lower bound 1/2 for N = 1..10", lambda: _lower_bound_claim(range(1, 11))))
        a = dl.ColimitElement(sys, 1, ALTERNATING)
        claims.append(ClaimSpec(
            "class of (1,-1,1,-1,...) is nonzero",
            lambda: dl.elements_equal(a, dl.class_of(sys, 1, []), "exact", k_max=6), expect=False))
        claims.append(ClaimSpec(
            "lattice operation depends on the representative index",
            lambda: _discrepancy_claim(sys)))
    return ExampleBundle(ex_id, title, sys, tuple(claims))


def _lower_bound_claim(Ns):
    values = {N: example_53_lower_bound(N) for N in Ns}
    dropped = minimize_linear_over_max(example_53_terms(1, drop_average=True))
    ok = all(v == HALF for v in values.values()) and dropped == 0
    return (PASS if ok else FAIL), {"values": {str(N): fmt_rat(v) for N, v in values.items()},
                                    "without_average_term": fmt_rat(dropped),
                                    "message": "lower bound = 1/2 (exact)"}


def _discrepancy_claim(sys):
    a = dl.ColimitElement(sys, 1, seq_unit(1))
    b = dl.ColimitElement(sys, 1, seq_unit(2))
    w = dl.lattice_op_discrepancy("sup", a, b, k_max=4)
    return (PASS if w is not None else FAIL), {"witness": w}


def _eventually_constant_bundle(depth=6, seed=0):
    sys = dl.eventually_constant_system()
    cone = dl.eventually_constant_cone()
    c = SpaceTag("c")
    c0 = SpaceTag("c0_closure_model")
    xs = [EPSeq.finite([ONE] * n) for n in range(1, depth + 1)]
    bound = EPSeq.constant(1)

    def dims():
        rows = []
        for i in range(1, depth + 1):
            L = cone.leg(i)
            W = i + 1
            cols = [L(unit(i, k)).take(W) for k in range(i)]
            rows.append({"i": i, "dim": sys.objects(i), "image_rank": rank(cols)})
        ok = all(r["dim"] == r["i"] == r["image_rank"] for r in rows)
        return (PASS if ok else FAIL), {"objects": rows}

    def not_aip():
        T = cone.leg(1)
        v = lm.is_almost_interval_preserving(T)
        probe_x, probe_y = T.separation_probes[0]
        cert = lm.separation_certificate(T, probe_x, probe_y)
        ok = (not v.holds) and v.method == "certificate" and cert.bound == Fraction(1, 4) and cert.verify(T)
        return (PASS if ok else FAIL), {"verdict": v.to_dict(), "bound": fmt_rat(cert.bound)}

    claims = (
        ClaimSpec("system valid", lambda: (dl.validate_system(sys, depth, seed).status, {})),
        ClaimSpec("each c_i finite-dimensional of dimension i", dims),
        ClaimSpec("inclusion c_1 -> c not AIP (certificate, bound 1/4)", not_aip),
        ClaimSpec("increasing non-Cauchy witness accepted in c",
                  lambda: verify_increasing_non_cauchy(c, xs, bound, 1)),
        ClaimSpec("same witness rejected in c0_closure_model (membership)",
                  lambda: verify_increasing_non_cauchy(c0, xs, bound, 1), expect=False),
        ClaimSpec("disjoint witness accepted in c",
                  lambda: verify_disjoint_witness(c, bound, [seq_unit(n) for n in range(1, depth + 1)], 1)),
        ClaimSpec("limit not promoted to AIP legs",
                  lambda: dl.promote_limit(sys, cone, "BL_AIPLH", depth=3), expect=False),
    )
    return ExampleBundle("6.1", "eventually constant sequences inside c", sys, claims)


def _band_bundle(ex_id, space, seed=0, n_bands=8):
    rng = rng_for(seed, "bands", ex_id)
    bands = [BandProjection.first(space, i) for i in range(1, n_bands + 1)]
    if space.kind == "c":
        probe = EPSeq.constant(1)

        def violated():
            r = check_band_density(space, bands, [probe], HALF)
            norms = r.claims[0].detail["norms"]
            ok = r.claims[0].status == FAIL and all(n == "1" for n in norms) and len(norms) == n_bands
            return (PASS if ok else FAIL), {"report": r.to_dict()}

        claims = (ClaimSpec("probe (1,1,...) violates density for every band (eps = 1/2)", violated),)
        return ExampleBundle(ex_id, "coordinate bands in c", None, claims)
    probes = [EPSeq.zero()] + [random_c00(rng, max_len=n_bands) for _ in range(20)]

    def satisfied():
        r = check_band_density(space, bands, probes, Fraction(1, 1000))
        return r.status, {"report": r.to_dict()}

    claims = (ClaimSpec("finitely supported probes satisfy density", satisfied),)
    return ExampleBundle(ex_id, f"coordinate bands in {space}", None, claims)


def permanence_experiment(seed=0, systems=10, samples=10, horizon=8) -> Verdict:
    """Increasing order-bounded sequences in colimits of finite-dimensional IPLH chains are Cauchy.

    In a finite-dimensional object with bound ``x``, the sup-norm increments
    of an increasing sequence sum to at most ``||x||_1``; the experiment
    checks this exactly on seeded sequences pushed into the colimit model.
    """
    rng = rng_for(seed, "permanence")
    checked = 0
    for _ in range(systems):
        sys = dl.inclusion_chain()
        i = rng.randint(1, 4)
        for _ in range(samples):
            x = tuple(Fraction(rng.randint(0, 8), rng.choice((1, 2, 4))) for _ in range(i))
            terms, cur = [], tuple(ZERO for _ in range(i))
            for _ in range(horizon):
                cur = tuple(c + random_unit_interval(rng) * (b - c) for c, b in zip(cur, x))
                terms.append(cur)
            k = i + rng.randint(0, 3)
            pushed = [sys.push(t, i, k) for t in terms]
            total = sum((max(abs(b - a) for a, b in zip(u, v)) for u, v in zip(pushed, pushed[1:])), ZERO)
            checked += 1
            if total > sum(x, ZERO):
                return Verdict(False, "structural", {"bound": list(map(str, x)), "total_variation": str(total)})
    return Verdict(True, "sampled", seed=seed, samples=checked,
                   notes=("sum of increments bounded by ||x||_1, so every sampled sequence is Cauchy",))


def _atomic_bundle(seed=0):
    space = SpaceTag("c0_closure_model")
    rng = rng_for(seed, "atomic")
    n_bands = 8
    bands = [BandProjection.first(space, i) for i in range(1, n_bands + 1)]
    probes = [random_c00(rng, max_len=n_bands) for _ in range(20)]

    def compact_ranges_are_ideals():
        out = {}
        for i in range(1, n_bands + 1):
            cols = [band_project(bands[i - 1], seq_unit(k)).take(n_bands + 1) for k in range(1, n_bands + 2)]
            out[str(i)] = is_ideal(n_bands + 1, cols).to_dict()
        ok = all(v["holds"] for v in out.values())
        return (PASS if ok else FAIL), {"ideals": out}

    def idempotent():
        bad = [p.to_dict() for P in bands for p in probes if band_project(P, band_project(P, p)) != band_project(P, p)
               or (abs(band_project(P, abs(p))) & (abs(p) - band_project(P, abs(p)))) != EPSeq.zero()]
        return (PASS if not bad else FAIL), {"violations": bad[:3]}

    claims = (
        ClaimSpec("compactly supported functions are dense (band condition)",
                  lambda: check_band_density(space, bands, probes, Fraction(1, 1000))),
        ClaimSpec("ranges P_K(E) are ideals (finite-dimensional, order continuous)", compact_ranges_are_ideals),
        ClaimSpec("band projections idempotent with disjoint complements", idempotent),
        ClaimSpec("c-type witness rejected (membership)", lambda: verify_increasing_non_cauchy(
            space, [EPSeq.finite([ONE] * n) for n in range(1, 6)], EPSeq.constant(1), 1), expect=False),
        ClaimSpec("permanence experiment on finite-dimensional IPLH chains",
                  lambda: permanence_experiment(seed), required=False),
    )
    return ExampleBundle("6.9-atomic", "functions on the discrete space N", None, claims)


EXAMPLE_IDS = ("5.1", "5.2", "5.3", "5.4", "6.1", "6.8-c0", "6.8-c", "6.9-atomic")


def build_example(ex_id: str, seed: int = 0) -> ExampleBundle:
    if ex_id == "5.1":
        return _averaging_bundle("5.1", "l^1 averaging system", 1, "NL_IP", 8, seed, works=True)
    if ex_id == "5.2":
        return _averaging_bundle("5.2", "c00 averaging system", "c00", "VL_IP", 6, seed, works=True)
    if ex_id == "5.3":
        return _averaging_bundle("5.3", "l^inf averaging system (normed)", "inf", "BL_IP", 6, seed, works=False)
    if ex_id == "5.4":
        return _averaging_bundle("5.4", "l^inf averaging system (vector lattices)", "inf", "VL_IP", 6, seed,
                                 works=False)
    if ex_id == "6.1":
        return _eventually_constant_bundle(seed=seed)
    if ex_id == "6.8-c0":
        return _band_bundle("6.8-c0", SpaceTag("c0_closure_model"), seed)
    if ex_id == "6.8-c":
        return _band_bundle("6.8-c", SpaceTag("c"), seed)
    if ex_id == "6.9-atomic":
        return _atomic_bundle(seed)
    raise UnknownExample(ex_id)
