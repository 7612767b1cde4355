"""Direct systems of lattices and the colimit built from representatives.

The colimit is never materialized as a quotient of a product space.  An
element is a class ``(i, x)`` with ``x`` in the object at index ``i``, and two
classes are equal when their representatives agree after being pushed to a
common later index.  Everything else (lattice operations, the quotient
seminorm, the map out of the colimit induced by a compatible cone) is computed
on representatives.

Index sets are either the chain 1, 2, 3, ... generated by a rule, or a finite
directed poset given explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import fdlat
from .errors import (
    ConeIncompatible,
    DifferentSystems,
    EdgesNotZero,
    NoCommonIndex,
    NotContractive,
    ParseError,
)
from .latmaps import (
    MatrixMap,
    SequenceMap,
    averaging,
    check_property,
    compose,
    is_interval_preserving,
    is_lattice_hom,
    map_from_dict,
)
from .ratcore import ZERO, fmt_rat, fmt_vec, in_span, mat, rat, rref, unit, vec
from .report import FAIL, INCONCLUSIVE, PASS, SKIPPED, Report, Verdict
from .sampling import random_c00, random_epseq, random_vec, rng_for
from .seqlat import EPSeq, NormValue, SpaceTag, ep_norm, stabilization_index

# ---------------------------------------------------------------------------
# category tags
# ---------------------------------------------------------------------------

REGULAR_TAGS = {
    "VL_LH": ("hom",),
    "VL_IPLH": ("IP", "hom"),
    "NL_LH": ("hom",),
    "NL_AIPLH": ("AIP", "hom"),
    "NL_IPLH": ("IP", "hom"),
    "BL_LH": ("hom",),
    "BL_AIPLH": ("AIP", "hom"),
}
EXCEPTIONAL_TAGS = {
    "VL_IP": ("IP",),
    "NL_IP": ("IP",),
    "NL_AIP": ("AIP",),
    "BL_IP": ("IP",),
    "BL_AIP": ("AIP",),
    "BL_IPLH": ("IP", "hom"),
}


@dataclass(frozen=True)
class CategoryTag:
    """Objects (VL, NL, BL) and morphisms (LH, IPLH, ...) of a category."""

    name: str

    def __post_init__(self):
        if self.name not in REGULAR_TAGS and self.name not in EXCEPTIONAL_TAGS:
            raise ValueError(f"unknown category tag {self.name!r}")

    @property
    def edge_properties(self) -> tuple:
        return REGULAR_TAGS.get(self.name) or EXCEPTIONAL_TAGS[self.name]

    @property
    def exceptional(self) -> bool:
        return self.name in EXCEPTIONAL_TAGS

    @property
    def normed(self) -> bool:
        return self.name[:2] in ("NL", "BL")

    @property
    def banach(self) -> bool:
        return self.name.startswith("BL")

    def __str__(self):
        return self.name


EXCEPTIONAL_NOTE = (
    "exceptional category tag: edges need not be lattice homomorphisms, so the "
    "standard construction is only attempted (its lattice structure and "
    "universal property are not guaranteed)"
)
BANACH_NOTE = "completion of the union of images is not represented; normed machinery and certificates are reused"


# ---------------------------------------------------------------------------
# norms of elements
# ---------------------------------------------------------------------------

def vector_norm(x, p) -> NormValue:
    """Exact p-norm of a coordinate vector, p in {1, 2, "inf"}."""
    if p == "inf":
        return NormValue("exact", max((abs(v) for v in x), default=ZERO))
    if p == 1:
        return NormValue("exact", sum((abs(v) for v in x), ZERO))
    if p == 2:
        return NormValue("exact_sqrt", sum((v * v for v in x), ZERO))
    raise ValueError(f"unsupported exponent {p!r}")


def matrix_contractive(T: MatrixMap, p) -> Verdict:
    """Exact test of operator norm <= 1 on (Q^n, p-norm)."""
    A = T.entries
    if p == "inf" or p == 1:
        rows = A if p == "inf" else tuple(T.column(k) for k in range(T.n_in))
        sums = [sum((abs(v) for v in r), ZERO) for r in rows]
        worst = max(sums, default=ZERO)
        if worst <= 1:
            return Verdict(True, "structural")
        return Verdict(False, "structural", {"norm": fmt_rat(worst), "exponent": str(p)})
    if p == 2:
        # ||A||_2 <= 1 iff I - A^T A is positive semidefinite
        n = T.n_in
        M = [[(1 if r == c else 0) - sum((A[k][r] * A[k][c] for k in range(len(A))), ZERO) for c in range(n)]
             for r in range(n)]
        if _psd(M):
            return Verdict(True, "structural")
        return Verdict(False, "structural", {"reason": "I - A^T A is not positive semidefinite"})
    raise ValueError(f"unsupported exponent {p!r}")


def _psd(M) -> bool:
    M = [[Fraction(v) for v in row] for row in M]
    while M:
        d = M[0][0]
        if d < 0:
            return False
        if d == 0:
            if any(v != 0 for v in M[0]):
                return False
            M = [row[1:] for row in M[1:]]
            continue
        M = [[M[r][c] - M[r][0] * M[0][c] / d for c in range(1, len(M))] for r in range(1, len(M))]
    return True


# ---------------------------------------------------------------------------
# direct systems
# ---------------------------------------------------------------------------

def _identity_sequence_map(tag: SpaceTag) -> SequenceMap:
    return SequenceMap(
        "identity", (("space", str(tag)),), lambda s: s.canonical(), tag, tag,
        truncation=lambda n: (tuple(unit(n, r) for r in range(n)), n),
        nonnegative_coefficients=True, contractive=True,
    )


@dataclass(eq=False)
class DirectSystem:
    """A direct system indexed by the chain 1, 2, ... or by a finite directed poset.

    ``objects(i)`` is an int d (meaning Q^d) or a :class:`SpaceTag`;
    ``edge(j, i)`` is the connecting map from index i to index j >= i.
    ``certificates`` names the regimes under which negative equality
    verdicts and norm limits are definitive: ``injective_edges``,
    ``isometric_edges``, ``zero_edges``, ``stabilization``.
    """

    name: str
    category: CategoryTag
    objects: Callable
    edge: Callable
    index: str = "nat_chain"
    elements: tuple = ()
    order: frozenset = frozenset()
    norm: object = "inf"
    certificates: tuple = ()
    stabilization: Optional[Callable] = None
    description: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_chain(self) -> bool:
        return self.index == "nat_chain"

    def le(self, i, j) -> bool:
        if self.is_chain:
            return i <= j
        return (i, j) in self.order

    def indices(self, depth: int = 0):
        if self.is_chain:
            return list(range(1, depth + 1))
        return list(self.elements)

    def generating_pairs(self, depth: int = 0):
        """Pairs (i, j), i < j, whose edges are checked for the category's properties."""
        idx = self.indices(depth)
        return [(i, j) for i in idx for j in idx if i != j and self.le(i, j)]

    def upper_bounds(self, i, j, limit: Optional[int] = None):
        if self.is_chain:
            lo = max(i, j)
            return list(range(lo, max(lo, limit or lo) + 1))
        return [k for k in self.elements if self.le(i, k) and self.le(j, k)]

    def common_index(self, i, j):
        ups = self.upper_bounds(i, j)
        if not ups:
            raise NoCommonIndex(f"indices {i} and {j} have no common upper bound")
        return ups[0]

    def largest(self):
        if self.is_chain:
            return None
        for k in self.elements:
            if all(self.le(i, k) for i in self.elements):
                return k
        return None

    def object_norm(self, i):
        space = self.objects(i)
        return space.norm_exponent if isinstance(space, SpaceTag) else self.norm

    def identity(self, i):
        space = self.objects(i)
        if isinstance(space, SpaceTag):
            return _identity_sequence_map(space)
        return MatrixMap.identity(space)

    def phi(self, j, i):
        """The connecting map from index i to index j."""
        if i == j:
            return self.identity(i)
        if not self.le(i, j):
            raise ValueError(f"index {i} is not below {j}")
        key = (j, i)
        if key not in self._cache:
            self._cache[key] = self.edge(j, i)
        return self._cache[key]

    def push(self, x, i, j):
        return self.phi(j, i)(x)

    def norm_of(self, i, x) -> NormValue:
        space = self.objects(i)
        if isinstance(space, SpaceTag):
            return ep_norm(x, space)
        return vector_norm(x, self.norm)

    def zero(self, i):
        space = self.objects(i)
        return EPSeq.zero() if isinstance(space, SpaceTag) else (ZERO,) * space

    def random_element(self, i, rng, positive=False):
        space = self.objects(i)
        if isinstance(space, SpaceTag):
            if space.kind in ("lp", "c00", "c0_closure_model"):
                return random_c00(rng, positive=positive)
            return random_epseq(rng, space, positive)
        return random_vec(rng, space, positive)

    def to_dict(self) -> dict:
        return dict(self.description) or {"name": self.name, "category": str(self.category)}


def _chain_matrix_system(name, category, dim, rows_for, certificates=(), norm="inf", description=None):
    def edge(j, i):
        return MatrixMap(rows_for(j, i), dim(i))

    return DirectSystem(name, CategoryTag(category), dim, edge, norm=norm, certificates=certificates,
                        description=description or {})


def averaging_system(p=1, category=None) -> DirectSystem:
    """Each object is the same sequence space; phi_ji averages positions i..2j-i-1 in pairs."""
    tag = averaging(1, 1, p).domain
    if category is None:
        category = "VL_IP" if tag.kind == "c00" else "NL_IP"
    return DirectSystem(
        f"averaging({tag})", CategoryTag(category), lambda i: tag, lambda j, i: averaging(i, j, tag),
        certificates=("stabilization",), stabilization=stabilization_index,
        description={"category": category, "index": {"kind": "nat_chain"},
                     "generator": {"kind": "averaging", "p": str(tag)}},
    )


def inclusion_chain(category="VL_IPLH", norm="inf") -> DirectSystem:
    """Q^1 -> Q^2 -> ... by appending zeros."""
    def rows(j, i):
        return tuple(unit(i, r) if r < i else (ZERO,) * i for r in range(j))

    return _chain_matrix_system(
        "inclusions", category, lambda i: i, rows, ("injective_edges", "isometric_edges"), norm,
        {"category": category, "index": {"kind": "nat_chain"}, "generator": {"kind": "inclusion"}, "norm": str(norm)})


def eventually_constant_system(category="BL_LH") -> DirectSystem:
    """Q^i read as sequences constant from position i on; edges repeat the last coordinate."""
    def rows(j, i):
        return tuple(unit(i, min(r, i - 1)) for r in range(j))

    return _chain_matrix_system(
        "eventually_constant", category, lambda i: i, rows, ("injective_edges", "isometric_edges"), "inf",
        {"category": category, "index": {"kind": "nat_chain"}, "generator": {"kind": "eventually_constant"}})


def zero_chain(dim=1, category="VL_IPLH") -> DirectSystem:
    """The chain Q^dim -> Q^dim -> ... with zero edges."""
    def rows(j, i):
        if i == j:
            return tuple(unit(dim, r) for r in range(dim))
        return tuple((ZERO,) * dim for _ in range(dim))

    return _chain_matrix_system(
        "zero_edges", category, lambda i: dim, rows, ("zero_edges",), "inf",
        {"category": category, "index": {"kind": "nat_chain"}, "generator": {"kind": "zero", "dim": dim}})


def poset_system(elements, order_pairs, dims, edges, category="VL_LH", norm="inf", name="poset") -> DirectSystem:
    """A finite poset system.

    ``order_pairs`` generate the order (reflexive-transitive closure is
    taken); ``edges`` maps pairs ``(i, j)`` with i < j to matrices.  Missing
    edges are composed along a path of given ones.
    """
    elements = tuple(elements)
    dims = dict(dims)
    order = {(e, e) for e in elements} | {tuple(p) for p in order_pairs} | set(edges)
    for a, b in order:
        if a not in dims or b not in dims:
            raise ValueError(f"order pair ({a}, {b}) mentions an unknown index")
    changed = True
    while changed:
        changed = False
        for a, b in list(order):
            for c, d in list(order):
                if b == c and (a, d) not in order:
                    order.add((a, d))
                    changed = True
    for a, b in order:
        if a != b and (b, a) in order:
            raise ValueError(f"order is not antisymmetric: {a} and {b}")
    given = {}
    for (i, j), T in edges.items():
        T = T if isinstance(T, MatrixMap) else MatrixMap.of(T, dims[i])
        if T.n_in != dims[i] or T.n_out != dims[j]:
            raise ValueError(f"edge ({i}, {j}) has shape {T.n_out}x{T.n_in}, expected {dims[j]}x{dims[i]}")
        given[(i, j)] = T

    def edge(j, i):
        if (i, j) in given:
            return given[(i, j)]
        # breadth-first search for a path of given edges
        frontier = [(i, MatrixMap.identity(dims[i]))]
        seen = {i}
        while frontier:
            nxt = []
            for a, M in frontier:
                for (s, t), T in sorted(given.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
                    if s == a and t not in seen and (t, j) in order:
                        M2 = compose(T, M)
                        if t == j:
                            return M2
                        seen.add(t)
                        nxt.append((t, M2))
            frontier = nxt
        return MatrixMap.zero(dims[j], dims[i])

    certs = ("zero_edges",) if all(T.is_zero() for T in given.values()) else ()
    description = {
        "category": category,
        "index": {"kind": "poset", "elements": list(elements), "order": sorted([list(p) for p in order_pairs])},
        "objects": {str(k): v for k, v in dims.items()},
        "edges": [{"from": i, "to": j, "matrix": [fmt_vec(r) for r in T.entries]} for (i, j), T in given.items()],
        "norm": str(norm),
    }
    return DirectSystem(name, CategoryTag(category), lambda i: dims[i], edge, index="poset",
                        elements=elements, order=frozenset(order), norm=norm, certificates=certs,
                        description=description)


def finite_chain(matrices, category="VL_IPLH", norm="inf", name="finite_chain") -> DirectSystem:
    """Chain 1 -> 2 -> ... -> n+1 with the given consecutive edge matrices."""
    mats = [T if isinstance(T, MatrixMap) else MatrixMap.of(T) for T in matrices]
    dims = {1: mats[0].n_in if mats else 1}
    for k, T in enumerate(mats, start=1):
        if T.n_in != dims[k]:
            raise ValueError(f"edge {k} has domain Q^{T.n_in}, expected Q^{dims[k]}")
        dims[k + 1] = T.n_out
    elements = tuple(range(1, len(mats) + 2))
    edges = {(k, k + 1): T for k, T in enumerate(mats, start=1)}
    return poset_system(elements, [], dims, edges, category, norm, name)


def random_ip_chain(rng, length=3, max_dim=3, zero=False, category="VL_IP") -> DirectSystem:
    """Finite chain of random interval preserving (or zero) edges."""
    from .sampling import random_ip_matrix

    dims = [rng.randint(1, max_dim) for _ in range(length + 1)]
    mats = []
    for k in range(length):
        if zero:
            mats.append(MatrixMap.zero(dims[k + 1], dims[k]))
        else:
            mats.append(MatrixMap(random_ip_matrix(rng, dims[k + 1], dims[k]), dims[k]))
    return finite_chain(mats, category, name="random_ip_chain")


def system_from_dict(data: dict) -> DirectSystem:
    """Read a system description (chain generator or explicit poset)."""
    try:
        category = data.get("category", "VL_LH")
        index = data.get("index", {"kind": "nat_chain"})
        if index.get("kind") == "nat_chain":
            gen = data["generator"]
            kind = gen["kind"]
            if kind == "averaging":
                return averaging_system(gen.get("p", 1), category)
            if kind == "inclusion":
                return inclusion_chain(category, _norm_exp(data.get("norm", "inf")))
            if kind == "eventually_constant":
                return eventually_constant_system(category)
            if kind == "zero":
                return zero_chain(int(gen.get("dim", 1)), category)
            raise ParseError(f"unknown chain generator {kind!r}")
        if index.get("kind") == "poset":
            elements = index["elements"]
            dims = {e: int(data["objects"][str(e)]) for e in elements}
            edges = {}
            for e in data.get("edges", []):
                i, j = e["from"], e["to"]
                edges[(i, j)] = MatrixMap.of(mat(e["matrix"]), dims[i])
            return poset_system(elements, index.get("order", []), dims, edges, category,
                                _norm_exp(data.get("norm", "inf")), data.get("name", "poset"))
        raise ParseError(f"unknown index kind {index.get('kind')!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad system description: {exc}") from exc


def _norm_exp(text):
    text = str(text)
    return "inf" if text in ("inf", "linf") else int(text)


# ---------------------------------------------------------------------------
# comparing maps
# ---------------------------------------------------------------------------

def _pad(rows, n_in, width):
    return tuple(tuple(r) + (ZERO,) * (width - n_in) for r in rows)


def compare_maps(S, T, n_out: int, rng, samples: int = 4):
    """None if S and T agree, else a witness.

    Matrices are compared entrywise.  Sequence maps are compared on their
    first ``n_out`` outputs (exact for those outputs) and then on seeded
    inputs (exact equality of eventually periodic images).
    """
    if isinstance(S, MatrixMap) and isinstance(T, MatrixMap):
        if S == T:
            return None
        k = next(k for k in range(S.n_in) if S.column(k) != T.column(k))
        return {"e": k + 1, "left": fmt_vec(S.column(k)), "right": fmt_vec(T.column(k))}
    if S.truncation is not None and T.truncation is not None:
        (rs, ns), (rt, nt) = S.truncate(n_out), T.truncate(n_out)
        w = max(ns, nt)
        if _pad(rs, ns, w) != _pad(rt, nt, w):
            r = next(r for r in range(n_out) if _pad(rs, ns, w)[r] != _pad(rt, nt, w)[r])
            return {"truncation": n_out, "row": r + 1, "left": fmt_vec(_pad(rs, ns, w)[r]),
                    "right": fmt_vec(_pad(rt, nt, w)[r])}
    for _ in range(samples):
        if isinstance(S.domain, int):
            x = random_vec(rng, S.domain)
        else:
            x = random_epseq(rng, S.domain if S.domain.kind != "lp" else None)
        a, b = S(x), T(x)
        if a != b:
            fmt = lambda v: v.to_dict() if isinstance(v, EPSeq) else fmt_vec(v)  # noqa: E731
            return {"x": fmt(x), "left": fmt(a), "right": fmt(b)}
    return None


def _edge_for_property(T, n_out):
    """Matrices as they are; sequence maps through their truncation."""
    if isinstance(T, MatrixMap):
        return T
    rows, n_in = T.truncate(n_out)
    return MatrixMap(rows, n_in)


def _is_zero_map(T, n_out):
    if isinstance(T, MatrixMap):
        return T.is_zero()
    rows, _ = T.truncate(n_out)
    return all(v == 0 for r in rows for v in r)


def edge_contractive(sys: DirectSystem, j, i) -> Verdict:
    T = sys.phi(j, i)
    if isinstance(T, MatrixMap):
        return matrix_contractive(T, sys.norm)
    if T.contractive:
        return Verdict(True, "structural", notes=("contractive by construction",))
    return Verdict(False, "structural", {"edge": [i, j], "reason": "not known to be contractive"})


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_system(sys: DirectSystem, depth: int = 6, seed: int = 0, samples: int = 4) -> Report:
    """Identity edges, cocycle law, and the category's edge properties.

    Sequence edges are compared on their first ``2 * depth + 2`` outputs and
    on seeded inputs; interval preservation of sequence edges is decided
    exactly on those truncations.
    """
    rep = Report(f"validate {sys.name} [{sys.category}]")
    rng = rng_for(seed, "validate")
    N = 2 * depth + 2
    idx = sys.indices(depth)
    if not sys.is_chain:
        bad = [(a, b) for a in idx for b in idx if not sys.upper_bounds(a, b)]
        rep.add("directed", not bad, {"pairs_without_upper_bound": [list(p) for p in bad[:5]]})
        if bad:
            rep.notes.append("non-directed index set rejected")
            return rep

    id_bad = []
    for i in idx:
        if sys.is_chain:
            raw = sys.edge(i, i)
            w = compare_maps(raw, sys.identity(i), N, rng, samples)
            if w is not None:
                id_bad.append({"index": i, **w})
    rep.add("identity edges", not id_bad, {"violations": id_bad})

    triples = [(i, j, k) for i in idx for j in idx for k in idx
               if i != j and j != k and sys.le(i, j) and sys.le(j, k)]
    cocycle_bad = []
    for i, j, k in triples:
        w = compare_maps(compose(sys.phi(k, j), sys.phi(j, i)), sys.phi(k, i), N, rng, samples)
        if w is not None:
            cocycle_bad.append({"i": i, "j": j, "k": k, **w})
    rep.add("cocycle", not cocycle_bad, {"triples": len(triples), "violations": cocycle_bad,
                                         "truncation": N})

    pairs = sys.generating_pairs(depth)
    for prop in ("IP", "AIP", "hom"):
        required = prop in sys.category.edge_properties
        if not required and not (prop == "hom" or prop == "IP"):
            continue
        verdicts = []
        for i, j in pairs:
            T = sys.phi(j, i)
            v = is_lattice_hom(T, seed) if prop == "hom" else check_property(_edge_for_property(T, N), prop, seed=seed)
            verdicts.append({"i": i, "j": j, **v.to_dict()})
        statuses = {d["status"] for d in verdicts}
        status = FAIL if FAIL in statuses else (INCONCLUSIVE if INCONCLUSIVE in statuses else PASS)
        rep.add(f"edges {prop}", status, {"edges": verdicts}, required=required)

    if sys.category.normed:
        bad = [v.witness for i, j in pairs for v in [edge_contractive(sys, j, i)] if not v.holds]
        rep.add("edges contractive", not bad, {"violations": bad}, required=False)
    if sys.category.exceptional:
        rep.notes.append(EXCEPTIONAL_NOTE)
    if sys.category.banach:
        rep.notes.append(BANACH_NOTE)
    if any(not isinstance(sys.phi(j, i), MatrixMap) for i, j in pairs[:1]):
        rep.notes.append(f"sequence edges checked on their first {N} outputs")
    return rep


def is_contractive_system(sys: DirectSystem, i, horizon) -> bool:
    js = [j for j in sys.upper_bounds(i, i, horizon) if j != i] if sys.is_chain else \
        [j for j in sys.elements if j != i and sys.le(i, j)]
    return all(edge_contractive(sys, j, i).holds for j in js)


# ---------------------------------------------------------------------------
# colimit elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ColimitElement:
    """The class of ``rep`` (an element of the object at ``index``)."""

    system: DirectSystem
    index: object
    rep: object
    notes: tuple = ()

    def push(self, k) -> "ColimitElement":
        return ColimitElement(self.system, k, self.system.push(self.rep, self.index, k), self.notes)

    def to_dict(self) -> dict:
        rep = self.rep.to_dict() if isinstance(self.rep, EPSeq) else fmt_vec(self.rep)
        out = {"index": self.index, "rep": rep}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_dict(cls, system: DirectSystem, data: dict) -> "ColimitElement":
        try:
            index = data["index"]
            rep = data["rep"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"element needs 'index' and 'rep': {exc}") from exc
        space = system.objects(index)
        if isinstance(space, SpaceTag):
            rep = EPSeq.from_dict(rep) if isinstance(rep, dict) else EPSeq.finite(vec(rep))
        else:
            rep = vec(rep)
            if len(rep) != space:
                raise ParseError(f"representative of length {len(rep)} at an index of dimension {space}")
        return cls(system, index, rep)


def _sub(x, y):
    return x - y if isinstance(x, EPSeq) else tuple(a - b for a, b in zip(x, y))


def _is_zero_elem(x):
    return x == EPSeq.zero() if isinstance(x, EPSeq) else all(v == 0 for v in x)


def _difference_at(a, b, k):
    return _sub(a.push(k).rep, b.push(k).rep)


def elements_equal(a: ColimitElement, b: ColimitElement, mode: str = "exact", k_max: int = 8,
                   horizon: int = 12) -> Verdict:
    """Decide whether two classes are equal.

    ``exact``: look for k <= k_max with phi_ki a = phi_kj b.  ``seminorm``:
    follow ||phi_li a - phi_lj b|| along l <= horizon and decide whether it
    tends to zero.  Negative answers are definitive only under one of the
    system's certificates, otherwise they are inconclusive.
    """
    if a.system is not b.system:
        raise DifferentSystems("elements come from different systems")
    sys = a.system
    ups = sys.upper_bounds(a.index, b.index, k_max)
    if not ups:
        raise NoCommonIndex(f"indices {a.index} and {b.index} have no common upper bound")
    k0 = ups[0]
    if mode == "exact":
        for k in ups:
            if _is_zero_elem(_difference_at(a, b, k)):
                return Verdict(True, "structural", {"k": k})
        if not sys.is_chain:
            return Verdict(False, "structural", {"checked": ups, "reason": "no common upper bound identifies them"})
        return _negative_or_inconclusive(sys, a, b, k0, ups[-1])
    if mode == "seminorm":
        d = _difference_at(a, b, k0)
        norms = []
        for l in range(k0, max(horizon, k0) + 1) if sys.is_chain else [k0]:
            dl = sys.push(d, k0, l)
            norms.append(sys.norm_of(l, dl))
            if norms[-1].is_zero():
                return Verdict(True, "structural", {"k": l, "norms": [str(v) for v in norms]})
        limit, why = _certified_limit(sys, k0, d)
        shown = [str(v) for v in norms]
        if limit is not None:
            return Verdict(limit.is_zero(), "certificate",
                           {"limit": str(limit), "certificate": why, "norms": shown})
        return Verdict(False, "sampled", {"norms": shown, "horizon": horizon,
                                          "reason": "no certificate; seminorm not shown to vanish up to horizon"})
    raise ValueError(f"unknown mode {mode!r}")


def _negative_or_inconclusive(sys, a, b, k0, k_last) -> Verdict:
    d = _difference_at(a, b, k0)
    fmt = lambda v: v.to_dict() if isinstance(v, EPSeq) else fmt_vec(v)  # noqa: E731
    if "injective_edges" in sys.certificates:
        return Verdict(False, "certificate", {"k": k0, "difference": fmt(d), "certificate": "injective edges"})
    if "zero_edges" in sys.certificates:
        return Verdict(True, "certificate", {"k": k0 + 1, "certificate": "zero edges"})
    if "stabilization" in sys.certificates and sys.stabilization is not None:
        j = sys.stabilization(k0, d)
        dj = sys.push(d, k0, j)
        if _is_zero_elem(dj):
            return Verdict(True, "certificate", {"k": j, "certificate": "stabilization"})
        return Verdict(False, "certificate", {
            "k": j, "difference": fmt(dj), "certificate": "stabilization",
            "statement": f"sup norm of the pushed difference is constant and nonzero from index {j} on"})
    return Verdict(False, "sampled", {"searched_up_to": k_last, "reason": "not found up to k_max; no certificate"})


def _certified_limit(sys: DirectSystem, i, x):
    """(limit of ||phi_ji x||, certificate name) when a certificate applies."""
    if "zero_edges" in sys.certificates:
        return (sys.norm_of(i, x) if (not sys.is_chain and sys.largest() == i) else NormValue("exact", ZERO)), \
            "zero edges"
    if "isometric_edges" in sys.certificates:
        return sys.norm_of(i, x), "isometric edges"
    if "stabilization" in sys.certificates and sys.stabilization is not None:
        j = sys.stabilization(i, x)
        return sys.norm_of(j, sys.push(x, i, j)), f"stabilization at index {j}"
    if not sys.is_chain and sys.largest() is not None:
        top = sys.largest()
        return sys.norm_of(top, sys.push(x, i, top)), "largest index"
    return None, None


# ---------------------------------------------------------------------------
# lattice operations and norms on the colimit
# ---------------------------------------------------------------------------

REP_ONLY_NOTE = "representative-level only: edges are not lattice homomorphisms"


def _lattice_op(op, x, y):
    if isinstance(x, EPSeq):
        return {"sup": lambda: x | y, "inf": lambda: x & y, "abs": lambda: abs(x)}[op]()
    return {"sup": lambda: fdlat.sup(x, y), "inf": lambda: fdlat.inf(x, y), "abs": lambda: fdlat.absolute(x)}[op]()


def colimit_lattice_op(op: str, a: ColimitElement, b: Optional[ColimitElement] = None, at=None) -> ColimitElement:
    """Apply sup/inf/abs at a common index (the least one unless ``at`` is given)."""
    if op not in ("sup", "inf", "abs"):
        raise ValueError(f"unknown lattice operation {op!r}")
    if b is None:
        if op != "abs":
            raise ValueError(f"{op} needs two elements")
        b = a
    if a.system is not b.system:
        raise DifferentSystems("elements come from different systems")
    sys = a.system
    k = at if at is not None else sys.common_index(a.index, b.index)
    if not (sys.le(a.index, k) and sys.le(b.index, k)):
        raise NoCommonIndex(f"index {k} is not above both {a.index} and {b.index}")
    r = _lattice_op(op, a.push(k).rep, b.push(k).rep)
    notes = () if "hom" in sys.category.edge_properties else (REP_ONLY_NOTE,)
    return ColimitElement(sys, k, r, notes)


def lattice_op_discrepancy(op, a, b, k_max=6):
    """Search for indices k < l where computing ``op`` at k and at l gives different classes."""
    sys = a.system
    ups = sys.upper_bounds(a.index, b.index, k_max)
    for k in ups:
        for l in ups:
            if l <= k:
                continue
            rk = colimit_lattice_op(op, a, b, at=k)
            rl = colimit_lattice_op(op, a, b, at=l)
            v = elements_equal(rk, rl, "exact", k_max)
            if not v.holds and not v.inconclusive:
                return {"k": k, "l": l, "at_k": rk.to_dict(), "at_l": rl.to_dict(), "verdict": v.to_dict()}
    return None


@dataclass(frozen=True)
class NormBracket:
    """Values ||phi_ji x|| for j = i, i+1, ..., horizon, and the limit when certified."""

    index: object
    upper_sequence: tuple
    certified_limit: Optional[NormValue] = None
    certificate: Optional[str] = None

    @property
    def nonincreasing(self) -> bool:
        s = self.upper_sequence
        return all(not (s[k + 1] > s[k]) for k in range(len(s) - 1))

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "upper_sequence": [str(v) for v in self.upper_sequence],
            "certified_limit": None if self.certified_limit is None else str(self.certified_limit),
            "certificate": self.certificate,
        }


def colimit_norm(a: ColimitElement, horizon: int = 10) -> NormBracket:
    """Quotient seminorm of a class.

    For contractive systems ``sup_{k >= j} ||phi_ki x|| = ||phi_ji x||``, so
    the seminorm is the limit of the nonincreasing sequence ``||phi_ji x||``.
    """
    sys = a.system
    if not sys.category.normed:
        raise NotContractive(f"category {sys.category} carries no norm")
    if not is_contractive_system(sys, a.index, horizon):
        raise NotContractive("some edge is not contractive; the limit formula does not apply")
    if sys.is_chain:
        js = list(range(a.index, max(horizon, a.index) + 1))
    else:
        js = [k for k in sys.elements if sys.le(a.index, k)]
    values = tuple(sys.norm_of(j, sys.push(a.rep, a.index, j)) for j in js)
    limit, why = _certified_limit(sys, a.index, a.rep)
    return NormBracket(a.index, values, limit, why)


# ---------------------------------------------------------------------------
# cones and the induced map
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cone:
    """A target space with one leg per index."""

    target: object
    legs: Callable
    name: str = "cone"

    def leg(self, i):
        return self.legs(i)


def _cone_violation(sys, cone, depth, seed, samples):
    rng = rng_for(seed, "cone")
    N = 2 * depth + 2
    for i, j in sys.generating_pairs(depth):
        w = compare_maps(compose(cone.leg(j), sys.phi(j, i)), cone.leg(i), N, rng, samples)
        if w is not None:
            return {"i": i, "j": j, **w}
    return None


@dataclass(frozen=True, eq=False)
class FactoringMap:
    """chi(class of (i, x)) = leg_i(x)."""

    system: DirectSystem
    cone: Cone

    def __call__(self, a: ColimitElement):
        if a.system is not self.system:
            raise DifferentSystems("element from another system")
        return self.cone.leg(a.index)(a.rep)

    def report(self, depth=4, seed=0, samples=20, isometry=False, horizon=10) -> Report:
        sys = self.system
        rep = Report(f"factoring map for {sys.name}")
        rng = rng_for(seed, "factor")
        bad, checked = [], 0
        idx = sys.indices(depth)
        for _ in range(samples):
            i = rng.choice(idx)
            x = sys.random_element(i, rng)
            for j in idx:
                if sys.le(i, j):
                    checked += 1
                    a, b = ColimitElement(sys, i, x), ColimitElement(sys, j, sys.push(x, i, j))
                    if self(a) != self(b):
                        bad.append({"i": i, "j": j, "x": a.to_dict()})
        v = Verdict(not bad, "sampled" if not bad else "structural", {"violations": bad[:3]} if bad else None,
                    seed=seed, samples=checked)
        rep.add_verdict("well-defined on equal classes", v)
        if isometry:
            rep.add_verdict("isometric", self.isometry_verdict(depth, seed, samples, horizon))
        return rep

    def isometry_verdict(self, depth=4, seed=0, samples=20, horizon=10) -> Verdict:
        sys = self.system
        rng = rng_for(seed, "isometry")
        idx = sys.indices(depth)
        for _ in range(samples):
            i = rng.choice(idx)
            a = ColimitElement(sys, i, sys.random_element(i, rng))
            bracket = colimit_norm(a, horizon)
            img = self(a)
            n_img = ep_norm(img, self.cone.target) if isinstance(img, EPSeq) else vector_norm(img, sys.norm)
            if bracket.certified_limit is None:
                return Verdict(False, "sampled", {"element": a.to_dict(), "reason": "uncertified norm"})
            if n_img != bracket.certified_limit:
                return Verdict(False, "structural", {"element": a.to_dict(), "image_norm": str(n_img),
                                                     "colimit_norm": str(bracket.certified_limit)})
        return Verdict(True, "sampled", seed=seed, samples=samples)


def build_factoring_map(sys: DirectSystem, cone: Cone, depth: int = 4, seed: int = 0, samples: int = 4) -> FactoringMap:
    """The map out of the colimit induced by a compatible cone."""
    w = _cone_violation(sys, cone, depth, seed, samples)
    if w is not None:
        raise ConeIncompatible(f"leg_{w['j']} o phi_{w['j']}{w['i']} != leg_{w['i']}", w)
    return FactoringMap(sys, cone)


def xprime_cone(p=1) -> Cone:
    """Legs x -> x' from the averaging system into its sequence space."""
    from .latmaps import xprime_leg

    tag = averaging(1, 1, p).domain
    return Cone(tag, lambda i: xprime_leg(i, tag), "xprime")


def inclusion_cone(space="c00") -> Cone:
    from .latmaps import finite_inclusion

    return Cone(SpaceTag.parse(space), lambda n: finite_inclusion(n, space), "finite_inclusion")


def eventually_constant_cone() -> Cone:
    from .latmaps import eventually_constant_inclusion

    return Cone(SpaceTag("c"), eventually_constant_inclusion, "eventually_constant_inclusion")


# ---------------------------------------------------------------------------
# degenerate limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DegenerateLimit:
    """Limit of a system whose non-identity edges are all zero."""

    system: DirectSystem
    top: object
    dim: int

    def leg(self, i) -> MatrixMap:
        n = self.system.objects(i)
        if self.top is not None and i == self.top:
            return MatrixMap.identity(n)
        return MatrixMap.zero(self.dim, n)

    def to_dict(self) -> dict:
        if self.top is None:
            return {"object": "zero space", "legs": "all zero"}
        return {"object": f"object at {self.top}", "top": self.top, "dim": self.dim,
                "legs": f"identity at {self.top}, zero elsewhere"}


def degenerate_limit(sys: DirectSystem, depth: int = 6) -> DegenerateLimit:
    N = 2 * depth + 2
    for i, j in sys.generating_pairs(depth):
        if not _is_zero_map(sys.phi(j, i), N):
            T = sys.phi(j, i)
            raise EdgesNotZero(f"edge from {i} to {j} is not zero",
                               {"i": i, "j": j, "edge": T.to_dict()})
    top = sys.largest()
    if top is None:
        return DegenerateLimit(sys, None, 0)
    return DegenerateLimit(sys, top, sys.objects(top))


# ---------------------------------------------------------------------------
# psi_i = (phi_ji)_j is interval preserving iff the edges out of i vanish
# ---------------------------------------------------------------------------

def _stacked_psi(sys, i, depth):
    js = [j for j in (range(i, i + depth + 1) if sys.is_chain else sys.elements) if sys.le(i, j)]
    N = depth + 2
    blocks = []
    for j in js:
        T = sys.phi(j, i)
        rows, n_in = T.truncate(N)
        blocks.append((j, rows, n_in))
    width = max(n for _, _, n in blocks)
    rows = tuple(r for _, rs, n in blocks for r in _pad(rs, n, width))
    return js, MatrixMap(rows, width), blocks


def check_psi_ip_iff_zero(sys: DirectSystem, i, depth: int = 3) -> Report:
    """The stacked map x -> (phi_ji x)_{j >= i} is IP iff every phi_ji with j > i is zero."""
    js, M, blocks = _stacked_psi(sys, i, depth)
    ip = is_interval_preserving(M)
    zero = all(all(v == 0 for r in rows for v in r) for j, rows, _ in blocks if j != i)
    rep = Report(f"psi_{i} IP <=> zero edges ({sys.name})")
    rep.add_verdict("psi IP", ip, expect=zero, required=False)
    rep.add("edges out of i zero", PASS if zero else FAIL, {"indices": js}, required=False)
    rep.add("psi IP <=> edges zero", ip.holds == zero, {"psi_ip": ip.holds, "edges_zero": zero})
    if not isinstance(sys.phi(i, i), MatrixMap):
        rep.notes.append(f"sequence objects truncated to their first {depth + 2} coordinates")
    return rep


# ---------------------------------------------------------------------------
# structure of the limit and promotion
# ---------------------------------------------------------------------------

def _legs_fn(legs):
    if isinstance(legs, Cone):
        return legs.leg
    if callable(legs):
        return legs
    legs = list(legs)
    return lambda i: legs[i - 1]


def _finite_leg_columns(L, window):
    return [L(unit(L.domain, k)).take(window) if not isinstance(L, MatrixMap) else L.column(k)
            for k in range(L.domain)]


def _window(legs_list):
    w = 1
    for L in legs_list:
        if isinstance(L, MatrixMap):
            w = max(w, L.n_out)
            continue
        for k in range(L.domain):
            col = L(unit(L.domain, k)).canonical()
            w = max(w, len(col.prefix) + len(col.period))
    return w


def verify_structure(sys: DirectSystem, legs, depth: int = 4, seed: int = 0, samples: int = 20) -> Report:
    """Images nested, sublattices for hom tags, ideals for IP+hom tags."""
    leg = _legs_fn(legs)
    idx = sys.indices(depth)
    rep = Report(f"structure of {sys.name}")
    legs_list = [leg(i) for i in idx]
    finite = all(isinstance(L, MatrixMap) or L.finite_domain for L in legs_list)
    props = sys.category.edge_properties
    if finite:
        W = _window(legs_list)
        cols = {i: [tuple(c) + (ZERO,) * (W - len(c)) for c in _finite_leg_columns(leg(i), W)] for i in idx}
        bad = []
        for i in idx:
            for j in idx:
                if i != j and sys.le(i, j):
                    basis, _ = rref(cols[j])
                    for k, c in enumerate(cols[i]):
                        if not in_span(c, basis):
                            bad.append({"i": i, "j": j, "e": k + 1, "image": fmt_vec(c)})
                            break
        rep.add("images nested", not bad, {"violations": bad, "window": W})
        if "hom" in props:
            v = [is_lattice_hom(leg(i), seed) for i in idx]
            _aggregate(rep, "images are sublattices (legs are homs)", v, idx)
        if "IP" in props and "hom" in props:
            ideals = {i: fdlat.is_ideal(W, cols[i]) for i in idx}
            ok = all(v.holds for v in ideals.values())
            rep.add("images are ideals", ok, {str(i): v.to_dict() for i, v in ideals.items()})
        return rep
    rng = rng_for(seed, "structure")
    if all(getattr(L, "right_inverse", None) is not None for L in legs_list):
        bad = []
        for i, L in zip(idx, legs_list):
            for _ in range(samples):
                y = sys.random_element(i, rng)
                if L(L.right_inverse(y)) != y:
                    bad.append({"i": i, "y": y.to_dict()})
                    break
        detail = {"right_inverses_checked": samples * len(idx), "violations": bad}
        rep.add("images coincide with the model", not bad, detail)
        rep.add("images nested", not bad, {"reason": "every image is the whole model"})
    else:
        w = _cone_violation(sys, Cone(None, leg), depth, seed, 4)
        rep.add("images nested", INCONCLUSIVE if w is None else FAIL,
                {"reason": "leg_j o phi_ji = leg_i on samples", "violation": w})
    if "hom" in props:
        _aggregate(rep, "images are sublattices (legs are homs)", [is_lattice_hom(L, seed) for L in legs_list], idx)
    return rep


def _aggregate(rep, name, verdicts, idx):
    statuses = {v.status for v in verdicts}
    status = FAIL if FAIL in statuses else (INCONCLUSIVE if INCONCLUSIVE in statuses else PASS)
    rep.add(name, status, {str(i): v.to_dict() for i, v in zip(idx, verdicts)})


def promote_limit(sys: DirectSystem, legs, target_tag, depth: int = 4, seed: int = 0) -> Verdict:
    """Run the target category's checkers on every leg."""
    tag = target_tag if isinstance(target_tag, CategoryTag) else CategoryTag(target_tag)
    leg = _legs_fn(legs)
    results = []
    method = "structural"
    for i in sys.indices(depth):
        for prop in tag.edge_properties:
            v = check_property(leg(i), prop, seed=seed)
            results.append({"leg": i, "property": prop, **v.to_dict()})
            if not v.holds and not v.inconclusive:
                return Verdict(False, v.method, {"leg": i, "property": prop, "verdict": v.to_dict()})
            if v.inconclusive:
                method = "sampled"
            elif method != "sampled" and v.method != "structural":
                method = v.method
    return Verdict(True, method, {"target": str(tag), "legs": results},
                   seed=seed if method == "sampled" else None,
                   samples=len(results) if method == "sampled" else None)


def class_of(sys: DirectSystem, i, rep) -> ColimitElement:
    space = sys.objects(i)
    if isinstance(space, SpaceTag):
        rep = rep if isinstance(rep, EPSeq) else EPSeq.finite(vec(rep))
    else:
        rep = vec(rep)
    return ColimitElement(sys, i, rep)


__all__ = [
    "CategoryTag", "DirectSystem", "ColimitElement", "Cone", "NormBracket", "FactoringMap", "DegenerateLimit",
    "averaging_system", "inclusion_chain", "eventually_constant_system", "zero_chain", "poset_system",
    "finite_chain", "random_ip_chain", "system_from_dict", "validate_system", "elements_equal",
    "colimit_lattice_op", "lattice_op_discrepancy", "colimit_norm", "build_factoring_map", "degenerate_limit",
    "check_psi_ip_iff_zero", "verify_structure", "promote_limit", "xprime_cone", "inclusion_cone",
    "eventually_constant_cone", "class_of", "vector_norm", "matrix_contractive", "compare_maps",
]
