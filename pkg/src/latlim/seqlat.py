"""Eventually periodic rational sequences.

An :class:`EPSeq` is ``prefix`` followed by ``period`` repeated forever.  This
class is closed under the lattice operations, under the pairwise averaging
maps of the l^p direct system and under band projections onto finite or
cofinite coordinate sets, which makes it an exact stand-in for elements of
c00, c, l^p and l^inf.

Sequence positions are 1-based in every public function taking an index
(``averaging_map``, ``xprime``, ``unit``); ``s[n]`` is the usual 0-based
Python access.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional

from .errors import BadIndices, EmptyPeriod, UnsupportedNorm
from .ratcore import ZERO, fmt_rat, fmt_vec, rat, vec
from .report import Verdict


@dataclass(frozen=True, eq=False)
class EPSeq:
    prefix: tuple
    period: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", vec(self.prefix))
        object.__setattr__(self, "period", vec(self.period))
        if not self.period:
            raise EmptyPeriod("an eventually periodic sequence needs a nonempty period")

    @classmethod
    def of(cls, prefix=(), period=(0,)) -> "EPSeq":
        return ep_normalize(cls(prefix, period))

    @classmethod
    def finite(cls, values) -> "EPSeq":
        return cls.of(values, (0,))

    @classmethod
    def constant(cls, c) -> "EPSeq":
        return cls.of((), (c,))

    @classmethod
    def zero(cls) -> "EPSeq":
        return cls((), (0,))

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError("sequences have no negative positions")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> tuple:
        return tuple(self[k] for k in range(n))

    def drop(self, k: int) -> "EPSeq":
        """The sequence with its first ``k`` terms removed."""
        if k <= len(self.prefix):
            return EPSeq.of(self.prefix[k:], self.period)
        r = (k - len(self.prefix)) % len(self.period)
        return EPSeq.of((), self.period[r:] + self.period[:r])

    @property
    def window(self) -> int:
        """Number of leading terms that determine the sequence (prefix + one period)."""
        return len(self.prefix) + len(self.period)

    def canonical(self) -> "EPSeq":
        return ep_normalize(self)

    def __eq__(self, other):
        if not isinstance(other, EPSeq):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.prefix == b.prefix and a.period == b.period

    def __hash__(self):
        c = self.canonical()
        return hash((c.prefix, c.period))

    def __add__(self, other):
        return ep_pointwise("add", self, other)

    def __sub__(self, other):
        return ep_pointwise("add", self, ep_pointwise("scale", other, -1))

    def __neg__(self):
        return ep_pointwise("scale", self, -1)

    def __or__(self, other):
        return ep_pointwise("sup", self, other)

    def __and__(self, other):
        return ep_pointwise("inf", self, other)

    def __abs__(self):
        return ep_pointwise("sup", self, -self)

    def __repr__(self):
        pre = ", ".join(fmt_rat(v) for v in self.prefix)
        per = ", ".join(fmt_rat(v) for v in self.period)
        return f"EPSeq([{pre}], ({per})*)"

    def to_dict(self) -> dict:
        c = self.canonical()
        return {"prefix": fmt_vec(c.prefix), "period": fmt_vec(c.period)}

    @classmethod
    def from_dict(cls, data) -> "EPSeq":
        return cls.of(data.get("prefix", []), data["period"])


def unit(n: int) -> EPSeq:
    """The unit sequence e_n (1-based)."""
    if n < 1:
        raise BadIndices("unit sequences start at position 1")
    return EPSeq.finite((0,) * (n - 1) + (1,))


def ep_normalize(s: EPSeq) -> EPSeq:
    """Canonical form: primitive period and shortest prefix."""
    period = tuple(s.period)
    if not period:
        raise EmptyPeriod("an eventually periodic sequence needs a nonempty period")
    p = len(period)
    for d in range(1, p + 1):
        if p % d == 0 and period == period[:d] * (p // d):
            period = period[:d]
            break
    prefix = list(s.prefix)
    while prefix and prefix[-1] == period[-1]:
        prefix.pop()
        period = (period[-1],) + period[:-1]
    out = EPSeq.__new__(EPSeq)
    object.__setattr__(out, "prefix", tuple(prefix))
    object.__setattr__(out, "period", period)
    return out


_BINARY = {
    "sup": max,
    "inf": min,
    "add": lambda a, b: a + b,
    "mul": lambda a, b: a * b,
}


def ep_pointwise(op: str, s: EPSeq, t) -> EPSeq:
    """Pointwise ``sup``/``inf``/``add``/``mul`` of two sequences, or ``scale`` by a rational ``t``."""
    if op == "scale":
        c = rat(t)
        return EPSeq.of(tuple(c * v for v in s.prefix), tuple(c * v for v in s.period))
    try:
        f = _BINARY[op]
    except KeyError:
        raise ValueError(f"unknown pointwise operation {op!r}") from None
    L = max(len(s.prefix), len(t.prefix))
    P = math.lcm(len(s.period), len(t.period))
    terms = [f(s[n], t[n]) for n in range(L + P)]
    return EPSeq.of(terms[:L], terms[L:])


def ep_le(s: EPSeq, t: EPSeq) -> bool:
    L = max(len(s.prefix), len(t.prefix))
    P = math.lcm(len(s.period), len(t.period))
    return all(s[n] <= t[n] for n in range(L + P))


def is_positive(s: EPSeq) -> bool:
    return all(v >= 0 for v in s.prefix + s.period)


def disjoint(s: EPSeq, t: EPSeq) -> bool:
    return (abs(s) & abs(t)) == EPSeq.zero()


# ---------------------------------------------------------------------------
# spaces and norms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceTag:
    """Which sequence space an element is claimed to live in.

    ``c0_closure_model`` is the finitely supported dense part of c0 under the
    sup norm; its completion c0 is never materialized.
    """

    kind: str
    p: Optional[int] = None

    KINDS = ("c00", "c", "c0_closure_model", "linf", "lp")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown space {self.kind!r}")
        if (self.kind == "lp") != (self.p is not None):
            raise ValueError("exactly the lp spaces carry an exponent")
        if self.p is not None and self.p < 1:
            raise ValueError("lp needs p >= 1")

    @classmethod
    def lp(cls, p: int) -> "SpaceTag":
        return cls("lp", int(p))

    @classmethod
    def parse(cls, text: str) -> "SpaceTag":
        text = text.strip()
        if text.startswith("lp(") and text.endswith(")"):
            return cls.lp(int(text[3:-1]))
        if text in ("l1", "l2"):
            return cls.lp(int(text[1]))
        return cls(text)

    @property
    def norm_exponent(self):
        """``"inf"`` for the sup-normed spaces, else p."""
        return self.p if self.kind == "lp" else "inf"

    def __str__(self):
        return f"lp({self.p})" if self.kind == "lp" else self.kind


@total_ordering
@dataclass(frozen=True)
class NormValue:
    """An exact norm.  ``exact_sqrt`` stores the square of the norm."""

    kind: str
    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("exact", "exact_sqrt", "infinite"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind != "infinite" and (self.value is None or self.value < 0):
            raise ValueError("finite norms need a nonnegative value")

    @property
    def finite(self) -> bool:
        return self.kind != "infinite"

    def squared(self) -> Optional[Fraction]:
        if self.kind == "exact":
            return self.value * self.value
        return self.value

    def _key(self):
        return (not self.finite, self.squared() if self.finite else ZERO)

    def __eq__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def is_zero(self) -> bool:
        return self.finite and self.value == 0

    def to_dict(self) -> dict:
        if self.kind == "infinite":
            return {"kind": "infinite"}
        return {"kind": self.kind, "value": fmt_rat(self.value)}

    def __str__(self):
        if self.kind == "infinite":
            return "inf"
        if self.kind == "exact_sqrt":
            return f"sqrt({fmt_rat(self.value)})"
        return fmt_rat(self.value)


def ep_norm(s: EPSeq, tag) -> NormValue:
    """Exact norm of ``s`` for the given space tag (or exponent 1, 2, ``"inf"``)."""
    p = tag.norm_exponent if isinstance(tag, SpaceTag) else tag
    s = s.canonical()
    if p == "inf":
        return NormValue("exact", max(abs(v) for v in s.prefix + s.period))
    if p not in (1, 2):
        raise UnsupportedNorm(f"exact norms exist only for p in {{1, 2, inf}}, not p={p}")
    if any(v != 0 for v in s.period):
        return NormValue("infinite")
    if p == 1:
        return NormValue("exact", sum((abs(v) for v in s.prefix), ZERO))
    return NormValue("exact_sqrt", sum((v * v for v in s.prefix), ZERO))


def is_member(s: EPSeq, tag: SpaceTag) -> Verdict:
    """Exact membership of ``s`` in the space named by ``tag``."""
    s = s.canonical()
    zero_tail = s.period == (ZERO,)
    if tag.kind in ("c00", "c0_closure_model", "lp"):
        ok, why = zero_tail, "period is not (0)"
    elif tag.kind == "c":
        ok, why = len(s.period) == 1, "period has length > 1, so the sequence does not converge"
    else:
        ok, why = True, ""
    if ok:
        return Verdict(True, "structural")
    return Verdict(False, "structural", {"sequence": s.to_dict(), "space": str(tag), "reason": why})


# ---------------------------------------------------------------------------
# the pairwise averaging maps
# ---------------------------------------------------------------------------

def _pair_average(prefix, period):
    """Average consecutive pairs of prefix+period^inf, starting at position 1."""
    prefix, period = list(prefix), tuple(period)
    if len(prefix) % 2:
        prefix.append(period[0])
        period = period[1:] + period[:1]
    if len(period) % 2:
        period = period + period
    avg = lambda seq: tuple((seq[k] + seq[k + 1]) / 2 for k in range(0, len(seq), 2))  # noqa: E731
    return avg(prefix), avg(period)


def averaging_map(i: int, j: int, s: EPSeq) -> EPSeq:
    """Apply phi_ji: keep positions < i, average the block i..2j-i-1 in pairs, shift the rest left by j-i."""
    if not (1 <= i <= j):
        raise BadIndices(f"need 1 <= i <= j, got i={i}, j={j}")
    if i == j:
        return s.canonical()
    head = s.take(i - 1)
    block = s.take(2 * j - i - 1)[i - 1:]
    averages = tuple((block[k] + block[k + 1]) / 2 for k in range(0, len(block), 2))
    tail = s.drop(2 * j - i - 1)
    return EPSeq.of(head + averages + tail.prefix, tail.period)


def xprime(i: int, s: EPSeq) -> EPSeq:
    """Keep positions < i and average everything from position i on in pairs."""
    if i < 1:
        raise BadIndices(f"need i >= 1, got {i}")
    head = s.take(i - 1)
    tail = s.drop(i - 1)
    pre, per = _pair_average(tail.prefix, tail.period)
    return EPSeq.of(head + pre, per)


def averaging_truncation(i: int, j: int, n_out: int):
    """Matrix of the first ``n_out`` outputs of phi_ji in terms of the first ``n_out + j - i`` inputs."""
    if not (1 <= i <= j):
        raise BadIndices(f"need 1 <= i <= j, got i={i}, j={j}")
    n_in = n_out + (j - i)
    rows = []
    half = Fraction(1, 2)
    for n in range(1, n_out + 1):
        row = [ZERO] * n_in
        if n < i:
            row[n - 1] = Fraction(1)
        elif n < j:
            m = n - i
            row[i - 1 + 2 * m] = half
            row[i + 2 * m] = half
        else:
            row[n - 1 + (j - i)] = Fraction(1)
        rows.append(tuple(row))
    return tuple(rows), n_in


def xprime_truncation(i: int, n_out: int):
    """Matrix of the first ``n_out`` outputs of ``xprime(i, .)``."""
    if i < 1:
        raise BadIndices(f"need i >= 1, got {i}")
    n_in = (i - 1) + 2 * max(0, n_out - (i - 1))
    n_in = max(n_in, n_out)
    rows = []
    half = Fraction(1, 2)
    for n in range(1, n_out + 1):
        row = [ZERO] * n_in
        if n < i:
            row[n - 1] = Fraction(1)
        else:
            m = n - i
            row[i - 1 + 2 * m] = half
            row[i + 2 * m] = half
        rows.append(tuple(row))
    return tuple(rows), n_in


def stabilization_index(i: int, s: EPSeq) -> int:
    """An index j >= i past which ||phi_ji s|| no longer changes.

    Once the averaged block covers the prefix of ``s``, every later block
    position only averages period entries, whose absolute values never exceed
    the sup of the shifted periodic tail; for ``s`` in c00 the image itself
    stops changing.  This holds for the l^1, l^2 and sup norms.
    """
    s = s.canonical()
    # need 2j - i - 1 >= len(prefix), i.e. the tail starts after the prefix
    j = max(i, -(-(len(s.prefix) + i + 1) // 2))
    return j


def duplicate(i: int, s: EPSeq) -> EPSeq:
    """Right inverse of ``xprime(i, .)``: repeat every entry from position i on."""
    if i < 1:
        raise BadIndices(f"need i >= 1, got {i}")
    head = s.take(i - 1)
    tail = s.drop(i - 1)
    twice = lambda seq: tuple(v for v in seq for _ in range(2))  # noqa: E731
    return EPSeq.of(head + twice(tail.prefix), twice(tail.period))
