"""Verdicts and reports.

A :class:`Verdict` is the outcome of one decision procedure; a
:class:`Report` aggregates named claims.  Both serialize to JSON with sorted
keys so identical runs produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

EXACT_METHODS = ("structural", "lp_exact", "certificate")
METHODS = EXACT_METHODS + ("sampled",)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    Anything decided by the ``sampled`` method is reported as inconclusive:
    a sampled positive, or a search that ran out of horizon without finding
    what it looked for.  Negative verdicts from the exact methods carry an
    exact witness.
    """

    holds: bool
    method: str
    witness: Optional[dict] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    notes: tuple = ()

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    @property
    def inconclusive(self) -> bool:
        return self.method == "sampled"

    @property
    def status(self) -> str:
        if self.inconclusive:
            return INCONCLUSIVE
        return PASS if self.holds else FAIL

    def with_notes(self, *notes) -> "Verdict":
        return Verdict(self.holds, self.method, self.witness, self.seed, self.samples, self.notes + notes)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"holds": self.holds, "method": self.method, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.method == "sampled":
            out["seed"] = self.seed
            out["samples"] = self.samples
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class Claim:
    name: str
    status: str
    detail: dict = field(default_factory=dict)
    required: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "required": self.required, "detail": self.detail}


@dataclass
class Report:
    title: str
    claims: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, status, detail=None, required=True) -> Claim:
        if isinstance(status, bool):
            status = PASS if status else FAIL
        claim = Claim(name, status, dict(detail or {}), required)
        self.claims.append(claim)
        return claim

    def add_verdict(self, name, verdict: Verdict, expect=True, required=True, **extra) -> Claim:
        """Record ``verdict`` as a claim that the property holds (or fails, if ``expect`` is False)."""
        if verdict.inconclusive:
            status = INCONCLUSIVE
        else:
            status = PASS if verdict.holds == expect else FAIL
        detail = {"verdict": verdict.to_dict(), "expected": "holds" if expect else "fails"}
        detail.update(extra)
        return self.add(name, status, detail, required)

    def claim(self, name) -> Claim:
        return next(c for c in self.claims if c.name == name)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.claims if c.required)

    @property
    def conclusive(self) -> bool:
        return all(c.status != INCONCLUSIVE for c in self.claims if c.required)

    @property
    def status(self) -> str:
        if not self.ok:
            return FAIL
        return PASS if self.conclusive else INCONCLUSIVE

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "status": self.status,
            "claims": [c.to_dict() for c in self.claims],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.title}: {self.status.upper()}"]
        for c in self.claims:
            tag = "" if c.required else " (info)"
            lines.append(f"  [{c.status:^12}] {c.name}{tag}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
