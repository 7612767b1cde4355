"""Command-line front end.

Exit codes: 0 the property holds (or every claim passes), 1 it fails, 2 usage
or parse error, 3 inconclusive (sampled positive or horizon exhausted).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import dirlimit as dl
from . import latmaps as lm
from . import ordercont as oc
from .errors import LatlimError, ParseError, SupportTooLarge, UnknownExample
from .report import FAIL, INCONCLUSIVE, PASS, Report, Verdict

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

PROPERTIES = {
    "positive": "positive",
    "lattice-hom": "hom",
    "interval-preserving": "IP",
    "almost-interval-preserving": "AIP",
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple = ()
    mode: str = "exact"
    seed: Optional[int] = None
    samples: int = 32
    horizon: int = 10
    cap: int = 1 << 16
    output: str = "text"

    def __post_init__(self):
        if self.mode == "sampled" and self.seed is None:
            raise ParseError("--seed is required with --mode sampled")

    @property
    def effective_seed(self) -> int:
        return 0 if self.seed is None else self.seed


class UsageError(Exception):
    pass


def _load_json(path):
    if path is None:
        raise UsageError("missing input file")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc.msg})") from exc


def _exit_for_status(status: str) -> int:
    return {PASS: EXIT_HOLDS, FAIL: EXIT_FAILS, INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(status, EXIT_INCONCLUSIVE)


def _emit(cfg: RunConfig, payload: dict, text: str, out):
    if cfg.output == "machine":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _verdict_text(name: str, v: Verdict) -> str:
    lines = [f"{name}: {v.status.upper()} ({v.method})"]
    if v.witness is not None:
        lines.append("witness: " + json.dumps(v.witness, sort_keys=True))
    if v.method == "sampled":
        lines.append(f"seed={v.seed} samples={v.samples}")
    lines.extend(f"note: {n}" for n in v.notes)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check_map(cfg: RunConfig, prop: str, out) -> int:
    data = _load_json(cfg.inputs[0])
    try:
        T = lm.map_from_dict(data)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"bad map description: {exc}") from exc
    key = PROPERTIES[prop]
    seed = cfg.effective_seed
    if cfg.mode == "sampled" and isinstance(T, lm.MatrixMap) and key in ("IP", "AIP"):
        v = lm.sampled_interval_preserving(T, seed, cfg.samples)
    elif key in ("IP", "AIP"):
        fn = lm.is_interval_preserving if key == "IP" else lm.is_almost_interval_preserving
        v = fn(T, cfg.cap, seed, cfg.samples, cfg.horizon)
    elif key == "hom":
        v = lm.is_lattice_hom(T, seed)
    else:
        v = lm.is_positive(T, seed, cfg.samples)
    payload = {"command": "check-map", "property": prop, "map": T.to_dict(), "verdict": v.to_dict()}
    _emit(cfg, payload, _verdict_text(prop, v), out)
    return _exit_for_status(v.status)


def _default_cone(sys: dl.DirectSystem) -> dl.Cone:
    gen = sys.description.get("generator", {}).get("kind")
    if gen == "averaging":
        return dl.xprime_cone(sys.objects(1))
    if gen == "inclusion":
        return dl.inclusion_cone()
    if gen == "eventually_constant":
        return dl.eventually_constant_cone()
    raise UsageError("no built-in cone for this system")


def cmd_colimit(cfg: RunConfig, action: str, args, out) -> int:
    sys_ = dl.system_from_dict(_load_json(cfg.inputs[0]))
    depth = args.depth
    if action == "validate":
        rep = dl.validate_system(sys_, depth, cfg.effective_seed)
        return _emit_report(cfg, rep, out)
    if action == "norm":
        a = dl.ColimitElement.from_dict(sys_, _load_json(args.element))
        bracket = dl.colimit_norm(a, cfg.horizon)
        payload = {"command": "colimit norm", "element": a.to_dict(), "bracket": bracket.to_dict()}
        seq = ", ".join(str(v) for v in bracket.upper_sequence)
        text = f"norms along the chain: {seq}\n"
        if bracket.certified_limit is not None:
            text += f"certified limit = {bracket.certified_limit} ({bracket.certificate})"
        else:
            text += "limit not certified"
        _emit(cfg, payload, text, out)
        return EXIT_HOLDS if bracket.certified_limit is not None else EXIT_INCONCLUSIVE
    if action == "equal":
        a = dl.ColimitElement.from_dict(sys_, _load_json(args.a))
        b = dl.ColimitElement.from_dict(sys_, _load_json(args.b))
        mode = "exact" if cfg.mode in ("exact", "sampled") else cfg.mode
        v = dl.elements_equal(a, b, mode, args.k_max, cfg.horizon)
        payload = {"command": "colimit equal", "a": a.to_dict(), "b": b.to_dict(), "verdict": v.to_dict()}
        _emit(cfg, payload, _verdict_text("equal", v), out)
        return _exit_for_status(v.status)
    if action == "factor":
        fmap = dl.build_factoring_map(sys_, _default_cone(sys_), depth=min(depth, 6), seed=cfg.effective_seed)
        rep = fmap.report(depth=min(depth, 6), seed=cfg.effective_seed, samples=cfg.samples,
                          isometry=sys_.category.normed, horizon=cfg.horizon)
        return _emit_report(cfg, rep, out)
    if action == "structure":
        rep = dl.verify_structure(sys_, _default_cone(sys_), depth=min(depth, 6), seed=cfg.effective_seed)
        return _emit_report(cfg, rep, out)
    raise UsageError(f"unknown colimit action {action!r}")


def _emit_report(cfg: RunConfig, rep: Report, out) -> int:
    _emit(cfg, rep.to_dict(), rep.to_text(), out)
    return _exit_for_status(rep.status)


def cmd_example(cfg: RunConfig, ex_id: str, out) -> int:
    bundle = oc.build_example(ex_id, cfg.effective_seed)
    rep = bundle.run()
    return _emit_report(cfg, rep, out)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--input", help="JSON description file")
    p.add_argument("--mode", default="exact", choices=("exact", "sampled", "seminorm"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--cap", type=int, default=1 << 16)
    p.add_argument("--format", default="text", choices=("text", "machine"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latlim", description="Exact checks for lattice maps and direct limits.")
    sub = parser.add_subparsers(dest="command", required=True)

    cm = sub.add_parser("check-map", help="decide a property of a map")
    _common(cm)
    cm.add_argument("--property", required=True, choices=sorted(PROPERTIES))

    co = sub.add_parser("colimit", help="work with a direct system")
    co.add_argument("action", choices=("validate", "norm", "equal", "factor", "structure"))
    _common(co)
    co.add_argument("--depth", type=int, default=6)
    co.add_argument("--k-max", dest="k_max", type=int, default=8)
    co.add_argument("--element")
    co.add_argument("--a")
    co.add_argument("--b")

    ex = sub.add_parser("example", help="run a prebuilt example bundle")
    ex.add_argument("id", help="one of " + ", ".join(oc.EXAMPLE_IDS))
    ex.add_argument("--seed", type=int, default=None)
    ex.add_argument("--format", default="text", choices=("text", "machine"))
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_HOLDS
    try:
        cfg = RunConfig(
            command=args.command,
            inputs=(getattr(args, "input", None),),
            mode=getattr(args, "mode", "exact"),
            seed=args.seed,
            samples=getattr(args, "samples", 32),
            horizon=getattr(args, "horizon", 10),
            cap=getattr(args, "cap", 1 << 16),
            output=args.format,
        )
        if args.command == "check-map":
            return cmd_check_map(cfg, args.property, out)
        if args.command == "colimit":
            return cmd_colimit(cfg, args.action, args, out)
        return cmd_example(cfg, args.id, out)
    except UnknownExample as exc:
        print(f"error: unknown example {exc.args[0]!r}; known: {', '.join(oc.EXAMPLE_IDS)}", file=sys.stderr)
        return EXIT_USAGE
    except SupportTooLarge as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LatlimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
