"""Command-line driver: ``fixcert verify|show|engines``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .fixlocus import ENGINES
from .groebner import DEFAULT_CAP
from .jobs import JobOptions, run_paths
from .manifest import CLAIM_KINDS, ManifestError, load_manifest

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

_ENGINE_HELP = {
    "auto": "eigenspace when it applies, else minors, else elimination",
    "minors": "2x2 minors of (x | Mx) per weight block; unit weights only; exact",
    "elimination": "eliminate the torus from Mx = D(t)x; closure upper bound, escalates when nonempty",
    "eigenspace": "joint eigenspace components of diagonalisable generators; unit weights, no block swaps",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fixcert", description="Exact verification of fixed-point and real-point claims.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    v = sub.add_parser("verify", help="run the claims of a manifest or of every manifest in a directory")
    v.add_argument("path")
    v.add_argument("--claims", help="comma-separated claim kinds to run")
    v.add_argument("--engine", choices=ENGINES)
    v.add_argument("--tier", choices=("fast", "full"), default="fast")
    v.add_argument("--cap", type=int, default=DEFAULT_CAP, help="pair-reduction budget per claim")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--report", help="write the JSON report here")
    v.add_argument("--seed", type=int, default=0, help="seed for randomized checks (reports are exact)")
    s = sub.add_parser("show", help="print a parsed manifest")
    s.add_argument("path")
    sub.add_parser("engines", help="list fixed-locus engines")
    return p


def _collect(path: str) -> list[str]:
    p = Path(path)
    if p.is_dir():
        return [str(q) for q in sorted(p.glob("*.fxl"))]
    if not p.exists():
        raise FileNotFoundError(path)
    return [str(p)]


def exit_code(verdicts: Sequence[str]) -> int:
    if "Fail" in verdicts:
        return EXIT_FAIL
    if "CapExceeded" in verdicts:
        return EXIT_CAP
    return EXIT_PASS


def _summary(c) -> str:
    d = c.detail
    if c.kind == "group_type" and "order" in d:
        return f"order {d['order']}, invariant factors {d.get('invariant_factors')}, primary {d.get('primary')}"
    return str(d.get("reason") or d.get("status") or "")


def _show(path: str) -> int:
    m = load_manifest(path)
    out = {
        "id": m.id, "example": m.example, "title": m.title, "field": m.field.order,
        "ambient": m.ambient.describe(),
        "equations": [str(g) for g in m.variety.ideal.generators],
        "generators": {n: g.describe(m.ambient.coords) for n, g in zip(m.generator_names, m.generators)},
        "claims": [{"kind": c.kind, **{k: v for k, v in c.params.items() if k != "certificate"}} for c in m.claims],
    }
    print(json.dumps(out, indent=2, sort_keys=True, default=str))
    return EXIT_PASS


def _verify(a) -> int:
    claims = None
    if a.claims:
        claims = tuple(k.strip() for k in a.claims.split(",") if k.strip())
        bad = [k for k in claims if k not in CLAIM_KINDS]
        if bad:
            print(f"fixcert: unknown claim kinds {bad}", file=sys.stderr)
            return EXIT_USAGE
    paths = _collect(a.path)
    opts = JobOptions(claims, a.engine, a.tier, a.cap)
    reports = run_paths(paths, opts, a.jobs)
    verdicts = []
    for r in reports:
        print(f"{r.id}: {r.status} ({r.seconds:.2f}s)")
        for c in r.claims:
            extra = _summary(c)
            print(f"  [{c.index}] {c.kind:<20} {c.verdict:<16} {c.engine:<12} {extra}".rstrip())
            verdicts.append(c.verdict)
    if a.report:
        Path(a.report).write_text(json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2) + "\n")
    return exit_code(verdicts)


def main(argv: Sequence[str] | None = None) -> int:
    a = _parser().parse_args(argv)
    if a.command is None:
        _parser().print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if a.command == "engines":
            for name in ENGINES:
                print(f"{name:<12} {_ENGINE_HELP[name]}")
            return EXIT_PASS
        if a.command == "show":
            return _show(a.path)
        return _verify(a)
    except FileNotFoundError as e:
        print(f"fixcert: file not found: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ManifestError as e:
        print(f"fixcert: invalid manifest: {e}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
