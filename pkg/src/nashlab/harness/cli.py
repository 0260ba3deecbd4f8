"""Command-line entry point: ``nashlab <subcommand> --spec <file|name> --out <dir>``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import NashLabError
from .experiments import ExperimentSpec, bundled_specs, resolve_spec, run

SUBCOMMANDS = {
    "cantor": "CantorSaturation",
    "nash": "NashSuite",
    "circle": "CircleRate",
    "bump": "RescaledBump",
    "logdatum": "LogDatum",
    "torus": "TorusEnvelope",
    "budget": "BudgetTable",
}


def _print_report(report, stream=sys.stdout):
    name = report["spec"]["name"]
    for a in report["assertions"]:
        flag = "PASS" if a["pass"] else "FAIL"
        print(f"{flag}  {name}: {a['name']}  measured={a['measured']}  expected {a['expected']}", file=stream)


def _run_one(spec: ExperimentSpec, out: Path) -> bool:
    report = run(spec, out)
    _print_report(report)
    return report["pass"]


def build_parser():
    ap = argparse.ArgumentParser(prog="nashlab", description="Reproducible enstrophy-dissipation experiments.")
    ap.add_argument("--list-specs", action="store_true", help="print the bundled acceptance specs and exit")
    sub = ap.add_subparsers(dest="command")
    for cmd, kind in SUBCOMMANDS.items():
        p = sub.add_parser(cmd, help=f"run a {kind} spec")
        p.add_argument("--spec", required=True, help="spec JSON path or bundled spec name")
        p.add_argument("--out", required=True, help="output directory")
    p = sub.add_parser("report", help="run every bundled spec (or the given ones)")
    p.add_argument("--spec", action="append", help="spec path or name; repeatable")
    p.add_argument("--out", required=True, help="output directory; one subdirectory per spec")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.list_specs:
        for name, spec in bundled_specs().items():
            print(f"{name}\t{spec.kind}")
        return 0
    if args.command is None:
        ap.print_help()
        return 2
    out = Path(args.out)
    try:
        if args.command == "report":
            specs = [resolve_spec(s) for s in args.spec] if args.spec else list(bundled_specs().values())
            ok = True
            summary = {}
            for spec in specs:
                passed = _run_one(spec, out / spec.name)
                summary[spec.name] = passed
                ok &= passed
            out.mkdir(parents=True, exist_ok=True)
            (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
            return 0 if ok else 1
        spec = resolve_spec(args.spec)
        if spec.kind != SUBCOMMANDS[args.command]:
            print(f"error: spec kind {spec.kind} does not belong to '{args.command}'", file=sys.stderr)
            return 2
        return 0 if _run_one(spec, out) else 1
    except (NashLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
