"""Command-line entry point: ``uptest list`` and ``uptest run``."""

from __future__ import annotations

import argparse
import json
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__, _accel
from .experiments import REGISTRY, ParamError, list_experiments, run

SCHEMA = "v1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _parse_params(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParamError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="uptest", description="Seeded experiments for unitary property testers.")
    sub = ap.add_subparsers(dest="command", required=True)

    ls = sub.add_parser("list", help="list registered experiments")
    ls.add_argument("--json", action="store_true", help="emit the registry with parameter schemas as JSON")

    r = sub.add_parser("run", help="run one experiment and write a JSON report")
    r.add_argument("--experiment", "-e", required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", "-o", help="report path (stdout if omitted)")
    r.add_argument("--param", "-p", action="append", default=[], metavar="KEY=VALUE")
    r.add_argument("--trials", type=int)
    mode = r.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True)
    mode.add_argument("--sampled", dest="exact", action="store_false")
    r.add_argument("--csv", help="also write the experiment's main table as CSV (where available)")
    return ap


def _cmd_list(args) -> int:
    entries = list_experiments()
    if args.json:
        print(json.dumps({"schema": SCHEMA, "experiments": entries}, indent=2, sort_keys=True))
        return EXIT_OK
    width = max(len(e["name"]) for e in entries)
    for e in entries:
        params = ", ".join(f"{k}={v['default']}" for k, v in e["params"].items())
        print(f"{e['name']:<{width}}  [{e['anchor']}]  {e['summary']}" + (f"  ({params})" if params else ""))
    return EXIT_OK


def _write_csv(path: str, payload: dict) -> None:
    from .polymethod import surface_csv

    if "surface" in payload:
        Path(path).write_text(surface_csv({"cells": payload["surface"]}))
    elif "rows" in payload and payload["rows"]:
        import csv

        keys = sorted(payload["rows"][0])
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for row in payload["rows"]:
                w.writerow({k: row.get(k) for k in keys})


def _cmd_run(args) -> int:
    if args.experiment not in REGISTRY:
        print(f"uptest: unknown experiment {args.experiment!r}; see 'uptest list'", file=sys.stderr)
        return EXIT_USAGE
    try:
        params = _parse_params(args.param)
        result = run(args.experiment, params, seed=args.seed, trials=args.trials, exact=args.exact)
    except ParamError as exc:
        print(f"uptest: {exc}", file=sys.stderr)
        return EXIT_USAGE
    exp = REGISTRY[args.experiment]
    report = {
        "schema": SCHEMA,
        "experiment": exp.name,
        "anchor": exp.anchor,
        "criterion": exp.criterion,
        "seed": args.seed,
        "mode": "exact" if args.exact else "sampled",
        "params": result["params"],
        "trials": result["trials"],
        "versions": {"uptest": __version__, "numpy": np.__version__, "python": platform.python_version(), "backend": _accel.backend()},
        "passed": result["payload"]["passed"],
        "payload": result["payload"],
    }
    text = json.dumps(report, indent=2, sort_keys=True, default=_default)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.csv:
        _write_csv(args.csv, result["payload"])
    for c in result["payload"]["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        return _cmd_list(args)
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
