"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .chevalley import CACHE_ENV
from .irreps import freudenthal, multiplicities_csv
from .rootdata import CartanError, dominant_representative
from .schubert import cell_table, cell_table_csv
from .verify import (
    BatteryConfig,
    emit_report,
    load_reports,
    recheck_flags,
    run_battery,
    summary_line,
    type_data,
    verify_case,
)

FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


def _parse_lambda(tokens: list[str]) -> tuple[int, ...]:
    parts = [p for t in tokens for p in t.replace(",", " ").split()]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"lambda must be integers, got {' '.join(tokens)!r}") from None


def _parse_type(text: str):
    """A type label, or a path to a file holding an integer matrix (JSON or whitespace rows)."""
    path = Path(text)
    if path.is_file():
        raw = path.read_text().strip()
        try:
            rows = json.loads(raw)
        except json.JSONDecodeError:
            rows = [[int(x) for x in line.replace(",", " ").split()] for line in raw.splitlines() if line.strip()]
        return rows
    return text


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_verify(args) -> int:
    cartan_input = _parse_type(args.type)
    lam = _parse_lambda(args.lam)
    report = verify_case(cartan_input, lam, seed=args.seed, random_vectors=args.random_vectors,
                         literal_dim_cap=args.literal_dim_cap, cache_dir=args.cache_dir)
    _write(emit_report([report], args.format, timings=args.timings), args.output)
    return 0 if report.passed else 1


def _battery_config(args) -> BatteryConfig:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
    overrides = {
        "types": args.types,
        "max_dim": args.max_dim,
        "max_two_rho": args.max_two_rho,
        "seed": args.seed,
        "random_vectors": args.random_vectors,
        "literal_dim_cap": args.literal_dim_cap,
        "jobs": args.jobs,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return BatteryConfig.from_dict(data)


def _cmd_battery(args) -> int:
    config = _battery_config(args)

    def progress(rep):
        if args.verbose:
            print(f"{rep.type_label or rep.cartan} {tuple(rep.lam)}: {'pass' if rep.passed else 'FAIL'}", file=sys.stderr)

    reports = run_battery(config, cache_dir=args.cache_dir, progress=progress)
    _write(emit_report(reports, args.format, timings=args.timings), args.output)
    if args.format != "text":
        print(summary_line(reports), file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_report(args) -> int:
    reports = load_reports(Path(args.input).read_text())
    consistent = True
    for r in reports:
        derived = recheck_flags(r)
        if any(r.flags.get(k) != v for k, v in derived.items()):
            consistent = False
            print(f"recorded flags disagree with recorded data for {r.type_label} {tuple(r.lam)}", file=sys.stderr)
    _write(emit_report(reports, args.format, timings=args.timings), args.output)
    return 0 if consistent and all(r.passed for r in reports) else 1


def _cmd_dump(args) -> int:
    cartan_input = _parse_type(args.type)
    lam = _parse_lambda(args.lam)
    td = type_data(cartan_input, args.cache_dir)
    if len(lam) != td.rs.rank:
        raise UsageError(f"lambda needs {td.rs.rank} coordinates")
    if args.what == "cells":
        text = cell_table_csv(cell_table(td.rs, lam))
    else:
        text = multiplicities_csv(freudenthal(td.rs, dominant_representative(td.rs, lam)[0]))
    _write(text, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loopgrass", description="Exact checks of cyclic-module series against Schubert cell counts.")
    p.add_argument("--cache-dir", default=None, help=f"structure-constant cache directory (default: ${CACHE_ENV})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_format=True):
        if with_format:
            sp.add_argument("--format", choices=FORMATS, default="text")
            sp.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identical output)")
        sp.add_argument("-o", "--output", default=None)

    v = sub.add_parser("verify", help="run every check for one lowest weight")
    v.add_argument("--type", required=True, help="type label of G (e.g. B2) or a Cartan-matrix file")
    v.add_argument("--lambda", dest="lam", nargs="+", required=True, help="anti-dominant coordinates, e.g. -1 -1")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--random-vectors", type=int, default=100)
    v.add_argument("--literal-dim-cap", type=int, default=400)
    common(v)
    v.set_defaults(func=_cmd_verify)

    b = sub.add_parser("battery", help="run every case within the configured bounds")
    b.add_argument("--config", default=None, help="JSON file with BatteryConfig fields")
    b.add_argument("--types", nargs="+", default=None)
    b.add_argument("--max-dim", type=int, default=None)
    b.add_argument("--max-two-rho", type=int, default=None)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--random-vectors", type=int, default=None)
    b.add_argument("--literal-dim-cap", type=int, default=None)
    b.add_argument("--jobs", type=int, default=None)
    common(b)
    b.set_defaults(func=_cmd_battery)

    r = sub.add_parser("report", help="re-render a saved JSON report and re-derive its flags")
    r.add_argument("--input", required=True)
    common(r)
    r.set_defaults(func=_cmd_report)

    d = sub.add_parser("dump", help="CSV dump of a cell table or multiplicity table")
    d.add_argument("what", choices=("cells", "multiplicities"))
    d.add_argument("--type", required=True)
    d.add_argument("--lambda", dest="lam", nargs="+", required=True)
    common(d, with_format=False)
    d.set_defaults(func=_cmd_dump)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, CartanError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"loopgrass: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
