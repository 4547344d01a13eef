"""Command-line front end: ``generate``, ``solve``, ``bench`` and ``verify``.

Exit codes: 0 ok, 1 verification failed, 2 parse error, 3 infeasible,
4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .core import Infeasible, ParseError, format_milli, validate_solution
from .instances import FAMILY_NAMES, read_instance, read_solution, write_solution
from .solver import SolverConfig, Variant, run

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _sizes(values: list[str]) -> list[int]:
    """Accept plain sizes and ``lo:hi:step`` ranges (inclusive)."""
    out = []
    for v in values:
        if ":" in v:
            parts = [int(x) for x in v.split(":")]
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            out.extend(range(lo, hi + 1, step))
        else:
            out.append(int(v))
    return out


def cmd_generate(args) -> int:
    entries = bench.generate_suite(args.family, _sizes(args.n), args.seed, args.replicates, args.out)
    manifest = Path(args.out) / "manifest.csv"
    for e in entries:
        e.path = Path(e.path).name
    bench.write_manifest(manifest, entries)
    sys.stdout.write(manifest.read_text())
    return EXIT_OK


def _summary(sol, trace, variant) -> dict:
    st = trace.stage_ns().sum(axis=0).tolist() if trace.iterations else [0, 0, 0]
    return {
        "variant": Variant(variant).value,
        "objective": format_milli(sol.objective),
        "iterations": trace.iterations,
        "stage_ns": {"matching": st[0], "partitioning": st[1], "penalization": st[2]},
        "total_ns": trace.total_ns,
    }


def cmd_solve(args) -> int:
    g, m, ubar = read_instance(args.instance)
    cfg = SolverConfig(variant=args.variant, patience=args.patience, penalty_factor=args.penalty_factor)
    sol, trace = run(g, m, ubar, cfg)
    out = Path(args.out) if args.out else Path(args.instance).with_suffix(".sol")
    write_solution(out, sol)
    summary = _summary(sol, trace, cfg.variant)
    summary["solution"] = str(out)
    if args.format == "json":
        print(json.dumps(summary))
    else:
        print("variant,objective,iterations,stage1_ns,stage2_ns,stage3_ns,total_ns")
        st = summary["stage_ns"]
        print(f"{summary['variant']},{summary['objective']},{summary['iterations']},"
              f"{st['matching']},{st['partitioning']},{st['penalization']},{summary['total_ns']}")
    return EXIT_OK


def cmd_bench(args) -> int:
    entries = bench.read_manifest(args.manifest)
    records, series = bench.run_bench(entries, args.variants, args.parallelism,
                                      patience=args.patience, penalty_factor=args.penalty_factor)
    ratios = bench.ratio_table(records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        (out / "records.json").write_text(json.dumps(bench.records_as_dicts(records), indent=1))
        (out / "ratios.json").write_text(json.dumps(ratios, indent=1))
        (out / "stage1_series.json").write_text(json.dumps(
            [dict(zip(bench.SERIES_COLUMNS, row)) for row in series]))
    else:
        bench.write_records(out / "records.csv", records)
        bench.write_rows(out / "ratios.csv", bench.RATIO_COLUMNS, ratios)
        bench.write_rows(out / "stage1_series.csv", bench.SERIES_COLUMNS, series)
    print(",".join(bench.RATIO_COLUMNS))
    for row in ratios:
        print(",".join(str(row[c]) for c in bench.RATIO_COLUMNS))
    failed = sum(r.status != "ok" for r in records)
    if failed:
        print(f"{failed} run(s) failed; see the status/error columns", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    g, m, ubar = read_instance(args.instance)
    sol = read_solution(args.solution, g, m, ubar)
    report = validate_solution(g, sol)
    if report.ok:
        print("ok")
        return EXIT_OK
    print(f"{report.violation}: {report.detail}")
    return EXIT_INVALID


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--patience", type=int, default=20)
    p.add_argument("--penalty-factor", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmmwm", description="Partitioning min-max weighted matching")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write an instance suite and its manifest")
    p.add_argument("--family", nargs="+", choices=FAMILY_NAMES, required=True)
    p.add_argument("--n", nargs="+", required=True, help="sizes, or lo:hi:step ranges")
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("instance")
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.MP_KM_M.value)
    _solver_flags(p)
    p.add_argument("--out", help="solution file (default: instance path with .sol)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run both variants over a manifest")
    p.add_argument("manifest")
    p.add_argument("--variants", nargs="+", choices=[v.value for v in Variant],
                   default=[v.value for v in Variant])
    p.add_argument("--parallelism", type=int, default=1)
    _solver_flags(p)
    p.add_argument("--out", default="bench_out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
