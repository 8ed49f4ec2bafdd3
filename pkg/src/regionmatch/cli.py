"""Command line harness: bench, verify and gen subcommands.

Workloads come from one of three sources: synthetic flags (--N, --alpha),
a position trace (--trace) or a region-set file (--regions). CSV goes to
standard output or --out; diagnostics go to standard error. Exit codes:
0 success, 1 workload or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .bench import ALGORITHM_NAMES, run_bench, runs_to_csv, verify_workload
from .config import DEFAULT_GBM_CELLS, MatcherConfig
from .geometry import COUNT_ONLY, ENUMERATE, RegionSet
from .regionfile import read_regions, write_regions
from .workload import (
    DEFAULT_SPACE_LENGTH,
    SyntheticSpec,
    TraceSpec,
    gen_uniform_dd,
    load_trace,
)


def _add_workload_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, help="total synthetic regions (split evenly between roles)")
    parser.add_argument("--alpha", type=float, help="synthetic overlapping degree")
    parser.add_argument("--L", type=float, default=DEFAULT_SPACE_LENGTH, help="routing space length")
    parser.add_argument("--seed", type=int, default=0, help="synthetic generator seed")
    parser.add_argument("--d", type=int, default=1, help="synthetic dimensionality")
    parser.add_argument("--trace", help="position trace file to ingest instead of synthetic data")
    parser.add_argument("--width", type=float, default=100.0, help="region width for trace ingestion")
    parser.add_argument("--regions", help="region-set file to load instead of synthetic data")


class SystemExit2(Exception):
    """Usage error surfaced with exit code 2."""


def _parse_workers(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad worker list {text!r}") from err
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"worker counts must be >= 1, got {text!r}")
    return values


def _load_workload(args: argparse.Namespace) -> tuple[RegionSet, RegionSet, str]:
    if args.trace:
        spec = TraceSpec(path=args.trace, region_width=args.width)
        S, U = load_trace(spec)
        return S, U, f"trace:{args.trace}"
    if args.regions:
        S, U = read_regions(args.regions)
        return S, U, f"file:{args.regions}"
    if args.N is None or args.alpha is None:
        raise SystemExit2("a workload needs --N and --alpha, or --trace, or --regions")
    spec = SyntheticSpec(
        total_regions=args.N, alpha=args.alpha, space_length=args.L, seed=args.seed
    )
    S, U = gen_uniform_dd(spec, args.d)
    return S, U, str(args.alpha)


def _cmd_bench(args: argparse.Namespace) -> int:
    S, U, label = _load_workload(args)
    algos = list(ALGORITHM_NAMES) if args.algo == "all" else [args.algo]
    cfg = MatcherConfig(
        mode=COUNT_ONLY if args.mode == "count" else ENUMERATE,
        gbm_ncells=args.ncells,
    )
    runs = run_bench(algos, S, U, label, args.P, args.reps, cfg)
    csv_text = runs_to_csv(runs)
    if args.out == "-":
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    S, U, label = _load_workload(args)
    cfg = MatcherConfig(gbm_ncells=args.ncells)
    ok, lines = verify_workload(S, U, workers_list=args.P, cfg=cfg)
    print(f"workload {label}: N={len(S) + len(U)} d={S.dimensions}")
    for line in lines:
        print(line)
    print("VERIFY " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        total_regions=args.N, alpha=args.alpha, space_length=args.L, seed=args.seed
    )
    S, U = gen_uniform_dd(spec, args.d)
    write_regions(args.out, S, U)
    print(f"wrote {len(S) + len(U)} regions to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regionmatch",
        description="Region matching benchmark and verification harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="time matchers and emit CSV")
    bench.add_argument(
        "--algo",
        required=True,
        choices=[*ALGORITHM_NAMES, "all"],
        help="algorithm to time, or all of them",
    )
    _add_workload_flags(bench)
    bench.add_argument("--P", type=_parse_workers, default=[1], help="comma-separated worker counts")
    bench.add_argument("--reps", type=int, default=50, help="timed repetitions per configuration")
    bench.add_argument("--mode", choices=["count", "enumerate"], default="count")
    bench.add_argument("--ncells", type=int, default=DEFAULT_GBM_CELLS, help="grid cells for gbm")
    bench.add_argument("--out", default="-", help="CSV destination path, or - for stdout")
    bench.set_defaults(fn=_cmd_bench)

    verify = sub.add_parser("verify", help="cross-check all matchers on one workload")
    _add_workload_flags(verify)
    verify.add_argument("--P", type=_parse_workers, default=[1, 2, 4])
    verify.add_argument("--ncells", type=int, default=DEFAULT_GBM_CELLS)
    verify.set_defaults(fn=_cmd_verify)

    gen = sub.add_parser("gen", help="write a synthetic workload to a region-set file")
    gen.add_argument("--N", type=int, required=True)
    gen.add_argument("--alpha", type=float, required=True)
    gen.add_argument("--L", type=float, default=DEFAULT_SPACE_LENGTH)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--d", type=int, default=1)
    gen.add_argument("--out", required=True, help="destination region-set file")
    gen.set_defaults(fn=_cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit2 as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
