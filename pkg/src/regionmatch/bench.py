"""Benchmark and verification harness over the matching algorithms.

Timing covers the matcher call only: building ancillary structures (the
interval tree, the grid, the endpoint arrays) is part of the measured
work, while workload generation and parsing happen before the clock
starts. Every timed configuration gets one untimed warm-up repetition.
"""

from __future__ import annotations

import csv
import io
import re
import statistics
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

from .config import MatcherConfig
from .geometry import ENUMERATE, MatchReport, RegionSet
from .matchers import ALGORITHMS, match_dd

CSV_COLUMNS = [
    "algo",
    "N",
    "alpha_or_trace",
    "d",
    "P",
    "reps",
    "mean_wct_seconds",
    "stddev",
    "K",
    "speedup_vs_P1",
    "peak_rss_kb",
]

ALGORITHM_NAMES = tuple(sorted(ALGORITHMS))


@dataclass(frozen=True)
class BenchRun:
    """One timed (algorithm, workload, worker count) combination."""

    algo: str
    n_total: int
    alpha_or_trace: str
    dimensions: int
    workers: int
    wcts: tuple[float, ...]
    count: int
    peak_rss_kb: int | None

    @property
    def reps(self) -> int:
        return len(self.wcts)

    @property
    def mean_wct(self) -> float:
        return statistics.fmean(self.wcts)

    @property
    def stddev(self) -> float:
        return statistics.stdev(self.wcts) if len(self.wcts) > 1 else 0.0


def peak_rss_kb() -> int | None:
    """Best-effort peak resident set size of this process, in kB.

    Reads VmHWM from /proc where exposed, falling back to getrusage.
    Returns None when neither source is available; the CSV column is then
    left empty.
    """
    try:
        status = Path("/proc/self/status").read_text()
        match = re.search(r"^VmHWM:\s*(\d+)\s*kB", status, re.MULTILINE)
        if match:
            return int(match.group(1))
    except OSError:
        pass
    try:
        import resource

        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        return int(peak) if peak > 0 else None
    except (ImportError, OSError):
        return None


def physical_core_count() -> int | None:
    """Distinct physical cores, from /proc/cpuinfo where available.

    Falls back to the logical CPU count when the topology is not exposed;
    returns None when nothing can be determined.
    """
    import os

    try:
        text = Path("/proc/cpuinfo").read_text()
    except OSError:
        return os.cpu_count()
    pairs: set[tuple[str, str]] = set()
    phys = core = None
    for line in text.splitlines() + [""]:
        if line.startswith("physical id"):
            phys = line.split(":", 1)[1].strip()
        elif line.startswith("core id"):
            core = line.split(":", 1)[1].strip()
        elif not line.strip():
            if phys is not None and core is not None:
                pairs.add((phys, core))
            phys = core = None
    return len(pairs) if pairs else os.cpu_count()


def time_algorithm(
    algo: str,
    S: RegionSet,
    U: RegionSet,
    cfg: MatcherConfig,
    reps: int,
    warmup: bool = True,
) -> tuple[list[float], int]:
    """Run one matcher ``reps`` times, returning wall-clock times and K.

    The match count must agree across repetitions; a disagreement means
    the matcher is non-deterministic and is reported as an error.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    run: Callable[[], MatchReport] = lambda: match_dd(S, U, algo, cfg)
    if warmup:
        run()
    wcts: list[float] = []
    count: int | None = None
    for _ in range(reps):
        start = time.perf_counter()
        report = run()
        wcts.append(time.perf_counter() - start)
        if count is None:
            count = report.count
        elif count != report.count:
            raise RuntimeError(
                f"{algo}: match count changed between repetitions ({count} then {report.count})"
            )
    assert count is not None
    return wcts, count


def run_bench(
    algos: Sequence[str],
    S: RegionSet,
    U: RegionSet,
    alpha_or_trace: str,
    workers_list: Sequence[int],
    reps: int,
    cfg: MatcherConfig,
) -> list[BenchRun]:
    """Time every (algorithm, worker count) combination on one workload."""
    runs: list[BenchRun] = []
    for algo in algos:
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algo!r}")
        for workers in workers_list:
            wcts, count = time_algorithm(
                algo, S, U, replace(cfg, workers=workers), reps
            )
            runs.append(
                BenchRun(
                    algo=algo,
                    n_total=len(S) + len(U),
                    alpha_or_trace=alpha_or_trace,
                    dimensions=S.dimensions,
                    workers=workers,
                    wcts=tuple(wcts),
                    count=count,
                    peak_rss_kb=peak_rss_kb(),
                )
            )
    return runs


def runs_to_csv(runs: Sequence[BenchRun]) -> str:
    """Render bench runs as CSV, computing speedups within each algorithm.

    The speedup column is only filled when the same invocation also timed
    the single-worker run of that algorithm and workload.
    """
    base: dict[tuple[str, str, int], float] = {}
    for run in runs:
        if run.workers == 1:
            base[(run.algo, run.alpha_or_trace, run.n_total)] = run.mean_wct
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(CSV_COLUMNS)
    for run in runs:
        reference = base.get((run.algo, run.alpha_or_trace, run.n_total))
        speedup = ""
        if reference is not None and run.mean_wct > 0:
            speedup = f"{reference / run.mean_wct:.4f}"
        writer.writerow(
            [
                run.algo,
                run.n_total,
                run.alpha_or_trace,
                run.dimensions,
                run.workers,
                run.reps,
                f"{run.mean_wct:.6e}",
                f"{run.stddev:.6e}",
                run.count,
                speedup,
                "" if run.peak_rss_kb is None else run.peak_rss_kb,
            ]
        )
    return out.getvalue()


def parse_csv(text: str) -> list[dict[str, str]]:
    """Parse harness CSV back into one dict per row (schema check included)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_COLUMNS:
        raise ValueError("unrecognised CSV header")
    return [dict(zip(CSV_COLUMNS, row)) for row in rows[1:]]


def verify_workload(
    S: RegionSet,
    U: RegionSet,
    workers_list: Sequence[int] = (1, 2, 4),
    cfg: MatcherConfig | None = None,
    matchers: dict[str, Callable[[RegionSet, RegionSet, MatcherConfig], MatchReport]] | None = None,
) -> tuple[bool, list[str]]:
    """Cross-check every matcher's canonical pair set on one workload.

    Runs each algorithm (the sweep variants once per worker count) in
    enumerate mode, compares canonical reports against the brute-force
    baseline, and returns overall success plus one PASS/FAIL line per
    comparison, naming the first differing pair on failure.
    """
    cfg = replace(cfg or MatcherConfig(), mode=ENUMERATE)
    table = dict(matchers) if matchers is not None else dict(ALGORITHMS)
    lines: list[str] = []

    baseline_name = "bfm" if "bfm" in table else sorted(table)[0]
    baseline = match_dd(S, U, baseline_name, cfg) if matchers is None else table[baseline_name](S, U, cfg)
    lines.append(f"baseline {baseline_name}: K={baseline.count}")

    def compare(name: str, report: MatchReport) -> bool:
        if report.same_pairs(baseline):
            lines.append(f"PASS {name}: K={report.count}")
            return True
        mine = report.pair_set()
        theirs = baseline.pair_set()
        diff = sorted(mine.symmetric_difference(theirs))
        missing = "missing" if diff[0] in theirs else "extra"
        lines.append(
            f"FAIL {name}: K={report.count} vs {baseline.count}; "
            f"first differing pair {diff[0]} ({missing})"
        )
        return False

    ok = True
    for name in sorted(table):
        if name == baseline_name:
            continue
        if name in ("sbm-par",):
            for workers in workers_list:
                run_cfg = replace(cfg, workers=workers)
                report = (
                    match_dd(S, U, name, run_cfg)
                    if matchers is None
                    else table[name](S, U, run_cfg)
                )
                ok &= compare(f"{name}[P={workers}]", report)
        else:
            report = match_dd(S, U, name, cfg) if matchers is None else table[name](S, U, cfg)
            ok &= compare(name, report)
    return ok, lines
