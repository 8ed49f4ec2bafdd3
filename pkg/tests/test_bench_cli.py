"""Benchmark harness and command line interface."""

import pytest

from regionmatch import MatcherConfig, match_bfm, read_regions
from regionmatch.bench import (
    CSV_COLUMNS,
    parse_csv,
    run_bench,
    runs_to_csv,
    time_algorithm,
    verify_workload,
)
from regionmatch.cli import main
from regionmatch.geometry import ENUMERATE, MatchReport
from regionmatch.workload import SyntheticSpec, gen_uniform

from helpers import rs


@pytest.fixture()
def small_workload():
    return gen_uniform(SyntheticSpec(total_regions=400, alpha=2.0, seed=12))


class TestRunBench:
    def test_rows_share_the_same_match_count(self, small_workload):
        S, U = small_workload
        runs = run_bench(["sbm-par"], S, U, "2.0", [1, 2, 4], reps=3, cfg=MatcherConfig())
        assert len(runs) == 3
        assert len({r.count for r in runs}) == 1
        assert all(r.reps == 3 for r in runs)

    def test_speedup_is_one_for_the_single_worker_row(self, small_workload):
        S, U = small_workload
        runs = run_bench(["bfm"], S, U, "2.0", [1], reps=1, cfg=MatcherConfig())
        rows = parse_csv(runs_to_csv(runs))
        assert rows[0]["P"] == "1"
        assert float(rows[0]["speedup_vs_P1"]) == pytest.approx(1.0)

    def test_speedup_left_blank_without_a_baseline(self, small_workload):
        S, U = small_workload
        runs = run_bench(["bfm"], S, U, "2.0", [2], reps=1, cfg=MatcherConfig())
        rows = parse_csv(runs_to_csv(runs))
        assert rows[0]["speedup_vs_P1"] == ""

    def test_csv_schema_round_trips(self, small_workload):
        S, U = small_workload
        runs = run_bench(["itm", "gbm"], S, U, "2.0", [1, 2], reps=2, cfg=MatcherConfig())
        text = runs_to_csv(runs)
        assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
        rows = parse_csv(text)
        assert len(rows) == 4
        for row in rows:
            assert row["N"] == "400"
            assert float(row["mean_wct_seconds"]) >= 0.0
            assert int(row["K"]) == runs[0].count

    def test_unknown_algorithm_is_rejected(self, small_workload):
        S, U = small_workload
        with pytest.raises(ValueError):
            run_bench(["nope"], S, U, "2.0", [1], reps=1, cfg=MatcherConfig())

    def test_inconsistent_matcher_is_reported(self, small_workload, monkeypatch):
        S, U = small_workload
        flip = {"v": 0}

        def unstable(S, U, algo, cfg):
            flip["v"] += 1
            return MatchReport.from_count(flip["v"])

        import regionmatch.bench as bench

        monkeypatch.setattr(bench, "match_dd", unstable)
        with pytest.raises(RuntimeError):
            time_algorithm("bfm", S, U, MatcherConfig(), reps=2)


class TestVerifyWorkload:
    def test_twenty_random_workloads_pass(self):
        for seed in range(20):
            alpha = (0.5, 2.0, 20.0)[seed % 3]
            S, U = gen_uniform(SyntheticSpec(total_regions=300, alpha=alpha, seed=seed))
            ok, lines = verify_workload(S, U, workers_list=[1, 3])
            assert ok, lines
            assert sum(line.startswith("PASS") for line in lines) == 5

    def test_corrupted_matcher_fails_naming_a_pair(self):
        S = rs("subscription", [(0, 10), (20, 30)])
        U = rs("update", [(5, 15), (40, 50)])

        def broken(S, U, cfg):
            report = match_bfm(S, U, cfg)
            pairs = report.pairs[:-1]  # drop the last pair
            return MatchReport(mode=ENUMERATE, count=len(pairs), pairs=pairs)

        table = {"bfm": match_bfm, "broken": broken}
        ok, lines = verify_workload(S, U, matchers=table)
        assert not ok
        fail_lines = [l for l in lines if l.startswith("FAIL broken")]
        assert len(fail_lines) == 1
        assert "first differing pair (0, 0)" in fail_lines[0]


class TestCli:
    def test_gen_writes_a_loadable_deterministic_file(self, tmp_path, capsys):
        out = tmp_path / "regions.txt"
        argv = ["gen", "--N", "4", "--alpha", "1", "--seed", "7", "--out", str(out)]
        assert main(argv) == 0
        first = out.read_bytes()
        assert len(first.splitlines()) == 5  # header + 4 regions
        S, U = read_regions(out)
        assert len(S) == len(U) == 2
        assert main(argv) == 0
        assert out.read_bytes() == first

    def test_bench_emits_one_row_per_worker_count(self, capsys):
        argv = [
            "bench", "--algo", "sbm-par", "--N", "100000", "--alpha", "1",
            "--P", "1,2,4", "--reps", "5",
        ]
        assert main(argv) == 0
        rows = parse_csv(capsys.readouterr().out)
        assert [r["P"] for r in rows] == ["1", "2", "4"]
        assert len({r["K"] for r in rows}) == 1
        assert all(r["reps"] == "5" for r in rows)

    def test_bench_all_reports_one_match_count(self, capsys):
        argv = ["bench", "--algo", "all", "--N", "200", "--alpha", "2", "--reps", "1"]
        assert main(argv) == 0
        rows = parse_csv(capsys.readouterr().out)
        assert len(rows) == 5
        assert len({r["K"] for r in rows}) == 1

    def test_bench_out_file(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        argv = [
            "bench", "--algo", "bfm", "--N", "100", "--alpha", "1",
            "--reps", "1", "--out", str(out),
        ]
        assert main(argv) == 0
        assert parse_csv(out.read_text())

    def test_verify_on_synthetic_workload(self, capsys):
        argv = ["verify", "--N", "300", "--alpha", "3", "--P", "1,2"]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "VERIFY PASS" in out

    def test_verify_on_region_file(self, tmp_path, capsys):
        out = tmp_path / "regions.txt"
        assert main(["gen", "--N", "50", "--alpha", "2", "--out", str(out)]) == 0
        assert main(["verify", "--regions", str(out)]) == 0
        assert "VERIFY PASS" in capsys.readouterr().out

    def test_unknown_algorithm_exits_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["bench", "--algo", "quadtree", "--N", "10", "--alpha", "1"])
        assert err.value.code == 2

    def test_missing_workload_exits_2(self, capsys):
        assert main(["bench", "--algo", "bfm"]) == 2

    def test_bad_trace_path_exits_1(self, capsys):
        assert main(["bench", "--algo", "bfm", "--trace", "/does/not/exist"]) == 1

    def test_invalid_synthetic_spec_exits_1(self, capsys):
        assert main(["bench", "--algo", "bfm", "--N", "7", "--alpha", "1"]) == 1

    def test_trace_workload_flows_through_bench(self, tmp_path, capsys):
        trace = tmp_path / "trace.txt"
        trace.write_text("".join(f"0 {i} {i * 30}.0\n" for i in range(10)))
        argv = ["bench", "--algo", "sbm-seq", "--trace", str(trace), "--reps", "1"]
        assert main(argv) == 0
        rows = parse_csv(capsys.readouterr().out)
        assert rows[0]["N"] == "20"
        assert rows[0]["alpha_or_trace"].startswith("trace:")
