import csv
import io

import pytest

from bpcc.bench import NA, BenchReport, RunRecord, aggregate, load_bounds, run_bench
from bpcc.cli import main
from bpcc.generate import hard_bpp, random_instance
from bpcc.instance_io import (
    parse_instance,
    parse_solution,
    write_bpp_instance,
    write_instance,
)
from bpcc.vns import VnsParams

FAST = VnsParams(lam=20, phi=60)


@pytest.fixture
def bpp_dir(tmp_path):
    for group, n in (("AI", 12), ("ANI", 14)):
        d = tmp_path / group
        d.mkdir()
        for s in range(2):
            _, b, w = hard_bpp(s + n, n=n, b=100)
            (d / f"inst{s}.txt").write_text(write_bpp_instance(b, w))
    return tmp_path


def test_bench_rows_and_invariants(bpp_dir):
    report = run_bench(bpp_dir, capacity_factors=(100, 200), params=FAST, seeds=(0, 1, 2))
    assert len(report.runs) == 4 * 2 * 3
    assert [(r.instance_type, r.n_items, r.capacity_factor) for r in report.rows] == [
        ("AI", 12, 100), ("AI", 12, 200), ("ANI", 14, 100), ("ANI", 14, 200)
    ]
    for row in report.rows:
        assert row.n_instances == 2
        assert row.n_opt <= row.n_instances
        assert row.total_bins_best >= row.total_bound
        assert row.bound_method == "MT"
        assert row.seeds == (0, 1, 2)
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert rows[0]["instance_type"] == "AI" and rows[0]["seeds"] == "0 1 2"


def test_bench_reproducible(bpp_dir):
    a = run_bench(bpp_dir, capacity_factors=(120,), params=FAST, seeds=(0, 1))
    b = run_bench(bpp_dir, capacity_factors=(120,), params=FAST, seeds=(0, 1))
    assert a.to_csv(timing=False) == b.to_csv(timing=False)
    assert "mean_time_s" not in a.to_csv(timing=False)


def test_bench_parallel_same_numbers(bpp_dir):
    a = run_bench(bpp_dir, capacity_factors=(100,), params=FAST, seeds=(0, 1))
    b = run_bench(bpp_dir, capacity_factors=(100,), params=FAST, seeds=(0, 1), jobs=2)
    assert a.to_csv(timing=False) == b.to_csv(timing=False)


def test_bench_empty_dir(tmp_path):
    report = run_bench(tmp_path)
    assert report.rows == [] and report.to_csv().count("\n") == 1


def test_na_when_greedy_meets_bound():
    runs = [
        RunRecord("i1", "G", 10, 200, s, 3, 3, 3, 0, "proven-optimal", 0.001) for s in range(3)
    ]
    (row,) = aggregate(runs, (0, 1, 2), {}, "uniform-random")
    assert row.n_opt == 1 and row.mean_time is None and row.std_time is None
    assert BenchReport([row]).to_csv().splitlines()[1].split(",")[7] == NA


def test_std_needs_two_timed_runs():
    runs = [RunRecord("i1", "G", 10, 100, 0, 4, 5, 3, 20, "no-improvement", 0.5)]
    (row,) = aggregate(runs, (0,), {}, "round-robin")
    assert row.mean_time == 0.5 and row.std_time is None and row.n_opt == 0


def test_external_bounds_raise_the_bar(bpp_dir):
    bounds = load_bounds("AI/inst0 100 999\n")
    report = run_bench(bpp_dir, capacity_factors=(100,), params=FAST, seeds=(0,), bounds=bounds)
    ai = report.rows[0]
    assert ai.bound_method == "MT|MT+EXT"
    assert ai.total_bound >= 999


def test_failures_recorded(tmp_path):
    (tmp_path / "bad.txt").write_text("2\n10\n12\n3\n")
    (tmp_path / "good.txt").write_text("2\n10\n5\n3\n")
    report = run_bench(tmp_path, capacity_factors=(100, 150), params=FAST, seeds=(0,))
    assert [f.capacity_factor for f in report.failures] == [100]
    assert sum(r.failures for r in report.rows) == 1


@pytest.fixture
def inst_file(tmp_path):
    path = tmp_path / "small.bpcc"
    path.write_text(write_instance(random_instance(2, 25, b=100)))
    return path


def test_cli_solve(inst_file, tmp_path, capsys):
    out = tmp_path / "a.sol"
    assert main(["solve", str(inst_file), "--out", str(out), "--seed", "3"]) == 0
    summary = capsys.readouterr().out
    assert summary.startswith("# objective=") and "stop=" in summary
    inst = parse_instance(inst_file.read_text())
    parse_solution(out.read_text(), inst)
    again = tmp_path / "b.sol"
    main(["solve", str(inst_file), "--out", str(again), "--seed", "3"])
    assert out.read_bytes() == again.read_bytes()


def test_cli_solve_stdout_is_solution(inst_file, capsys):
    main(["solve", str(inst_file), "--lambda", "10", "--phi", "20"])
    inst = parse_instance(inst_file.read_text())
    parse_solution(capsys.readouterr().out, inst)


def test_cli_missing_file(capsys):
    assert main(["solve", "does-not-exist.txt"]) != 0
    assert "no such file" in capsys.readouterr().err


def test_cli_export(inst_file, tmp_path, capsys):
    a, b = tmp_path / "a.lp", tmp_path / "b.lp"
    assert main(["export", str(inst_file), "--out", str(a)]) == 0
    main(["export", str(inst_file), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert main(["export", str(inst_file), "--bin-limit", "1"]) != 0
    assert "below continuous bound" in capsys.readouterr().err


def test_cli_exact(tmp_path, capsys):
    small = tmp_path / "ten.bpcc"
    small.write_text(write_instance(random_instance(8, 10, b=100)))
    assert main(["exact", str(small)]) == 0
    out = capsys.readouterr().out
    assert "proven=true" in out
    parse_solution(out, parse_instance(small.read_text()))

    big = tmp_path / "big.bpcc"
    big.write_text(write_instance(random_instance(9, 200, b=1000, lo=0.3, hi=0.5)))
    assert main(["exact", str(big), "--budget", "2000"]) == 3
    out = capsys.readouterr().out
    assert "budget-exceeded" in out and "proven=false" in out
    parse_solution(out, parse_instance(big.read_text()))


def test_cli_derive_and_check(tmp_path, capsys):
    bpp = tmp_path / "x.txt"
    bpp.write_text("4\n100\n50\n40\n30\n20\n")
    dst = tmp_path / "x.bpcc"
    assert main(["derive", str(bpp), "--capacity-factor", "150", "--scheme", "round-robin", "--out", str(dst)]) == 0
    inst = parse_instance(dst.read_text())
    assert inst.capacity == 150 and inst.categories == (0, 1, 2, 3)
    sol = tmp_path / "x.sol"
    sol.write_text("1 3\n2 4\n")
    assert main(["check", str(dst), str(sol)]) == 0
    assert capsys.readouterr().out.strip() == "ok"
    sol.write_text("1 2\n3 4\n")
    assert main(["check", str(dst), str(sol)]) == 2
    assert "incompatible categories (1,2)" in capsys.readouterr().err


def test_cli_bench(bpp_dir, tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = main(["bench", str(bpp_dir), "--seeds", "0-1", "--capacity-factors", "100,150",
                 "--lambda", "10", "--phi", "30", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4 and rows[0]["category_scheme"] == "uniform-random"
    assert "#Opt" in capsys.readouterr().out


def test_cli_bench_empty(tmp_path, capsys):
    assert main(["bench", str(tmp_path)]) == 0
    assert "warning" in capsys.readouterr().err
