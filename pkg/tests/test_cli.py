import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from pmmwm import bench
from pmmwm.cli import main
from pmmwm.instances import expand_grid, read_instance


def gen(tmp_path, *extra):
    out = tmp_path / "suite"
    assert main(["generate", "--out", str(out), *extra]) == 0
    return out


def test_generate_counts_and_determinism(tmp_path, capsys):
    out = gen(tmp_path, "--family", "RAND", "--n", "100", "--replicates", "2", "--seed", "1")
    files = sorted(out.glob("*.pmm"))
    assert len(files) == 2 * len(expand_grid(100))
    manifest = capsys.readouterr().out
    assert manifest.splitlines()[0] == ",".join(bench.MANIFEST_COLUMNS)
    again = gen(tmp_path / "b", "--family", "RAND", "--n", "100", "--replicates", "2", "--seed", "1")
    for f in files:
        assert (again / f.name).read_bytes() == f.read_bytes()


def test_generate_bps_distinct(tmp_path):
    out = gen(tmp_path, "--family", "BPS80", "--n", "10")
    for f in out.glob("*.pmm"):
        g, _, _ = read_instance(f)
        assert len(np.unique(g.weights)) == 100


def test_generate_range(tmp_path):
    out = gen(tmp_path, "--family", "SPARSE20", "--n", "16:24:8")
    sizes = {read_instance(f)[0].n1 for f in out.glob("*.pmm")}
    assert sizes == {16, 24}


def solve(path, capsys, *extra):
    code = main(["solve", str(path), *extra])
    return code, json.loads(capsys.readouterr().out)


def test_solve_and_verify(tmp_path, capsys):
    out = gen(tmp_path, "--family", "SPARSE30", "--n", "30", "--seed", "4")
    capsys.readouterr()
    inst = next(out.glob("*_m2_u15_*.pmm"))
    code, ls = solve(inst, capsys, "--variant", "MP_LS", "--out", str(tmp_path / "ls.sol"))
    assert code == 0
    code, kmm = solve(inst, capsys, "--variant", "MP_KM_M", "--out", str(tmp_path / "kmm.sol"))
    assert ls["objective"] == kmm["objective"]
    assert set(kmm["stage_ns"]) == {"matching", "partitioning", "penalization"}
    assert main(["verify", str(inst), str(tmp_path / "kmm.sol")]) == 0
    assert capsys.readouterr().out.strip() == "ok"

    lines = (tmp_path / "kmm.sol").read_text().splitlines()
    tampered = tmp_path / "bad.sol"
    tampered.write_text("\n".join(["0.001", *lines[1:]]) + "\n")
    assert main(["verify", str(inst), str(tampered)]) != 0
    assert "objective-mismatch" in capsys.readouterr().out

    g, m, ubar = read_instance(inst)
    oversize = tmp_path / "big.sol"
    oversize.write_text("\n".join([lines[0], lines[1], " ".join(["1"] * g.n1)]) + "\n")
    assert main(["verify", str(inst), str(oversize)]) != 0
    assert "constraint-4" in capsys.readouterr().out


def test_solve_patience_one(tmp_path, capsys):
    inst = tmp_path / "flat.pmm"
    inst.write_text("3 3 1 3 9\n" + "".join(f"{u} {v} 5\n" for u in (1, 2, 3) for v in (1, 2, 3)))
    code, summary = solve(inst, capsys, "--patience", "1")
    assert code == 0 and summary["iterations"] <= 2
    assert summary["objective"] == "15.000"


def test_solve_csv_format(tmp_path, capsys):
    inst = tmp_path / "flat.pmm"
    inst.write_text("2 2 1 2 2\n1 1 1.5\n2 2 2\n")
    assert main(["solve", str(inst), "--format", "csv"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert rows[0]["objective"] == "3.500"
    assert (tmp_path / "flat.sol").exists()


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.pmm"
    bad.write_text("2 2 1 2 2\n1 1 x\n2 2 1\n")
    assert main(["solve", str(bad)]) == 2
    inf = tmp_path / "inf.pmm"
    inf.write_text("2 2 1 2 2\n1 1 1\n2 1 1\n")
    assert main(["solve", str(inf)]) == 3
    assert main(["solve", str(tmp_path / "missing.pmm")]) == 4


def test_bench(tmp_path, capsys):
    out = gen(tmp_path, "--family", "BPS80", "SPARSE30", "--n", "20", "--seed", "2")
    # one broken entry must be recorded, not abort the run
    (out / "zz_broken.pmm").write_text("garbage\n")
    with open(out / "manifest.csv", "a") as fh:
        fh.write("zz_broken.pmm,RAND,20,2,10,0,2\n")
    capsys.readouterr()
    res = tmp_path / "res"
    assert main(["bench", str(out / "manifest.csv"), "--out", str(res)]) == 0
    records = bench.read_records(res / "records.csv")
    ok = [r for r in records if r.status == "ok"]
    assert len([r for r in records if r.status != "ok"]) == 2
    by_key = {}
    for r in ok:
        by_key.setdefault((r.family, r.m, r.ubar, r.replicate), {})[r.variant] = r
    for pair in by_key.values():
        assert pair["MP_LS"].objective == pair["MP_KM_M"].objective
    for r in ok:
        staged = r.stage1_ns + r.stage2_ns + r.stage3_ns
        assert staged <= r.total_ns and staged >= 0.95 * r.total_ns
    ratios = list(csv.DictReader(open(res / "ratios.csv")))
    assert {row["family"] for row in ratios} == {"BPS80", "SPARSE30"}
    assert all(row["objectives_equal"] == "True" for row in ratios)
    series = list(csv.DictReader(open(res / "stage1_series.csv")))
    assert list(series[0]) == list(bench.SERIES_COLUMNS)


def test_bench_parallel_json(tmp_path, capsys):
    out = gen(tmp_path, "--family", "RAND", "--n", "16", "--seed", "3")
    res = tmp_path / "res"
    assert main(["bench", str(out / "manifest.csv"), "--out", str(res),
                 "--parallelism", "2", "--format", "json"]) == 0
    records = json.loads((res / "records.json").read_text())
    assert len(records) == 2 * len(expand_grid(16))
    assert all(r["status"] == "ok" for r in records)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pmmwm", "verify", "nope.pmm", "nope.sol"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 4


def test_bench_ratio_shape(tmp_path):
    entries = bench.generate_suite(["BPS80", "SPARSE30"], [100], 1, 2, tmp_path,
                                   grid={100: [(2, 50), (8, 13)]})
    records, series = bench.run_bench(entries)
    rows = {r["family"]: float(r["ratio"]) for r in bench.ratio_table(records)}
    assert all(r > 1 for r in rows.values())
    assert rows["BPS80"] > rows["SPARSE30"]
    means = bench.stage1_means(series)
    assert set(means) == {("MP_LS", 100), ("MP_KM_M", 100)}
