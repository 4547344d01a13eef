"""A small MP_LS vs MP_KM_M runtime comparison and the stage-1 scaling fit.

The same data can be produced from the shell:

    pmmwm generate --family BPS80 RAND SPARSE30 --n 60 100 --seed 1 --out suite
    pmmwm bench suite/manifest.csv --out results
"""

import tempfile

from pmmwm import bench

with tempfile.TemporaryDirectory() as tmp:
    entries = bench.generate_suite(["BPS80", "RAND", "SPARSE30"], [60, 100], seed=1, replicates=1,
                                   out_dir=tmp, grid={60: [(2, 30)], 100: [(2, 50), (8, 13)]})
    records, series = bench.run_bench(entries)
    assert all(r.status == "ok" for r in records)

print("family    n   LS/KM-M ratio  equal objectives")
for row in bench.ratio_table(records):
    print(f"{row['family']:9s} {row['n']:3d}  {float(row['ratio']):8.2f}       {row['objectives_equal']}")

means = bench.stage1_means(series)
sizes = sorted({n for _, n in means})
for variant in ("MP_LS", "MP_KM_M"):
    ys = [means[(variant, n)] for n in sizes]
    print(f"{variant}: mean stage-1 us per iteration {[round(y / 1e3, 1) for y in ys]}, "
          f"log-log slope {bench.loglog_slope(sizes, ys):.2f}")
