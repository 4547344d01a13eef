"""The seven instance families, the (m, ubar) grid and the file format."""

import tempfile
from pathlib import Path

import numpy as np

from pmmwm.core import max_cardinality
from pmmwm.instances import FAMILY_NAMES, GenSpec, expand_grid, read_instance, write_instance

for fam in FAMILY_NAMES:
    g = GenSpec(fam, 50, seed=11).build()
    w = g.weights / 1000
    print(f"{fam:9s} edges {g.n_edges:5d}  weights [{w.min():7.3f}, {w.max():8.3f}]  "
          f"distinct {len(np.unique(g.weights)) == g.n_edges}  perfect {max_cardinality(g) == 50}")

# BPS puts the globally smallest weights on the first rows
d = GenSpec("BPS80", 10, seed=2).build().to_dense() / 1000
print("BPS80 n=10, column v1:", d[:, 0].round(3).tolist())

print("grid for n=100:", expand_grid(100))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo.pmm"
    g = GenSpec("SPARSE20", 8, seed=5).build()
    write_instance(path, g, 2, 4)
    print(path.read_text().splitlines()[:4])
    assert read_instance(path)[0] == g
