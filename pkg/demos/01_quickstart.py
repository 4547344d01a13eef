"""Solve one generated instance with both solver variants and compare them."""

from pmmwm.bench import warmup
from pmmwm.core import format_milli, validate_solution
from pmmwm.instances import GenSpec, expand_grid
from pmmwm.solver import SolverConfig, Variant, run

warmup()  # compile the kernels so timings below are steady-state
g = GenSpec("BPS80", 60, seed=1).build()
m, ubar = expand_grid(60)[1]
print(f"BPS80 instance: n={g.n1}, {g.n_edges} edges, m={m}, ubar={ubar}")

for variant in Variant:
    sol, trace = run(g, m, ubar, SolverConfig(variant=variant))
    stages = trace.stage_ns().sum(axis=0) / 1e6
    print(f"{variant.value:8s} objective {format_milli(sol.objective)}  "
          f"iterations {trace.iterations}  stage ms {stages.round(2).tolist()}")
    assert validate_solution(g, sol).ok

# the best-so-far curve only goes down
print("best-so-far:", [format_milli(x) for x in trace.best_curve()[:8]], "...")
