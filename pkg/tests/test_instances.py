import re

import numpy as np
import pytest

from pmmwm.core import GridExhausted, Infeasible, ParseError, max_cardinality
from pmmwm.instances import (
    FAMILY_NAMES,
    GenSpec,
    expand_grid,
    format_instance,
    gen_bps,
    gen_rand,
    gen_sparse,
    instance_name,
    m_choices,
    parse_instance,
    parse_solution,
    read_instance,
    sparse_edge_count,
    ubar_choices,
    write_instance,
    format_solution,
)
from pmmwm.solver import run


@pytest.mark.parametrize("ratio", [0.7, 0.8])
def test_bps_structure(ratio):
    n = 10
    g = gen_bps(n, ratio, 5)
    d = g.to_dense()
    assert g.n_edges == n * n
    assert len(np.unique(g.weights)) == n * n
    assert g.weights.min() >= 1000 and g.weights.max() <= 1000000
    head = int(ratio * 10)
    smallest = np.sort(g.weights)[:head]
    assert d[:head, 0].tolist() == smallest.tolist()


def test_bps_deterministic():
    assert gen_bps(12, 0.8, 9) == gen_bps(12, 0.8, 9)
    assert not gen_bps(12, 0.8, 9) == gen_bps(12, 0.8, 10)


def test_grid_exhausted():
    with pytest.raises(GridExhausted):
        gen_bps(1000, 0.7, 0)


def test_rand():
    g = gen_rand(3, 1)
    assert g.n_edges == 9
    assert np.all(g.weights % 1000 == 0)
    big = gen_rand(100, 2)
    assert abs(big.weights.mean() / 1000 - 500.5) <= 10
    assert gen_rand(20, 4) == gen_rand(20, 4)


@pytest.mark.parametrize("density,count", [(0.2, 20), (0.3, 30), (0.7, 70), (0.8, 80)])
def test_sparse_counts(density, count):
    g = gen_sparse(10, density, 3)
    assert g.n_edges == count == sparse_edge_count(10, density)
    assert len(np.unique(g.weights)) == count
    assert max_cardinality(g) == 10


def test_sparse_infeasible_density():
    with pytest.raises(Infeasible):
        gen_sparse(2, 0.2, 0)


def test_grid_examples():
    assert m_choices(100) == [2, 4, 8, 12]
    assert ubar_choices(100, 8) == [13, 42, 100]
    assert ubar_choices(100, 2) == [50, 66, 100]
    for n in (16, 20, 50, 100, 190, 800):
        assert all(m * u >= n for m, u in expand_grid(n))
    # floor(0.04 * 20) = 0 is dropped
    assert m_choices(20) == [2, 1]


def test_genspec_families():
    for fam in FAMILY_NAMES:
        g = GenSpec(fam, 12, 1).build()
        assert g.n1 == g.n2 == 12
        assert max_cardinality(g) == 12
    with pytest.raises(ValueError):
        GenSpec("NOPE", 10, 1)
    with pytest.raises(ValueError):
        GenSpec("RAND", 1, 1)
    assert GenSpec("RAND", 10, 1, 0).build() != GenSpec("RAND", 10, 1, 1).build()


def test_name():
    assert instance_name("RAND", 100, 8, 13, 1) == "RAND_n100_m8_u13_s1.pmm"


def test_round_trip(tmp_path):
    for fam in FAMILY_NAMES:
        g = GenSpec(fam, 15, 2).build()
        path = tmp_path / f"{fam}.pmm"
        write_instance(path, g, 3, 5)
        g2, m, ubar = read_instance(path)
        assert g2 == g and (m, ubar) == (3, 5)
        assert format_instance(g2, m, ubar) == path.read_text()


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("2 2 1 2\n", 1),
    ("2 2 1 2 2\n1 1 1\n1 1 2\n", 3),
    ("2 2 1 2 2\n1 1 1\n3 1 2\n", 3),
    ("2 2 1 2 2\n1 1 1.0001\n2 2 1\n", 2),
    ("2 2 1 2 2\n1 1 1001\n2 2 1\n", 2),
    ("2 2 1 2 3\n1 1 1\n2 2 1\n", 1),
    ("2 2 1 2 2\n1 1\n2 2 1\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line


def test_parse_infeasible():
    with pytest.raises(Infeasible):
        parse_instance("2 2 1 2 2\n1 1 1\n2 1 1\n")
    with pytest.raises(Infeasible):
        parse_instance("2 2 1 1 2\n1 1 1\n2 2 1\n")


def test_parse_rectangular_and_rationals():
    g, m, ubar = parse_instance("1 2 1 1 2\n1 1 0.5\n1 2 2.125\n")
    assert (g.n1, g.n2) == (1, 2)
    assert g.weights.tolist() == [500, 2125]


def test_solution_round_trip():
    g = GenSpec("SPARSE30", 12, 1).build()
    sol, _ = run(g, 3, 4)
    text = format_solution(sol)
    back = parse_solution(text, g, 3, 4)
    assert back.objective == sol.objective
    assert back.matching == sol.matching
    assert back.partition.part_of_u.tolist() == sol.partition.part_of_u.tolist()
    assert re.fullmatch(r"\d+\.\d{3}", text.splitlines()[0])
