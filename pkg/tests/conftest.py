import numpy as np
import pytest

from pmmwm.core import BipartiteGraph


def random_graph(rng, n1, n2=None, density=1.0, integer=True, wmax=1000):
    """Random graph with a guaranteed perfect matching on U (diagonal kept)."""
    n2 = n1 if n2 is None else n2
    if integer:
        w = rng.integers(1, wmax + 1, size=(n1, n2)) * 1000
    else:
        w = rng.integers(1000, wmax * 1000 + 1, size=(n1, n2))
    mask = rng.random((n1, n2)) < density
    perm = rng.permutation(n2)[:n1]
    mask[np.arange(n1), perm] = True
    return BipartiteGraph.from_dense(np.where(mask, w, -1), missing=-1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fig2_graph():
    # three-by-three instance whose rematch after penalizing (u1, v1) follows
    # the path u1-v2-u3-v1 with a single label adjustment
    return BipartiteGraph.from_dense(np.array([[2, 3, 5], [5, 5, 1], [1, 1, 5]]))


@pytest.fixture
def fig1():
    """Six u's matched on the diagonal, three parts with loads 4, 2, 5."""
    w = np.array([1, 3, 1, 1, 4, 1])
    dense = np.full((6, 6), -1)
    dense[np.arange(6), np.arange(6)] = w
    g = BipartiteGraph.from_dense(dense, missing=-1)
    parts = np.array([0, 0, 1, 1, 2, 2])
    return g, parts


def rematch_instance():
    """Diagonal matching is the lightest but forces a part of load 50; a
    heavier matching swapping u5/u6 allows 40."""
    dense = np.full((6, 6), -1)
    dense[np.arange(6), np.arange(6)] = [10, 30, 10, 10, 40, 10]
    dense[4, 5] = 30
    dense[5, 4] = 25
    return BipartiteGraph.from_dense(dense, missing=-1)
