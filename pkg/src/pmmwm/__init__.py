"""Solvers for the Partitioning Min-Max Weighted Matching problem."""

from .core import (
    BipartiteGraph,
    EdgeNotFound,
    GridExhausted,
    Infeasible,
    InfeasibleMatching,
    IsolatedVertex,
    Matching,
    ParseError,
    Partition,
    PMMWMError,
    PreconditionError,
    Solution,
    TooLarge,
    evaluate_objective,
    format_milli,
    partition_weights,
    to_milli,
    validate_solution,
)

__version__ = "0.1.0"
