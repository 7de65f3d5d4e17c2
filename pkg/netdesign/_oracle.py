from __future__ import annotations

__all__ = ["EXHAUSTIVE_MAX_N", "OracleResult", "enumerate_connected_graphs", "exhaustive_optimum", "oracle_optimum"]

import dataclasses
import itertools
import logging
import math
from collections.abc import Callable, Iterator
from typing import Literal

from ._config import GaConfig
from ._dynamics import NodeDynamics, eigenratio_objective, objective
from ._exceptions import OptimizerError, ParameterError
from ._genetic import ga_optimize
from ._graph import Graph, edge_pairs, is_connected, max_edges

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 6

OracleObjective = Literal["J", "negQ"]


def enumerate_connected_graphs(n_v: int, max_edge_count: int | None = None) -> Iterator[Graph]:
    """
    Every connected labeled graph on n_v vertices with at most ``max_edge_count`` edges, by increasing edge count and
    then in lexicographic order of the edge subsets.
    """
    if not (1 <= n_v <= EXHAUSTIVE_MAX_N):
        msg = f"Exhaustive enumeration is limited to 1..{EXHAUSTIVE_MAX_N} vertices, got {n_v}"
        raise ParameterError(msg)
    rows, cols = edge_pairs(n_v)
    pairs = list(zip(rows.tolist(), cols.tolist()))
    limit = max_edges(n_v) if max_edge_count is None else min(max_edge_count, max_edges(n_v))

    for n_e in range(max(n_v - 1, 0), limit + 1):
        for subset in itertools.combinations(pairs, n_e):
            graph = Graph._trusted(n_v, subset)
            if is_connected(graph):
                yield graph


def exhaustive_optimum(objective_fn: Callable[[Graph], float], n_v: int, n_e_star: int) -> tuple[Graph, float]:
    """Brute-force maximum of the objective; the first graph in enumeration order wins ties."""
    best_graph, best = None, -math.inf
    for graph in enumerate_connected_graphs(n_v, n_e_star):
        value = objective_fn(graph)
        if value > best:
            best_graph, best = graph, value
    if best_graph is None:
        msg = f"No connected graph on {n_v} vertices has at most {n_e_star} edges"
        raise OptimizerError(msg)
    return best_graph, best


@dataclasses.dataclass(frozen=True)
class OracleResult:
    """L* / J*: the best graph found with the dynamics known, and its objective value."""

    graph: Graph
    J: float
    objective: OracleObjective
    method: Literal["exhaustive", "genetic"]


def oracle_optimum(
    dynamics: NodeDynamics,
    n_e_star: int,
    objective_name: OracleObjective = "J",
    exhaustive: bool = False,
    ga_config: GaConfig | None = None,
) -> OracleResult:
    """
    Optimizes with the true dynamics: the synchronization objective J itself, or -Q (the dynamics-free eigenratio
    index). ``J`` of the result is always the true synchronization objective of the graph found.
    """
    if objective_name == "J":
        objective_fn = lambda graph: objective(dynamics, graph).J  # noqa: E731
    elif objective_name == "negQ":
        objective_fn = eigenratio_objective
    else:
        msg = f"Unknown oracle objective {objective_name!r}, expected J or negQ"
        raise ParameterError(msg)

    if exhaustive:
        graph, _ = exhaustive_optimum(objective_fn, dynamics.n_v, n_e_star)
    else:
        graph = ga_optimize(objective_fn, dynamics.n_v, n_e_star, ga_config).graph

    J = objective(dynamics, graph).J
    method = "exhaustive" if exhaustive else "genetic"
    logger.info("Oracle (%s, %s): J* = %.6g with %d edges", objective_name, method, J, graph.n_e)
    return OracleResult(graph=graph, J=J, objective=objective_name, method=method)
