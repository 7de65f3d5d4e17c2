from __future__ import annotations

__all__ = ["cap_and_connect", "non_bridge_edges", "repair_connectivity"]

import logging

import networkx as nx
import numpy as np

from ._exceptions import DomainError, ParameterError
from ._graph import Graph, connected_components, edge_pairs

logger = logging.getLogger(__name__)


def non_bridge_edges(graph: Graph) -> set[tuple[int, int]]:
    """Edges whose removal leaves the component structure unchanged (edges lying on a cycle)."""
    bridges = {(min(u, v), max(u, v)) for u, v in nx.bridges(graph.to_networkx())}
    return set(graph.edges) - bridges


def _cross_component(n_v: int, labels: np.ndarray) -> np.ndarray:
    rows, cols = edge_pairs(n_v)
    return labels[rows] != labels[cols]


def repair_connectivity(indicator: np.ndarray, n_v: int, scores: np.ndarray) -> np.ndarray:
    """
    Swaps edges until the graph is connected, keeping the edge count.

    Every swap drops the selected non-bridge pair with the smallest score (the later pair in lexicographic order on
    ties) and adds the unselected pair joining two components with the largest score (the earlier pair on ties).
    """
    indicator = np.asarray(indicator, dtype=bool).copy()
    scores = np.asarray(scores, dtype=float)
    rows, cols = edge_pairs(n_v)
    index_of = {(int(i), int(j)): k for k, (i, j) in enumerate(zip(rows, cols))}

    swaps = 0
    while True:
        graph = Graph.from_indicator(n_v, indicator)
        labels = connected_components(graph)
        if labels.max() == 0:
            break

        removable = sorted(index_of[edge] for edge in non_bridge_edges(graph))
        if not removable:
            msg = f"Cannot connect a forest with {graph.n_e} edges on {n_v} vertices without adding edges"
            raise DomainError(msg)
        removable = np.array(removable)
        drop = int(removable[scores[removable] == scores[removable].min()][-1])

        candidates = np.flatnonzero(_cross_component(n_v, labels) & ~indicator)
        add = int(candidates[scores[candidates] == scores[candidates].max()][0])

        indicator[drop] = False
        indicator[add] = True
        swaps += 1

    if swaps:
        logger.info("Connectivity repair swapped %d edge(s)", swaps)
    return indicator


def _lowest(candidates: np.ndarray, scores: np.ndarray | None, count: int, rng: np.random.Generator) -> np.ndarray:
    # random order among equal scores
    keys = np.zeros(candidates.size) if scores is None else scores[candidates]
    return candidates[np.lexsort((rng.random(candidates.size), keys))[:count]]


def cap_and_connect(
    indicator: np.ndarray,
    n_v: int,
    n_e_cap: int,
    rng: np.random.Generator,
    scores: np.ndarray | None = None,
) -> np.ndarray:
    """
    Repairs an edge indicator into a connected graph with at most ``n_e_cap`` edges.

    The edges with the lowest ``scores`` are dropped down to the cap, then random pairs joining two components are
    added; whenever that exceeds the cap the lowest-scored edge lying on a cycle is dropped. Ties are broken at random,
    and without ``scores`` every choice is random.
    """
    indicator = np.asarray(indicator, dtype=bool).copy()
    if n_e_cap < n_v - 1:
        msg = f"A connected graph on {n_v} vertices needs at least {n_v - 1} edges, the cap is {n_e_cap}"
        raise DomainError(msg)
    if scores is not None:
        scores = np.asarray(scores, dtype=float)
        if scores.shape != indicator.shape:
            msg = f"Need one score per vertex pair, got {scores.size} for {indicator.size} pairs"
            raise ParameterError(msg)

    selected = np.flatnonzero(indicator)
    if selected.size > n_e_cap:
        indicator[_lowest(selected, scores, selected.size - n_e_cap, rng)] = False

    rows, cols = edge_pairs(n_v)
    index_of = {(int(i), int(j)): k for k, (i, j) in enumerate(zip(rows, cols))}
    while True:
        graph = Graph.from_indicator(n_v, indicator)
        labels = connected_components(graph)
        if labels.max() == 0:
            return indicator

        indicator[rng.choice(np.flatnonzero(_cross_component(n_v, labels)))] = True
        if indicator.sum() > n_e_cap:
            graph = Graph.from_indicator(n_v, indicator)
            on_cycle = np.array(sorted(index_of[edge] for edge in non_bridge_edges(graph)))
            indicator[_lowest(on_cycle, scores, 1, rng)] = False
