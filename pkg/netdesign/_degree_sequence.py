from __future__ import annotations

__all__ = ["degrees_from_vector", "is_graphical", "realize_degree_sequence"]

import logging
from collections.abc import Sequence

import networkx as nx
import numpy as np

from ._exceptions import DomainError, ParameterError
from ._graph import Graph, max_edges

logger = logging.getLogger(__name__)


def is_graphical(d: Sequence[int] | np.ndarray) -> bool:
    """Erdos-Gallai test: the sum is even and, sorted descending, every prefix satisfies the k-th inequality."""
    d = [int(x) for x in d]
    if any(x < 0 for x in d):
        msg = f"Degree sequences cannot contain negative entries: {d}"
        raise ParameterError(msg)
    if not d:
        return True
    return nx.is_valid_degree_sequence_erdos_gallai(d)


def _argmax_lowest(values: np.ndarray, candidates: np.ndarray) -> int:
    # largest value among candidates, lowest index on ties
    best = values[candidates].max()
    return int(candidates[values[candidates] == best][0])


def realize_degree_sequence(d: Sequence[int] | np.ndarray) -> Graph:
    """
    Builds a graph with degree sequence exactly ``d``, deterministically.

    Edges are allocated one at a time: the vertex with the smallest positive residual degree is saturated first, each
    time joining it to the vertex of largest residual degree among those that keep the residual sequence graphical
    (lowest index on ties).
    """
    d = np.array([int(x) for x in d], dtype=int)
    if not is_graphical(d):
        msg = f"Degree sequence {d.tolist()} is not graphical"
        raise DomainError(msg)
    n_v = d.size
    if n_v == 0:
        msg = "Cannot realize an empty degree sequence"
        raise ParameterError(msg)

    residual = d.copy()
    edges: list[tuple[int, int]] = []

    while residual.any():
        positive = np.flatnonzero(residual > 0)
        i = int(positive[np.argmin(residual[positive])])
        neighbors: set[int] = set()

        while residual[i] > 0:
            candidates = []
            for j in range(n_v):
                if j == i or j in neighbors or residual[j] == 0:
                    continue
                residual[i] -= 1
                residual[j] -= 1
                if is_graphical(residual):
                    candidates.append(j)
                residual[i] += 1
                residual[j] += 1

            if not candidates:  # cannot happen for graphical input
                msg = f"Sequential realization of {d.tolist()} got stuck at vertex {i}"
                raise DomainError(msg)

            j = _argmax_lowest(residual, np.array(candidates))
            edges.append((i, j))
            neighbors.add(j)
            residual[i] -= 1
            residual[j] -= 1

    return Graph(n_v, tuple(edges))


def degrees_from_vector(rho: Sequence[float] | np.ndarray, n_e: int) -> np.ndarray:
    """
    Converts a per-vertex preference vector into a graphical degree sequence with (up to repair) ``n_e`` edges.

    Every vertex starts with degree 1; the remaining 2 * n_e - n_v degree units go one at a time to the vertex with the
    largest remaining preference, which is then lowered by a fixed decrement (or retired once the vertex is saturated
    at n_v - 1). Largest degrees are then trimmed until the sequence is graphical.
    """
    rho = np.array(rho, dtype=float)
    n_v = rho.size
    if n_v < 2:
        msg = "Need at least two vertices"
        raise ParameterError(msg)
    if not (n_v - 1 <= n_e <= max_edges(n_v)):
        msg = f"Number of edges must be in [{n_v - 1}, {max_edges(n_v)}], got {n_e}"
        raise ParameterError(msg)
    if not np.all(np.isfinite(rho)):
        msg = "Preference vector must be finite"
        raise ParameterError(msg)

    rho = rho - rho.min()
    d = np.ones(n_v, dtype=int)
    to_assign = 2 * n_e - n_v
    total = rho.sum()
    # a constant vector has nothing to decrement from; unit steps give a round-robin allocation
    delta = total / to_assign if to_assign > 0 and total > 0 else 1.0

    while to_assign > 0:
        i = int(np.argmax(rho))
        d[i] += 1
        to_assign -= 1
        if d[i] < n_v - 1:
            rho[i] -= delta
        else:
            rho[i] = -np.inf

    trimmed = 0
    while not is_graphical(d):
        d[int(np.argmax(d))] -= 1
        trimmed += 1
    if trimmed:
        logger.debug("Trimmed %d degree units to make the sequence graphical", trimmed)
    return d
