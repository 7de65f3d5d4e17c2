from __future__ import annotations

__all__ = [
    "BetweennessStats",
    "DegreeStats",
    "MetricBundle",
    "StructuralStats",
    "algebraic_connectivity",
    "betweenness_stats",
    "degree_stats",
    "eigenratio",
    "eigenvector_centrality",
    "metric_bundle",
    "shortest_cycle_lengths",
    "spectrum",
    "structural_stats",
]

import dataclasses
import math
from typing import Any

import networkx as nx
import numpy as np
from scipy.sparse import csgraph

from ._exceptions import DomainError
from ._graph import Graph, is_connected
from ._linalg import EigenMethod, eigh, eigvalsh

CONNECTIVITY_TOLERANCE = 1e-9


def _sample_variance(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.var(values, ddof=1))


def _require_connected(graph: Graph, what: str) -> None:
    if not is_connected(graph):
        msg = f"{what} is only defined for connected graphs"
        raise DomainError(msg)


@dataclasses.dataclass(frozen=True)
class DegreeStats:
    d: np.ndarray
    mean: float
    var: float
    norm_var: float
    norm_dev: np.ndarray


@dataclasses.dataclass(frozen=True)
class BetweennessStats:
    b: np.ndarray
    mean: float
    var: float
    norm_var: float
    norm_dev: np.ndarray


@dataclasses.dataclass(frozen=True)
class StructuralStats:
    """
    Path, cycle and clustering statistics of a connected graph.

    Acyclic graphs have no girth: they report ``girth == 0``, ``mean_shortest_return_cycle == 0.0`` and
    ``has_cycle == False``.
    """

    avg_shortest_path: float
    var_shortest_path: float
    diameter: int
    girth: int
    has_cycle: bool
    mean_shortest_return_cycle: float
    global_clustering: float
    local_clustering: np.ndarray
    eigenvector_centrality: np.ndarray


@dataclasses.dataclass(frozen=True)
class MetricBundle:
    """The metrics cached next to every dataset sample."""

    n_e: int
    var_hat_d: float
    var_hat_b: float
    lambda_2: float
    eigenratio: float

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> MetricBundle:
        return cls(
            n_e=int(data["n_e"]),
            var_hat_d=float(data["var_hat_d"]),
            var_hat_b=float(data["var_hat_b"]),
            lambda_2=float(data["lambda_2"]),
            eigenratio=float(data["eigenratio"]),
        )


def spectrum(graph: Graph, method: EigenMethod = "lapack") -> np.ndarray:
    """Eigenvalues of the Laplacian, ascending. The first one is 0 up to rounding."""
    return eigvalsh(graph.laplacian(), method=method)


def algebraic_connectivity(graph: Graph, method: EigenMethod = "lapack") -> float:
    if graph.n_v < 2:
        return 0.0
    return float(spectrum(graph, method=method)[1])


def eigenratio(graph: Graph, method: EigenMethod = "lapack") -> float:
    """Q = lambda_n / lambda_2; infinite for disconnected graphs."""
    if graph.n_v < 2:
        return math.inf
    eigenvalues = spectrum(graph, method=method)
    if eigenvalues[1] <= CONNECTIVITY_TOLERANCE:
        return math.inf
    return float(eigenvalues[-1] / eigenvalues[1])


def degree_stats(graph: Graph) -> DegreeStats:
    d = graph.degrees()
    n_v = graph.n_v
    mean = float(d.mean())
    var = _sample_variance(d.astype(float))
    s = graph.density

    if 0.0 < s < 1.0:
        norm_var = (n_v - 1) / (n_v * graph.n_e * (1.0 - s)) * var
    else:
        norm_var = 0.0

    norm_dev = (d - mean) / (n_v - 1) if n_v > 1 else np.zeros(n_v)
    return DegreeStats(d=d, mean=mean, var=var, norm_var=norm_var, norm_dev=norm_dev)


def betweenness_stats(graph: Graph) -> BetweennessStats:
    """
    Betweenness centralities b_i, summing over unordered pairs {j, k} not containing i the fraction of shortest j-k
    paths through i.

    The normalized variance divides by the variance of an infinite star, so it is not clamped to 1.
    """
    _require_connected(graph, "Betweenness centrality")
    n_v = graph.n_v

    # undirected + unnormalized: networkx already halves the ordered-pair sums
    centrality = nx.betweenness_centrality(graph.to_networkx(), normalized=False)
    b = np.array([centrality[i] for i in range(n_v)], dtype=float)

    mean = float(b.mean())
    var = _sample_variance(b)
    if n_v > 2:
        norm_var = 4.0 * var / ((n_v - 1) * (n_v - 2) ** 2)
        norm_dev = (b - mean) / ((n_v - 1) * (n_v - 2) / 2)
    else:
        norm_var = 0.0
        norm_dev = np.zeros(n_v)
    return BetweennessStats(b=b, mean=mean, var=var, norm_var=norm_var, norm_dev=norm_dev)


def eigenvector_centrality(graph: Graph, method: EigenMethod = "lapack") -> np.ndarray:
    """Principal eigenvector of the adjacency matrix, unit norm, oriented so its largest-magnitude entry is positive."""
    _, vectors = eigh(graph.adjacency(), method=method)
    principal = vectors[:, -1]
    principal = principal / np.linalg.norm(principal)
    if principal[np.argmax(np.abs(principal))] < 0:
        principal = -principal
    return principal


def shortest_cycle_lengths(graph: Graph) -> np.ndarray:
    """
    Length of the shortest cycle through every vertex; 0 for vertices on no cycle.

    The shortest cycle through an edge {u, v} closes the shortest u-v path that avoids that edge; the shortest cycle
    through a vertex is the best of its incident edges.
    """
    nx_graph = graph.to_networkx()
    through_vertex = np.full(graph.n_v, np.inf)
    for u, v in graph.edges:
        nx_graph.remove_edge(u, v)
        try:
            length = nx.shortest_path_length(nx_graph, u, v) + 1
        except nx.NetworkXNoPath:
            length = np.inf
        nx_graph.add_edge(u, v)
        through_vertex[u] = min(through_vertex[u], length)
        through_vertex[v] = min(through_vertex[v], length)
    through_vertex[np.isinf(through_vertex)] = 0
    return through_vertex.astype(int)


def structural_stats(graph: Graph, method: EigenMethod = "lapack") -> StructuralStats:
    _require_connected(graph, "Structural statistics")

    distances = csgraph.shortest_path(graph.adjacency(), directed=False, unweighted=True)
    pair_distances = distances[np.triu_indices(graph.n_v, k=1)]
    if pair_distances.size:
        avg_shortest_path = float(pair_distances.mean())
        var_shortest_path = float(pair_distances.var())
        diameter = int(pair_distances.max())
    else:
        avg_shortest_path = var_shortest_path = 0.0
        diameter = 0

    cycles = shortest_cycle_lengths(graph)
    on_cycle = cycles[cycles > 0]
    has_cycle = bool(on_cycle.size)

    nx_graph = graph.to_networkx()
    local = nx.clustering(nx_graph)

    return StructuralStats(
        avg_shortest_path=avg_shortest_path,
        var_shortest_path=var_shortest_path,
        diameter=diameter,
        girth=int(on_cycle.min()) if has_cycle else 0,
        has_cycle=has_cycle,
        mean_shortest_return_cycle=float(on_cycle.mean()) if has_cycle else 0.0,
        global_clustering=float(nx.transitivity(nx_graph)),
        local_clustering=np.array([local[i] for i in range(graph.n_v)], dtype=float),
        eigenvector_centrality=eigenvector_centrality(graph, method=method),
    )


def metric_bundle(graph: Graph, method: EigenMethod = "lapack") -> MetricBundle:
    eigenvalues = spectrum(graph, method=method)
    lambda_2 = float(eigenvalues[1]) if graph.n_v > 1 else 0.0
    return MetricBundle(
        n_e=graph.n_e,
        var_hat_d=degree_stats(graph).norm_var,
        var_hat_b=betweenness_stats(graph).norm_var,
        lambda_2=lambda_2,
        eigenratio=float(eigenvalues[-1] / lambda_2) if lambda_2 > CONNECTIVITY_TOLERANCE else math.inf,
    )
