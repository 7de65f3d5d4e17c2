from __future__ import annotations

__all__ = [
    "GeneratorKind",
    "Graph",
    "connected_components",
    "edge_pairs",
    "generate",
    "is_connected",
    "max_edges",
]

import dataclasses
import enum
import functools
from collections.abc import Iterable, Mapping
from typing import Any

import networkx as nx
import numpy as np
from scipy.sparse import csgraph

from ._exceptions import ParameterError


def max_edges(n_v: int) -> int:
    return n_v * (n_v - 1) // 2


@functools.lru_cache(maxsize=128)
def edge_pairs(n_v: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Row and column indices of every possible edge {i, j}, i < j, in lexicographic order.

    This order indexes edge indicator vectors, genomes and the upper-triangle block of the feature vector.
    """
    rows, cols = np.triu_indices(n_v, k=1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


@dataclasses.dataclass(frozen=True)
class Graph:
    """
    An undirected, unweighted simple graph on the vertices 0, ..., n_v - 1.

    Edges are stored as a sorted tuple of pairs (i, j) with i < j, which is also the canonical serialized form, so two
    graphs compare (and hash) equal exactly when they have the same labeled edge set. Graphs are values: they are never
    mutated after construction and can be used as cache keys.
    """

    n_v: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n_v < 1:
            msg = f"A graph needs at least one vertex, got n_v={self.n_v}"
            raise ParameterError(msg)

        canonical = set()
        for edge in self.edges:
            i, j = (int(v) for v in edge)
            if i == j:
                msg = f"Self-loop on vertex {i} is not allowed"
                raise ParameterError(msg)
            if not (0 <= i < self.n_v and 0 <= j < self.n_v):
                msg = f"Edge ({i}, {j}) references a vertex outside 0..{self.n_v - 1}"
                raise ParameterError(msg)
            pair = (min(i, j), max(i, j))
            if pair in canonical:
                msg = f"Duplicate edge {pair}"
                raise ParameterError(msg)
            canonical.add(pair)

        object.__setattr__(self, "edges", tuple(sorted(canonical)))

    @classmethod
    def _trusted(cls, n_v: int, edges: tuple[tuple[int, int], ...]) -> Graph:
        # edges must already be canonical (sorted, i < j, unique)
        graph = object.__new__(cls)
        object.__setattr__(graph, "n_v", n_v)
        object.__setattr__(graph, "edges", edges)
        return graph

    @classmethod
    def from_indicator(cls, n_v: int, indicator: np.ndarray) -> Graph:
        """Builds the graph whose edges are the pairs flagged in a lexicographic edge indicator vector."""
        rows, cols = edge_pairs(n_v)
        indicator = np.asarray(indicator, dtype=bool)
        if indicator.shape != rows.shape:
            msg = f"Indicator vector must have length {rows.size} for n_v={n_v}, got {indicator.shape}"
            raise ParameterError(msg)
        selected = np.flatnonzero(indicator)
        return cls._trusted(n_v, tuple(zip(rows[selected].tolist(), cols[selected].tolist())))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> Graph:
        graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls(max(graph.number_of_nodes(), 1), tuple(graph.edges()))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Graph:
        try:
            return cls(int(data["n_v"]), tuple(tuple(edge) for edge in data["edges"]))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ParameterError):
                raise
            msg = f"Malformed graph object: {e}"
            raise ParameterError(msg) from e

    def to_dict(self) -> dict[str, Any]:
        return {"n_v": self.n_v, "edges": [list(edge) for edge in self.edges]}

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_v))
        graph.add_edges_from(self.edges)
        return graph

    @property
    def n_e(self) -> int:
        return len(self.edges)

    @property
    def n_e_min(self) -> int:
        return self.n_v - 1

    @property
    def n_e_max(self) -> int:
        return max_edges(self.n_v)

    @property
    def density(self) -> float:
        if self.n_v < 2:
            return 0.0
        return self.n_e / self.n_e_max

    @functools.cached_property
    def _adjacency(self) -> np.ndarray:
        adjacency = np.zeros((self.n_v, self.n_v))
        if self.edges:
            i, j = np.array(self.edges).T
            adjacency[i, j] = 1.0
            adjacency[j, i] = 1.0
        adjacency.setflags(write=False)
        return adjacency

    def adjacency(self) -> np.ndarray:
        return self._adjacency.copy()

    def laplacian(self) -> np.ndarray:
        """The Laplacian L = D - A; L_ii is the degree of i and L_ij = -1 exactly when {i, j} is an edge."""
        adjacency = self._adjacency
        return np.diag(adjacency.sum(axis=1)) - adjacency

    def degrees(self) -> np.ndarray:
        return self._adjacency.sum(axis=1).astype(int)

    def indicator(self) -> np.ndarray:
        rows, cols = edge_pairs(self.n_v)
        return self._adjacency[rows, cols].astype(bool)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adjacency[i, j])

    def relabel(self, permutation: Iterable[int]) -> Graph:
        """Moves vertex i to position permutation[i]."""
        permutation = list(permutation)
        if sorted(permutation) != list(range(self.n_v)):
            msg = "Relabeling must be a permutation of the vertices"
            raise ParameterError(msg)
        return Graph(self.n_v, tuple((permutation[i], permutation[j]) for i, j in self.edges))


def connected_components(graph: Graph) -> np.ndarray:
    """Component label of every vertex."""
    _, labels = csgraph.connected_components(graph._adjacency, directed=False)
    return labels


def is_connected(graph: Graph) -> bool:
    return bool(connected_components(graph).max() == 0)


class GeneratorKind(str, enum.Enum):
    COMPLETE = "complete"
    PATH = "path"
    RING = "ring"
    STAR = "star"
    K_NEAREST_NEIGHBORS = "k_nearest_neighbors"
    ERDOS_RENYI = "erdos_renyi"
    SMALL_WORLD = "small_world"
    SCALE_FREE = "scale_free"
    RANDOM_EDGES = "random_edges"


def _seed(rng: np.random.Generator | int | None) -> int:
    # networkx generators take integer seeds
    return int(np.random.default_rng(rng).integers(2**32 - 1))


def _check(condition: bool, msg: str) -> None:
    if not condition:
        raise ParameterError(msg)


def generate(
    kind: GeneratorKind | str,
    n_v: int,
    rng: np.random.Generator | int | None = None,
    **params: Any,
) -> Graph:
    """
    Generates a graph of a classic family on n_v vertices.

    Parameters by family:
      - star: ``center`` (default 0)
      - k_nearest_neighbors: ``k``, number of nearest vertices joined on each side of a ring
      - erdos_renyi: ``p``, edge probability
      - small_world: ``k`` (Watts-Strogatz lattice degree, default 4), ``rewire_prob`` (default 0.2)
      - scale_free: ``m``, edges attached by every new vertex (default 2)
      - random_edges: ``e``, exact number of uniformly drawn edges

    Random families draw from ``rng``; the same generator state always yields the same graph.
    """
    kind = GeneratorKind(kind)
    _check(n_v >= 1, f"n_v must be positive, got {n_v}")

    if kind is GeneratorKind.COMPLETE:
        return Graph.from_networkx(nx.complete_graph(n_v))

    if kind is GeneratorKind.PATH:
        return Graph.from_networkx(nx.path_graph(n_v))

    if kind is GeneratorKind.RING:
        _check(n_v >= 3, f"A ring needs at least 3 vertices, got {n_v}")
        return Graph.from_networkx(nx.cycle_graph(n_v))

    if kind is GeneratorKind.STAR:
        center = int(params.get("center", 0))
        _check(0 <= center < n_v, f"Star center {center} is outside 0..{n_v - 1}")
        return Graph(n_v, tuple((center, leaf) for leaf in range(n_v) if leaf != center))

    if kind is GeneratorKind.K_NEAREST_NEIGHBORS:
        k = int(params["k"])
        _check(1 <= k and 2 * k <= n_v - 1, f"k-nearest-neighbors ring needs 1 <= k <= (n_v - 1) / 2, got k={k}")
        return Graph.from_networkx(nx.circulant_graph(n_v, range(1, k + 1)))

    if kind is GeneratorKind.ERDOS_RENYI:
        p = float(params["p"])
        _check(0.0 <= p <= 1.0, f"Edge probability must be in [0, 1], got {p}")
        return Graph.from_networkx(nx.erdos_renyi_graph(n_v, p, seed=_seed(rng)))

    if kind is GeneratorKind.SMALL_WORLD:
        k = int(params.get("k", 4))
        rewire_prob = float(params.get("rewire_prob", 0.2))
        _check(2 <= k < n_v, f"Small-world lattice degree must satisfy 2 <= k < n_v, got k={k}")
        _check(0.0 <= rewire_prob <= 1.0, f"Rewiring probability must be in [0, 1], got {rewire_prob}")
        return Graph.from_networkx(nx.watts_strogatz_graph(n_v, k, rewire_prob, seed=_seed(rng)))

    if kind is GeneratorKind.SCALE_FREE:
        m = int(params.get("m", 2))
        _check(1 <= m < n_v, f"Scale-free attachment must satisfy 1 <= m < n_v, got m={m}")
        return Graph.from_networkx(nx.barabasi_albert_graph(n_v, m, seed=_seed(rng)))

    # GeneratorKind.RANDOM_EDGES
    e = int(params["e"])
    _check(0 <= e <= max_edges(n_v), f"Cannot place {e} edges on {n_v} vertices (max {max_edges(n_v)})")
    return Graph.from_networkx(nx.gnm_random_graph(n_v, e, seed=_seed(rng)))
