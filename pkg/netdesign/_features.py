from __future__ import annotations

__all__ = ["FEATURE_SCHEMA_VERSION", "extract_features", "feature_length", "feature_matrix", "feature_names"]

from collections.abc import Sequence

import numpy as np

from ._graph import Graph, edge_pairs, max_edges
from ._memo import MemoizedMetrics
from ._metrics import degree_stats, spectrum, structural_stats

FEATURE_SCHEMA_VERSION = 1


def feature_length(n_v: int) -> int:
    return max_edges(n_v) + 3 * n_v + 8


def feature_names(n_v: int) -> list[str]:
    """Column names of the feature vector, in order. Vertices are 0-based."""
    rows, cols = edge_pairs(n_v)
    return [
        *(f"edge_{i}_{j}" for i, j in zip(rows.tolist(), cols.tolist())),
        "lambda_2",
        "lambda_n",
        "n_e",
        *(f"d_hat_{i}" for i in range(n_v)),
        "var_hat_d",
        "global_clustering",
        *(f"local_clustering_{i}" for i in range(n_v)),
        "avg_shortest_path",
        "var_shortest_path",
        "diameter",
        *(f"eigenvector_centrality_{i}" for i in range(n_v)),
    ]


def extract_features(graph: Graph) -> np.ndarray:
    """
    The labeled feature vector of a connected graph: the upper-triangle off-diagonal entries of -L (edge indicators),
    lambda_2, lambda_n, n_e, the normalized degree deviations, the normalized degree variance, the global and local
    clustering coefficients, the mean and variance of the shortest paths, the diameter and the eigenvector centralities.

    Isomorphic graphs with different labelings generally get different vectors.
    """
    eigenvalues = spectrum(graph)
    degrees = degree_stats(graph)
    structure = structural_stats(graph)

    return np.concatenate(
        [
            graph.indicator().astype(float),
            [eigenvalues[1], eigenvalues[-1], graph.n_e],
            degrees.norm_dev,
            [degrees.norm_var, structure.global_clustering],
            structure.local_clustering,
            [structure.avg_shortest_path, structure.var_shortest_path, structure.diameter],
            structure.eigenvector_centrality,
        ]
    )


def feature_matrix(graphs: Sequence[Graph], memo: MemoizedMetrics | None = None) -> np.ndarray:
    """Stacks the feature vectors of several graphs; ``memo`` must hold a "features" metric when given."""
    if memo is not None:
        rows = memo.process_chunk(graphs, ["features"])["features"]
    else:
        rows = [extract_features(graph) for graph in graphs]
    if not rows:
        return np.empty((0, 0))
    return np.stack(rows)
