from __future__ import annotations

__all__ = [
    "StrategyOutcome",
    "combination_scores",
    "combine_graphs",
    "design",
    "design_a",
    "design_an",
    "design_bwne",
    "design_ddd",
    "design_dpf",
    "design_nnga",
    "design_pf",
]

import dataclasses
import logging
import math
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np

from ._analysis import compute_fronts, deltas, entangled_report
from ._config import GaConfig, MetricMemoConfig, NnConfig, StrategyConfig
from ._dataset import Dataset
from ._degree_sequence import degrees_from_vector, realize_degree_sequence
from ._exceptions import DomainError, ParameterError, StrategyError, TrainingError
from ._features import extract_features, feature_matrix
from ._genetic import ga_optimize
from ._graph import Graph, connected_components, edge_pairs, max_edges
from ._memo import MemoizedMetrics
from ._repair import non_bridge_edges, repair_connectivity
from ._surrogate import train_surrogate

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class StrategyOutcome:
    """
    A designed graph plus its audit trail: the dataset positions of the selected samples and their combination
    weights. DDD records the per-vertex preference vector as weights; NNGA selects nothing.
    """

    graph: Graph
    strategy: StrategyConfig
    selected: tuple[int, ...]
    weights: tuple[float, ...]
    J: float | None = None

    @property
    def selected_count(self) -> int:
        return len(self.selected)

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy.to_dict(),
            "graph": self.graph.to_dict(),
            "selected_count": self.selected_count,
            "selected": list(self.selected),
            "weights": list(self.weights),
            "J": self.J,
        }


def _as_indicator(item: Graph | np.ndarray, n_v: int) -> np.ndarray:
    if isinstance(item, Graph):
        return item.indicator().astype(float)
    laplacian = np.asarray(item, dtype=float)
    if laplacian.shape != (n_v, n_v):
        msg = f"Expected a {n_v}x{n_v} Laplacian, got shape {laplacian.shape}"
        raise ParameterError(msg)
    rows, cols = edge_pairs(n_v)
    return -laplacian[rows, cols]


def _n_v_of(item: Graph | np.ndarray) -> int:
    return item.n_v if isinstance(item, Graph) else int(np.asarray(item).shape[0])


def combination_scores(graphs: Sequence[Graph | np.ndarray], weights: Sequence[float] | np.ndarray) -> np.ndarray:
    """z_jk = sum_i w_i [-L_i]_jk for every vertex pair j < k, in lexicographic pair order."""
    if not graphs:
        msg = "Nothing to combine"
        raise ParameterError(msg)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(graphs),):
        msg = f"Need one weight per graph, got {weights.size} weights for {len(graphs)} graphs"
        raise ParameterError(msg)
    n_v = _n_v_of(graphs[0])
    if any(_n_v_of(graph) != n_v for graph in graphs):
        msg = "All combined graphs must have the same number of vertices"
        raise ParameterError(msg)
    return weights @ np.stack([_as_indicator(graph, n_v) for graph in graphs])


def _select_top(scores: np.ndarray, n_e_out: int) -> np.ndarray:
    indicator = np.zeros(scores.size, dtype=bool)
    indicator[np.argsort(-scores, kind="stable")[:n_e_out]] = True
    return indicator


def combine_graphs(
    graphs: Sequence[Graph | np.ndarray], weights: Sequence[float] | np.ndarray, n_e_out: int
) -> Graph:
    """
    Weighted combination of graphs (or their Laplacians): the n_e_out vertex pairs with the largest combined weight
    z_jk, ties going to the lexicographically first pair. The result may be disconnected.
    """
    scores = combination_scores(graphs, weights)
    n_v = _n_v_of(graphs[0])
    if not (0 <= n_e_out <= max_edges(n_v)):
        msg = f"Cannot select {n_e_out} edges on {n_v} vertices (max {max_edges(n_v)})"
        raise ParameterError(msg)
    return Graph.from_indicator(n_v, _select_top(scores, n_e_out))


def _check(dataset: Dataset, config: StrategyConfig) -> None:
    if not len(dataset):
        msg = f"{config.name} needs a non-empty dataset"
        raise StrategyError(msg)
    n_v = dataset.spec.n_v
    if not (n_v - 1 <= config.n_e_out <= max_edges(n_v)):
        msg = f"n_e_out must be in [{n_v - 1}, {max_edges(n_v)}], got {config.n_e_out}"
        raise ParameterError(msg)


def _combine_selected(
    dataset: Dataset, config: StrategyConfig, selected: Sequence[int], weights: Sequence[float]
) -> StrategyOutcome:
    graphs = [dataset.samples[index].graph for index in selected]
    scores = combination_scores(graphs, weights)
    indicator = repair_connectivity(_select_top(scores, config.n_e_out), dataset.spec.n_v, scores)
    return StrategyOutcome(
        graph=Graph.from_indicator(dataset.spec.n_v, indicator),
        strategy=config,
        selected=tuple(int(index) for index in selected),
        weights=tuple(float(weight) for weight in weights),
    )


def _merge(*selections: tuple[Sequence[int], Sequence[float]]) -> tuple[list[int], list[float]]:
    # a sample selected more than once gets the sum of its weights
    merged: dict[int, float] = {}
    for indices, weights in selections:
        for index, weight in zip(indices, weights):
            merged[int(index)] = merged.get(int(index), 0.0) + float(weight)
    ordered = sorted(merged)
    return ordered, [merged[index] for index in ordered]


def _signed_power(x: np.ndarray, alpha: float) -> np.ndarray:
    return np.sign(x) * np.abs(x) ** alpha


def design_a(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """Combines all graphs with weights J^alpha."""
    _check(dataset, config)
    weights = dataset.objectives**config.alpha
    return _combine_selected(dataset, config, range(len(dataset)), weights)


def design_an(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """
    Combines all graphs with weights (J - B_e)^alpha, B_e being the mean J of the graphs with the same edge count.

    The power keeps the sign of the base, so graphs worse than their edge-count average push their edges out.
    """
    _check(dataset, config)
    baseline = compute_fronts(dataset).baseline
    means = np.array([baseline.means[sample.graph.n_e] for sample in dataset.samples])
    weights = _signed_power(dataset.objectives - means, config.alpha)
    return _combine_selected(dataset, config, range(len(dataset)), weights)


def _batch_size(fraction: float, count: int) -> int:
    # round half up
    return max(1, math.floor(fraction * count + 0.5))


def design_bwne(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """
    For every edge count e, the best p_e graphs (by J) get weight +1 and the worst p_e weight -1, with
    p_e = max(1, round(p |L_e|)). A singleton L_e is both best and worst, so it cancels out.
    """
    _check(dataset, config)
    J = dataset.objectives
    best: list[int] = []
    worst: list[int] = []
    for members in compute_fronts(dataset).baseline.members.values():
        members = np.array(members)
        batch = _batch_size(config.p, members.size)
        best.extend(members[np.argsort(-J[members], kind="stable")[:batch]].tolist())
        worst.extend(members[np.argsort(J[members], kind="stable")[:batch]].tolist())

    selected, weights = _merge((best, [1.0] * len(best)), (worst, [-1.0] * len(worst)))
    return _combine_selected(dataset, config, selected, weights)


def _closest(front_deltas: np.ndarray, front_size: int, fraction: float) -> np.ndarray:
    k = max(front_size, math.ceil(fraction * front_deltas.size - 1e-9))
    return np.argsort(front_deltas, kind="stable")[: min(k, front_deltas.size)]


def _pf_selection(dataset: Dataset, config: StrategyConfig) -> tuple[np.ndarray, np.ndarray]:
    fronts = compute_fronts(dataset)
    if fronts.good.is_empty:
        msg = f"{config.name}: the good Pareto front is empty (no sample has J > 0.01)"
        raise StrategyError(msg)
    good_deltas = deltas(fronts.good, fronts.baseline, dataset)
    selected = _closest(good_deltas, len(fronts.good.support), config.p)
    return selected, np.exp(-good_deltas[selected])


def design_pf(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """
    Combines the k graphs closest to the good Pareto front, k = max(front size, ceil(p |L|)), with weights exp(-delta).
    """
    _check(dataset, config)
    selected, weights = _pf_selection(dataset, config)
    return _combine_selected(dataset, config, selected.tolist(), weights)


def design_dpf(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """PF plus the graphs closest to the bad Pareto front, those with weights -exp(-delta_bad)."""
    _check(dataset, config)
    good_selected, good_weights = _pf_selection(dataset, config)

    fronts = compute_fronts(dataset)
    bad_deltas = deltas(fronts.bad, fronts.baseline, dataset)
    bad_selected = _closest(bad_deltas, len(fronts.bad.support), config.p)
    bad_weights = -np.exp(-bad_deltas[bad_selected])

    selected, weights = _merge((good_selected, good_weights), (bad_selected, bad_weights))
    return _combine_selected(dataset, config, selected, weights)


def _pair_scores(rho: np.ndarray) -> np.ndarray:
    rows, cols = edge_pairs(rho.size)
    return rho[rows] + rho[cols]


def _degree_preserving_connect(graph: Graph, scores: np.ndarray) -> Graph | None:
    """
    Merges components with double-edge swaps {a, b}, {c, d} -> {a, c}, {b, d}, where {a, b} lies on a cycle and
    {c, d} is in another component; degrees are unchanged. None when no such swap exists.
    """
    rows, cols = edge_pairs(graph.n_v)
    score_of = {(int(i), int(j)): float(s) for i, j, s in zip(rows, cols, scores)}
    edges = set(graph.edges)

    while True:
        current = Graph(graph.n_v, tuple(edges))
        labels = connected_components(current)
        if labels.max() == 0:
            return current

        on_cycle = sorted(non_bridge_edges(current), key=lambda edge: (score_of[edge], edge))
        for a, b in on_cycle:
            others = [(c, d) for c, d in sorted(edges) if labels[c] != labels[a]]
            if others:
                c, d = others[0]
                break
        else:
            return None

        edges -= {(a, b), (c, d)}
        edges |= {(min(a, c), max(a, c)), (min(b, d), max(b, d))}


def design_ddd(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """
    Data-driven degrees: the per-vertex correlations rho_i = corr(d_hat_i, J) shape a degree sequence (a larger rho_i
    earns a larger degree), which is then realized as a graph with n_e_out edges.
    """
    _check(dataset, config)
    n_v = dataset.spec.n_v
    rho = entangled_report(dataset).rho_degree.copy()
    if np.isnan(rho).all():
        msg = "DDD: the degree correlations are undefined for every vertex"
        raise DomainError(msg)
    rho[np.isnan(rho)] = np.nanmin(rho)

    degrees = degrees_from_vector(rho, config.n_e_out)
    graph = realize_degree_sequence(degrees)
    scores = _pair_scores(rho)

    if graph.n_e < config.n_e_out:
        indicator = graph.indicator()
        free = np.flatnonzero(~indicator)
        missing = config.n_e_out - graph.n_e
        indicator[free[np.argsort(-scores[free], kind="stable")[:missing]]] = True
        logger.info("DDD: added %d edge(s) to reach %d edges", missing, config.n_e_out)
        graph = Graph.from_indicator(n_v, indicator)

    connected = _degree_preserving_connect(graph, scores)
    if connected is None:
        logger.warning("DDD: connecting the realized graph changes some degrees by one")
        connected = Graph.from_indicator(n_v, repair_connectivity(graph.indicator(), n_v, scores))

    return StrategyOutcome(
        graph=connected, strategy=config, selected=tuple(range(len(dataset))), weights=tuple(rho.tolist())
    )


def design_nnga(
    dataset: Dataset,
    config: StrategyConfig,
    nn_config: NnConfig | None = None,
    ga_config: GaConfig | None = None,
) -> StrategyOutcome:
    """
    Trains a surrogate of J on the dataset's feature vectors, then maximizes it with the genetic algorithm over
    connected graphs with at most n_e_out edges.
    """
    _check(dataset, config)
    nn_config = nn_config or config.nn or NnConfig.for_case(dataset.spec.case)
    ga_config = ga_config or config.ga or GaConfig()

    memo = MemoizedMetrics(MetricMemoConfig("features", extract_features))
    features = feature_matrix(dataset.graphs, memo)
    try:
        trained = train_surrogate(features, dataset.objectives, nn_config, n_v=dataset.spec.n_v)
    except TrainingError as e:
        msg = f"NNGA: surrogate training diverged at epoch {e.epoch}"
        raise StrategyError(msg, loss_trace=e.loss_trace) from e
    logger.info("NNGA: surrogate trained, final loss %.3g", trained.final_loss)

    def surrogate(graph: Graph) -> float:
        return float(trained.net.predict_features(memo.get("features", graph))[0])

    # over-budget genomes lose the edges the J^alpha-weighted combination of the dataset ranks lowest
    edge_scores = combination_scores(dataset.graphs, dataset.objectives**config.alpha)
    result = ga_optimize(surrogate, dataset.spec.n_v, config.n_e_out, ga_config, edge_scores=edge_scores)
    return StrategyOutcome(graph=result.graph, strategy=config, selected=(), weights=())


_STRATEGIES: dict[str, Callable[[Dataset, StrategyConfig], StrategyOutcome]] = {
    "DDD": design_ddd,
    "NNGA": design_nnga,
    "A": design_a,
    "AN": design_an,
    "BWNE": design_bwne,
    "PF": design_pf,
    "DPF": design_dpf,
}


def design(dataset: Dataset, config: StrategyConfig) -> StrategyOutcome:
    """Runs the configured strategy on the graphs and objective values of a dataset, never on its dynamics."""
    return _STRATEGIES[config.name](dataset.redacted(), config)
