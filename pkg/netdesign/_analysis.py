from __future__ import annotations

__all__ = [
    "CorrelationReport",
    "EdgeBaseline",
    "Fronts",
    "ParetoFront",
    "compute_fronts",
    "correlation",
    "delta_from_front",
    "deltas",
    "entangled_report",
    "front_flags",
]

import dataclasses
import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from typing import Literal

import numpy as np

from ._config import MetricMemoConfig
from ._dataset import DataSample, Dataset
from ._exceptions import DomainError, ParameterError
from ._memo import MemoizedMetrics
from ._metrics import betweenness_stats, degree_stats, metric_bundle

logger = logging.getLogger(__name__)

GOOD_FRONT_MIN_J = 0.01
_FRONT_TOLERANCE = 1e-12


def correlation(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Pearson correlation; NaN when either input has zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        msg = f"Correlation needs two vectors of equal length >= 2, got shapes {x.shape} and {y.shape}"
        raise ParameterError(msg)

    dx = x - x.mean()
    dy = y - y.mean()
    denominator = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denominator == 0.0:
        logger.debug("Correlation undefined: zero variance")
        return math.nan
    return min(max(float(dx @ dy) / denominator, -1.0), 1.0)


def _mean_defined(values: np.ndarray) -> np.ndarray | float:
    # mean over axis 0 of the non-NaN entries, NaN where nothing is defined
    values = np.asarray(values, dtype=float)
    defined = ~np.isnan(values)
    counts = defined.sum(axis=0)
    sums = np.where(defined, values, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return float(mean) if mean.ndim == 0 else mean


@dataclasses.dataclass(frozen=True)
class CorrelationReport:
    """
    Correlations between entangledness and synchronization, averaged over dataset iterations.

    ``rho_degree[i]`` is corr(d_hat_i, J) for vertex i (0-based), ``rho_betweenness`` the same for b_hat_i. The index
    correlations relate the 1-based vertex index to those vectors. Undefined correlations are NaN.
    """

    corr_var_d_J: float
    corr_var_b_J: float
    corr_var_d_neg_Q: float
    corr_var_b_neg_Q: float
    rho_degree: np.ndarray
    rho_betweenness: np.ndarray
    index_corr_degree: float
    index_corr_betweenness: float
    iterations: int

    def table(self) -> dict[str, float]:
        return {
            "corr_var_d_J": self.corr_var_d_J,
            "corr_var_b_J": self.corr_var_b_J,
            "corr_var_d_neg_Q": self.corr_var_d_neg_Q,
            "corr_var_b_neg_Q": self.corr_var_b_neg_Q,
            "index_corr_degree": self.index_corr_degree,
            "index_corr_betweenness": self.index_corr_betweenness,
        }


def _index_correlation(rho: np.ndarray) -> float:
    index = np.arange(1, rho.size + 1, dtype=float)
    defined = ~np.isnan(rho)
    if defined.sum() < 2:
        return math.nan
    return correlation(index[defined], rho[defined])


def entangled_report(dataset: Dataset) -> CorrelationReport:
    memo = MemoizedMetrics(
        MetricMemoConfig("degree", degree_stats),
        MetricMemoConfig("betweenness", betweenness_stats),
        MetricMemoConfig("bundle", metric_bundle),
    )
    iterations = dataset.iterations()
    if not iterations:
        msg = "Correlations need at least 3 samples, the dataset is empty"
        raise DomainError(msg)

    scalars = []
    rho_degree = []
    rho_betweenness = []
    for iteration in iterations:
        samples = dataset.iteration(iteration).samples
        if len(samples) < 3:
            msg = f"Correlations need at least 3 samples, iteration {iteration} has {len(samples)}"
            raise DomainError(msg)

        J = np.array([sample.J for sample in samples])
        graphs = [sample.graph for sample in samples]
        missing = [sample.graph for sample in samples if sample.metrics is None]
        values = memo.process_chunk(graphs, ["degree", "betweenness"])
        if missing:
            memo.process_chunk(missing, ["bundle"])
        bundles = [sample.metrics or memo.get("bundle", sample.graph) for sample in samples]

        var_d = np.array([bundle.var_hat_d for bundle in bundles])
        var_b = np.array([bundle.var_hat_b for bundle in bundles])
        neg_q = -np.array([bundle.eigenratio for bundle in bundles])
        scalars.append(
            [correlation(var_d, J), correlation(var_b, J), correlation(var_d, neg_q), correlation(var_b, neg_q)]
        )

        d_hat = np.stack([stats.norm_dev for stats in values["degree"]])
        b_hat = np.stack([stats.norm_dev for stats in values["betweenness"]])
        rho_degree.append([correlation(d_hat[:, i], J) for i in range(dataset.spec.n_v)])
        rho_betweenness.append([correlation(b_hat[:, i], J) for i in range(dataset.spec.n_v)])

    corr_var_d_J, corr_var_b_J, corr_var_d_neg_Q, corr_var_b_neg_Q = _mean_defined(np.array(scalars))
    mean_rho_degree = _mean_defined(np.array(rho_degree))
    mean_rho_betweenness = _mean_defined(np.array(rho_betweenness))

    return CorrelationReport(
        corr_var_d_J=float(corr_var_d_J),
        corr_var_b_J=float(corr_var_b_J),
        corr_var_d_neg_Q=float(corr_var_d_neg_Q),
        corr_var_b_neg_Q=float(corr_var_b_neg_Q),
        rho_degree=mean_rho_degree,
        rho_betweenness=mean_rho_betweenness,
        index_corr_degree=_index_correlation(mean_rho_degree),
        index_corr_betweenness=_index_correlation(mean_rho_betweenness),
        iterations=len(iterations),
    )


@dataclasses.dataclass(frozen=True)
class ParetoFront:
    """
    Pareto-optimal samples trading edge count against J, joined piecewise linearly.

    The good front holds the samples with few edges and large J (only samples with J > 0.01 qualify), the bad front
    those with many edges and small J. On both, J increases with n_e along the support. ``support_indices`` are
    positions in the analyzed dataset.
    """

    orientation: Literal["good", "bad"]
    support: tuple[tuple[int, float], ...]
    support_indices: tuple[int, ...]

    @property
    def is_empty(self) -> bool:
        return not self.support

    @property
    def n_e_range(self) -> tuple[int, int] | None:
        if self.is_empty:
            return None
        return self.support[0][0], self.support[-1][0]

    def value(self, n_e: float) -> float | None:
        """Interpolated J at n_e; None outside the support range."""
        if self.is_empty or not (self.support[0][0] <= n_e <= self.support[-1][0]):
            return None
        xs, ys = zip(*self.support)
        return float(np.interp(n_e, xs, ys))


@dataclasses.dataclass(frozen=True)
class EdgeBaseline:
    """Mean J (``means[e]``) and the dataset positions (``members[e]``) of the samples with exactly e edges."""

    means: dict[int, float]
    members: dict[int, tuple[int, ...]]

    def mean(self, n_e: int) -> float | None:
        return self.means.get(n_e)


@dataclasses.dataclass(frozen=True)
class Fronts:
    good: ParetoFront
    bad: ParetoFront
    baseline: EdgeBaseline


def _sweep(points: list[tuple[int, float, int]], orientation: Literal["good", "bad"]) -> ParetoFront:
    # good: fewest edges first, keep strict improvements of J; bad: most edges first, keep strict decreases
    if orientation == "good":
        ordered = sorted(points, key=lambda point: (point[0], -point[1], point[2]))
        better = float.__gt__
        best = -math.inf
    else:
        ordered = sorted(points, key=lambda point: (-point[0], point[1], point[2]))
        better = float.__lt__
        best = math.inf

    kept = []
    for n_e, J, index in ordered:
        if better(J, best):
            kept.append((n_e, J, index))
            best = J

    kept.sort()
    return ParetoFront(
        orientation=orientation,
        support=tuple((n_e, J) for n_e, J, _ in kept),
        support_indices=tuple(index for _, _, index in kept),
    )


def compute_fronts(dataset: Dataset) -> Fronts:
    points = [(sample.graph.n_e, float(sample.J), index) for index, sample in enumerate(dataset.samples)]

    good = _sweep([point for point in points if point[1] > GOOD_FRONT_MIN_J], "good")
    bad = _sweep(points, "bad")
    if good.is_empty:
        logger.info("No sample has J > %s; the good front is empty", GOOD_FRONT_MIN_J)

    members: dict[int, list[int]] = defaultdict(list)
    for n_e, _, index in points:
        members[n_e].append(index)
    baseline = EdgeBaseline(
        means={n_e: float(np.mean([points[i][1] for i in indices])) for n_e, indices in sorted(members.items())},
        members={n_e: tuple(indices) for n_e, indices in sorted(members.items())},
    )
    return Fronts(good=good, bad=bad, baseline=baseline)


def delta_from_front(front: ParetoFront, baseline: EdgeBaseline, sample: DataSample) -> float:
    """
    Normalized distance of a sample from a front: (P(n_e) - J) / (P(n_e) - B(n_e)), with B the mean J at that edge
    count. 0 on the front, 1 at the mean; infinite where the front or the mean is undefined or the two coincide.

    Samples beyond the interpolated front give a negative ratio, which is clamped to 0.
    """
    n_e = sample.graph.n_e
    front_value = front.value(n_e)
    mean = baseline.mean(n_e)
    if front_value is None or mean is None or abs(front_value - mean) <= _FRONT_TOLERANCE:
        return math.inf

    delta = (front_value - sample.J) / (front_value - mean)
    if delta < 0.0:
        logger.debug("Clamping delta %.3g to 0 for a sample beyond the %s front", delta, front.orientation)
        return 0.0
    return delta


def deltas(front: ParetoFront, baseline: EdgeBaseline, dataset: Dataset) -> np.ndarray:
    return np.array([delta_from_front(front, baseline, sample) for sample in dataset.samples], dtype=float)


def front_flags(dataset: Dataset) -> list[tuple[bool, bool]]:
    """(on the good front, on the bad front) for every sample, computed per iteration."""
    flags = [(False, False)] * len(dataset)
    positions: dict[int, list[int]] = defaultdict(list)
    for index, sample in enumerate(dataset.samples):
        positions[sample.iteration].append(index)

    for iteration, indices in positions.items():
        fronts = compute_fronts(dataset.iteration(iteration))
        good = {indices[i] for i in fronts.good.support_indices}
        bad = {indices[i] for i in fronts.bad.support_indices}
        for index in indices:
            flags[index] = (index in good, index in bad)
    return flags
