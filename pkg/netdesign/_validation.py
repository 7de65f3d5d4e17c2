from __future__ import annotations

__all__ = ["ValidationRow", "best_data_sample", "validate_strategies"]

import dataclasses
import logging
import math
from collections.abc import Iterable, Mapping, Sequence

from ._config import StrategyConfig
from ._dataset import DataSample, Dataset, Secrets
from ._dynamics import objective
from ._exceptions import ParameterError
from ._strategies import StrategyOutcome, design

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ValidationRow:
    iteration: int
    strategy: str
    J: float
    best_data_sample_J: float
    J_star: float | None = None
    outcome: StrategyOutcome | None = dataclasses.field(default=None, compare=False, repr=False)


def best_data_sample(dataset: Dataset, n_e_cap: int) -> DataSample | None:
    """The sample with the largest J among those with at most ``n_e_cap`` edges (first one on ties)."""
    best = None
    for sample in dataset.samples:
        if sample.graph.n_e <= n_e_cap and (best is None or sample.J > best.J):
            best = sample
    return best


def validate_strategies(
    dataset: Dataset,
    secrets: Secrets,
    strategies: Sequence[StrategyConfig],
    iterations: Iterable[int] | None = None,
    oracle: Mapping[int, float] | None = None,
) -> list[ValidationRow]:
    """
    Designs a graph with every strategy on every requested iteration and scores it with that iteration's true dynamics.

    Strategies only see the redacted iteration; ``oracle`` optionally maps iterations to J*.
    """
    iterations = dataset.iterations() if iterations is None else list(iterations)
    rows = []
    for iteration in iterations:
        subset = dataset.iteration(iteration)
        if not len(subset):
            msg = f"The dataset has no samples for iteration {iteration}"
            raise ParameterError(msg)
        dynamics = secrets.for_iteration(iteration)

        for config in strategies:
            outcome = design(subset, config)
            J = objective(dynamics, outcome.graph).J
            best = best_data_sample(subset, config.n_e_out)
            rows.append(
                ValidationRow(
                    iteration=iteration,
                    strategy=config.name,
                    J=J,
                    best_data_sample_J=best.J if best is not None else math.nan,
                    J_star=oracle.get(iteration) if oracle is not None else None,
                    outcome=dataclasses.replace(outcome, J=J),
                )
            )
            logger.info("Iteration %d, %s: J = %.4f", iteration, config.name, J)
    return rows
