from __future__ import annotations

__all__ = ["STRATEGY_NAMES", "GaConfig", "MetricMemoConfig", "NnConfig", "StrategyConfig"]

import dataclasses
from collections.abc import Callable, Sequence
from typing import TYPE_CHECKING, Any, Literal

from ._exceptions import ParameterError

if TYPE_CHECKING:
    from ._graph import Graph

STRATEGY_NAMES = ("DDD", "NNGA", "A", "AN", "BWNE", "PF", "DPF")

_DEFAULT_FRACTION = {"BWNE": 0.1, "PF": 0.04, "DPF": 0.04}


@dataclasses.dataclass
class MetricMemoConfig:
    """
    Parameters for MemoizedMetrics. Primary parameters are the metric name and the function computing it from a graph,
    for example `MetricMemoConfig("spectrum", spectrum)`.

    Graphs listed in `prefetch` are evaluated when the memo is created (for example the whole dataset, if it will be
    queried repeatedly).

    Finally, you can set the LRU cache size - to bound memory, only the most recently used values are kept. The default
    cache size is 10000 graphs.
    """

    name: str
    compute: Callable[[Graph], Any]
    prefetch: Sequence[Graph] = ()
    lru_cache_size: int = 10_000

    def __post_init__(self):
        if self.lru_cache_size < 1:
            msg = f"lru_cache_size must be positive, got {self.lru_cache_size}"
            raise ParameterError(msg)


@dataclasses.dataclass(frozen=True)
class NnConfig:
    """
    Surrogate network and training schedule.

    The learning rate is multiplied by `lr_decay` every `decay_every` epochs. Adam moments use the customary defaults.
    Use `NnConfig.for_case` for the presets tuned to the linear and nonlinear datasets.
    """

    hidden_layers: tuple[int, ...] = (4, 4)
    epochs: int = 4000
    batch_size: int = 256
    learning_rate: float = 0.01
    lr_decay: float = 0.95
    decay_every: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if not self.hidden_layers or any(size < 1 for size in self.hidden_layers):
            msg = f"hidden_layers must be positive sizes, got {self.hidden_layers}"
            raise ParameterError(msg)
        if self.epochs < 0 or self.batch_size < 1 or self.decay_every < 1:
            msg = "epochs must be non-negative, batch_size and decay_every positive"
            raise ParameterError(msg)
        if self.learning_rate <= 0 or not (0 < self.lr_decay <= 1):
            msg = "learning_rate must be positive and lr_decay in (0, 1]"
            raise ParameterError(msg)
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1) or self.eps <= 0:
            msg = "Adam needs beta1, beta2 in [0, 1) and a positive eps"
            raise ParameterError(msg)

    @classmethod
    def for_case(cls, case: Literal["linear", "nonlinear"], **overrides: Any) -> NnConfig:
        if case == "linear":
            preset = {"hidden_layers": (4, 4), "epochs": 4000, "lr_decay": 0.95}
        elif case == "nonlinear":
            preset = {"hidden_layers": (11, 11), "epochs": 8000, "lr_decay": 0.975}
        else:
            msg = f"Unknown case {case!r}"
            raise ParameterError(msg)
        return cls(**{**preset, **overrides})


@dataclasses.dataclass(frozen=True)
class GaConfig:
    """
    Genetic algorithm over edge-indicator genomes.

    Each generation keeps the `elite_count` best individuals; the remaining slots are filled with children, a
    `crossover_fraction` of them by uniform crossover and the rest by bit-flip mutation (rate 1 / n_e^max unless
    `mutation_rate` is set). The search stops when the best objective has not improved by more than `objective_tol`
    for `stall_generations` generations, or after `max_generations`.

    `constraint_tol` only matters for penalty-style constraints; the default repair keeps every genome feasible.
    """

    population_size: int = 200
    elite_count: int = 140
    crossover_fraction: float = 0.5
    stall_generations: int = 200
    objective_tol: float = 1e-8
    constraint_tol: float = 1e-4
    max_generations: int = 2000
    mutation_rate: float | None = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.population_size < 1:
            msg = f"population_size must be positive, got {self.population_size}"
            raise ParameterError(msg)
        if not (0 <= self.elite_count < self.population_size):
            msg = f"elite_count must be in [0, population_size), got {self.elite_count}"
            raise ParameterError(msg)
        if not (0.0 <= self.crossover_fraction <= 1.0):
            msg = f"crossover_fraction must be in [0, 1], got {self.crossover_fraction}"
            raise ParameterError(msg)
        if self.mutation_rate is not None and not (0.0 < self.mutation_rate <= 1.0):
            msg = f"mutation_rate must be in (0, 1], got {self.mutation_rate}"
            raise ParameterError(msg)
        if self.stall_generations < 1 or self.max_generations < 0 or self.workers < 1:
            msg = "stall_generations and workers must be positive, max_generations non-negative"
            raise ParameterError(msg)


@dataclasses.dataclass(frozen=True)
class StrategyConfig:
    """
    Which design strategy to run and its parameters.

    `alpha` is the weight exponent of A and AN; `p` is the selected fraction of BWNE (default 0.1) and of PF / DPF
    (default 0.04); `n_e_out` is the number of edges of the designed graph. NNGA additionally uses `nn` and `ga`.
    """

    name: str
    n_e_out: int
    alpha: float = 3.0
    p: float | None = None
    nn: NnConfig | None = None
    ga: GaConfig | None = None

    def __post_init__(self):
        if self.name not in STRATEGY_NAMES:
            msg = f"Unknown strategy {self.name!r}, expected one of {', '.join(STRATEGY_NAMES)}"
            raise ParameterError(msg)
        if self.p is None:
            object.__setattr__(self, "p", _DEFAULT_FRACTION.get(self.name, 0.1))
        if self.alpha <= 0:
            msg = f"alpha must be positive, got {self.alpha}"
            raise ParameterError(msg)
        if not (0 < self.p <= 1):
            msg = f"p must be in (0, 1], got {self.p}"
            raise ParameterError(msg)
        if self.n_e_out < 1:
            msg = f"n_e_out must be positive, got {self.n_e_out}"
            raise ParameterError(msg)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)
