from __future__ import annotations

__all__ = ["GaResult", "ga_optimize"]

import dataclasses
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np

from ._config import GaConfig, MetricMemoConfig
from ._exceptions import OptimizerError, ParameterError
from ._graph import Graph, is_connected, max_edges
from ._memo import MemoizedMetrics
from ._repair import cap_and_connect

logger = logging.getLogger(__name__)

TOURNAMENT_SIZE = 2


@dataclasses.dataclass(frozen=True)
class GaResult:
    graph: Graph
    objective: float
    generations: int
    history: tuple[float, ...]  # best objective so far, after initialization and after every generation
    stop_reason: Literal["stall", "max_generations"]


class _Population:
    def __init__(self, n_v: int, objective: Callable[[Graph], float], config: GaConfig):
        self.n_v = n_v
        self.config = config
        self.memo = MemoizedMetrics(MetricMemoConfig("fitness", objective, lru_cache_size=50_000))
        self.executor = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None

    def evaluate(self, genomes: np.ndarray) -> np.ndarray:
        graphs = [Graph.from_indicator(self.n_v, genome) for genome in genomes]
        map_fn = self.executor.map if self.executor is not None else map
        values = np.array(self.memo.process_chunk(graphs, ["fitness"], map_fn=map_fn)["fitness"], dtype=float)
        values[np.isnan(values)] = -math.inf
        return values

    def close(self) -> None:
        if self.executor is not None:
            self.executor.shutdown()


def _tournament(fitness: np.ndarray, rng: np.random.Generator) -> int:
    contestants = rng.integers(len(fitness), size=TOURNAMENT_SIZE)
    best = fitness[contestants].max()
    return int(contestants[fitness[contestants] == best][0])


def _random_genome(n_v: int, n_e_star: int, rng: np.random.Generator) -> np.ndarray:
    genome = np.zeros(max_edges(n_v), dtype=bool)
    n_e = int(rng.integers(n_v - 1, n_e_star + 1))
    genome[rng.choice(genome.size, size=n_e, replace=False)] = True
    return genome


def ga_optimize(
    objective: Callable[[Graph], float],
    n_v: int,
    n_e_star: int,
    config: GaConfig | None = None,
    initial: Sequence[Graph] = (),
    edge_scores: np.ndarray | None = None,
) -> GaResult:
    """
    Maximizes ``objective`` over connected graphs on n_v vertices with at most ``n_e_star`` edges.

    Genomes are edge indicator vectors in lexicographic pair order. Infeasible genomes are repaired (the edges with
    the lowest ``edge_scores`` dropped down to the cap, random ones without scores, then random component-joining
    edges added), so every individual is feasible and the objective is only ever evaluated on connected graphs.
    ``initial`` graphs seed the first population (repaired if needed), the rest is random. Objective values are
    memoized per graph.
    """
    config = config or GaConfig()
    if n_v < 2:
        msg = f"The genetic algorithm needs at least two vertices, got {n_v}"
        raise ParameterError(msg)
    if not (n_v - 1 <= n_e_star <= max_edges(n_v)):
        msg = f"n_e_star must be in [{n_v - 1}, {max_edges(n_v)}] for a connected graph, got {n_e_star}"
        raise ParameterError(msg)

    rng = np.random.default_rng(config.seed)
    mutation_rate = config.mutation_rate or 1.0 / max_edges(n_v)
    genome_length = max_edges(n_v)

    seeds = [graph.indicator() for graph in list(initial)[: config.population_size]]
    genomes = [*seeds, *(_random_genome(n_v, n_e_star, rng) for _ in range(config.population_size - len(seeds)))]
    population = np.array([cap_and_connect(genome, n_v, n_e_star, rng, edge_scores) for genome in genomes])

    evaluator = _Population(n_v, objective, config)
    try:
        fitness = evaluator.evaluate(population)
        if not np.isfinite(fitness).any():
            msg = "No individual of the initial population has a finite objective"
            raise OptimizerError(msg)

        best_index = int(np.argmax(fitness))
        best_genome, best = population[best_index].copy(), float(fitness[best_index])
        history = [best]
        stall = 0
        generation = 0

        n_children = config.population_size - config.elite_count
        n_crossover = round(config.crossover_fraction * n_children)

        while generation < config.max_generations and stall < config.stall_generations:
            order = np.argsort(-fitness, kind="stable")
            children = []
            for child in range(n_children):
                if child < n_crossover:
                    first = population[_tournament(fitness, rng)]
                    second = population[_tournament(fitness, rng)]
                    genome = np.where(rng.random(genome_length) < 0.5, first, second)
                else:
                    flips = rng.random(genome_length) < mutation_rate
                    if not flips.any():
                        flips[rng.integers(genome_length)] = True
                    genome = population[_tournament(fitness, rng)] ^ flips
                children.append(cap_and_connect(genome, n_v, n_e_star, rng, edge_scores))

            population = np.array([*population[order[: config.elite_count]], *children])
            fitness = evaluator.evaluate(population)
            generation += 1

            generation_best = int(np.argmax(fitness))
            if fitness[generation_best] > best + config.objective_tol:
                stall = 0
            else:
                stall += 1
            if fitness[generation_best] > best:
                best_genome, best = population[generation_best].copy(), float(fitness[generation_best])
            history.append(best)
            logger.debug("Generation %d: best %.6g, stall %d", generation, best, stall)
    finally:
        evaluator.close()

    stop_reason = "stall" if stall >= config.stall_generations else "max_generations"
    logger.info("Genetic algorithm stopped after %d generations (%s), best %.6g", generation, stop_reason, best)

    graph = Graph.from_indicator(n_v, best_genome)
    if not is_connected(graph) or graph.n_e > n_e_star:  # cannot happen: every individual is repaired
        msg = "The best individual violates the constraints"
        raise OptimizerError(msg)
    return GaResult(
        graph=graph, objective=best, generations=generation, history=tuple(history), stop_reason=stop_reason
    )
