import math

import numpy as np
import pytest

from netdesign import GaConfig, Graph, OptimizerError, ParameterError, ga_optimize, generate, is_connected
from tests.factories import GaConfigFactory


def edge_count(graph: Graph) -> float:
    return float(graph.n_e)


class TestGaOptimize:
    def test_fills_the_edge_budget(self):
        result = ga_optimize(edge_count, 6, 9, GaConfigFactory())

        assert result.objective == 9
        assert result.graph.n_e == 9
        assert is_connected(result.graph)

    def test_history(self):
        result = ga_optimize(lambda graph: -float(graph.degrees().max()), 7, 10, GaConfigFactory(stall_generations=5))

        assert len(result.history) == result.generations + 1
        assert all(later >= earlier for earlier, later in zip(result.history, result.history[1:]))
        assert result.history[-1] == result.objective
        assert result.stop_reason == "stall"

    def test_max_generations(self):
        result = ga_optimize(edge_count, 6, 9, GaConfigFactory(max_generations=0))

        assert result.generations == 0
        assert result.stop_reason == "max_generations"
        assert len(result.history) == 1

    def test_seeded(self):
        objective = lambda graph: -float(np.var(graph.degrees()))  # noqa: E731

        first = ga_optimize(objective, 7, 9, GaConfigFactory(seed=4))
        second = ga_optimize(objective, 7, 9, GaConfigFactory(seed=4))
        threaded = ga_optimize(objective, 7, 9, GaConfigFactory(seed=4, workers=3))

        assert first == second == threaded

    def test_initial_population(self):
        complete = generate("complete", 6)

        result = ga_optimize(edge_count, 6, 7, GaConfigFactory(max_generations=0), initial=[complete])

        assert result.graph.n_e <= 7
        assert is_connected(result.graph)

    def test_edge_scores_guide_repair(self):
        star = generate("star", 6, center=0)
        edge_scores = np.where(star.indicator(), 1.0, 0.0)

        result = ga_optimize(
            lambda graph: float(graph.degrees()[0]),
            6,
            7,
            GaConfigFactory(max_generations=0),
            initial=[generate("complete", 6)],
            edge_scores=edge_scores,
        )

        # the complete graph is cut down to the star plus two tied edges
        assert result.objective == 5.0

    def test_nan_objective(self):
        result = ga_optimize(
            lambda graph: math.nan if graph.n_e < 8 else 1.0, 6, 8, GaConfigFactory(max_generations=5)
        )

        assert result.graph.n_e == 8

        with pytest.raises(OptimizerError, match="finite objective"):
            ga_optimize(lambda graph: math.nan, 6, 8, GaConfigFactory())

    @pytest.mark.parametrize(
        ["n_v", "n_e_star", "match"],
        [
            (1, 0, "at least two vertices"),
            (6, 4, r"\[5, 15\]"),
            (6, 16, r"\[5, 15\]"),
        ],
    )
    def test_invalid(self, n_v, n_e_star, match):
        with pytest.raises(ParameterError, match=match):
            ga_optimize(edge_count, n_v, n_e_star, GaConfigFactory())


class TestGaConfig:
    @pytest.mark.parametrize(
        ["params", "match"],
        [
            ({"population_size": 0}, "population_size"),
            ({"population_size": 10, "elite_count": 10}, "elite_count"),
            ({"crossover_fraction": 1.5}, "crossover_fraction"),
            ({"mutation_rate": 0.0}, "mutation_rate"),
            ({"workers": 0}, "workers"),
        ],
    )
    def test_invalid(self, params, match):
        with pytest.raises(ParameterError, match=match):
            GaConfig(**params)
