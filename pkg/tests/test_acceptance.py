import dataclasses

import numpy as np
import pytest

from netdesign import (
    LinearDynamics,
    StrategyConfig,
    degree_stats,
    eigenratio_objective,
    entangled_report,
    exhaustive_optimum,
    ga_optimize,
    generate,
    generate_dataset,
    linear_objective,
    resolve_spec,
    save_dataset,
    structural_stats,
    validate_strategies,
)
from tests.factories import GaConfigFactory

pytestmark = pytest.mark.slow


def random_connected_graph(n_v: int, rng: np.random.Generator):
    # Barabasi-Albert graphs are connected by construction
    return generate("scale_free", n_v, rng, m=int(rng.integers(1, n_v)))


class TestLinearObjective:
    def test_rate_bounds(self):
        rng = np.random.default_rng(2024)

        for _ in range(1000):
            n_v = int(rng.integers(2, 21))
            dynamics = LinearDynamics(a=tuple(-rng.uniform(0.1, 20.0, n_v)))
            result = linear_objective(dynamics, random_connected_graph(n_v, rng))

            assert result.beta <= result.lambda_c + 1e-9
            assert result.lambda_c <= result.lambda_u + 1e-9
            assert result.lambda_u < 0
            assert 0.0 <= result.J <= 1.0

    def test_homogeneous_nodes_never_gain(self):
        rng = np.random.default_rng(7)

        for _ in range(100):
            n_v = int(rng.integers(2, 21))
            dynamics = LinearDynamics(a=(-float(rng.uniform(0.1, 20.0)),) * n_v)

            assert linear_objective(dynamics, random_connected_graph(n_v, rng)).J == pytest.approx(0.0, abs=1e-12)


class TestGeneticOptimum:
    def test_matches_exhaustive_search(self):
        dynamics = LinearDynamics(a=(-1.0, -2.0, -3.0, -4.0, -5.0))

        def objective(graph):
            return linear_objective(dynamics, graph).J

        _, best = exhaustive_optimum(objective, 5, 6)
        found = [ga_optimize(objective, 5, 6, GaConfigFactory(seed=seed)).objective for seed in range(20)]

        assert sum(abs(value - best) <= 1e-12 for value in found) >= 19

    def test_eigenratio_optimum_is_disentangled(self):
        results = [
            ga_optimize(eigenratio_objective, 10, 20, GaConfigFactory(seed=seed, max_generations=500)).graph
            for seed in range(5)
        ]

        good = [
            graph
            for graph in results
            if degree_stats(graph).norm_var <= 0.05 and structural_stats(graph).girth >= 3
        ]
        assert len(good) >= 4


class TestBenchmarkDatasets:
    @pytest.fixture(scope="class")
    def middle_linear(self):
        return generate_dataset(resolve_spec("D_middle_l"), threads=4)

    @pytest.fixture(scope="class")
    def middle_nonlinear(self):
        return generate_dataset(resolve_spec("D_middle_nl"), threads=4)

    def test_linear_correlations(self, middle_linear):
        report = entangled_report(middle_linear)

        correlations = [report.corr_var_d_J, report.corr_var_b_J, report.corr_var_d_neg_Q, report.corr_var_b_neg_Q]
        assert all(value < 0 for value in correlations)
        assert correlations == pytest.approx([-0.430, -0.590, -0.181, -0.559], abs=0.2)

    def test_slow_nodes_want_large_degrees(self, middle_linear):
        assert entangled_report(middle_linear).index_corr_degree > 0.5

    def test_nonlinear_correlations(self, middle_nonlinear):
        report = entangled_report(middle_nonlinear)

        correlations = [report.corr_var_d_J, report.corr_var_b_J, report.corr_var_d_neg_Q, report.corr_var_b_neg_Q]
        assert all(value < 0 for value in correlations)
        assert correlations == pytest.approx([-0.260, -0.505, -0.088, -0.578], abs=0.2)

    def test_deterministic(self, middle_linear, tmp_path):
        save_dataset(middle_linear, tmp_path / "first.jsonl")
        save_dataset(generate_dataset(resolve_spec("D_middle_l"), threads=1), tmp_path / "second.jsonl")

        assert (tmp_path / "first.jsonl").read_bytes() == (tmp_path / "second.jsonl").read_bytes()


class TestStrategyRanking:
    def test_large_nonlinear(self):
        spec = resolve_spec("D_large_nl")
        dataset = generate_dataset(spec, threads=4)
        strategies = [StrategyConfig(name, spec.n_e_star) for name in ("A", "AN", "PF", "NNGA")]

        rows = validate_strategies(dataset, dataset.secrets, strategies)

        mean_J = {
            config.name: np.mean([row.J for row in rows if row.strategy == config.name]) for config in strategies
        }
        best_data_sample = np.mean([row.best_data_sample_J for row in rows if row.strategy == "PF"])
        assert mean_J["PF"] >= best_data_sample
        assert mean_J["NNGA"] >= best_data_sample
        assert mean_J["A"] < mean_J["PF"]
        assert mean_J["AN"] < mean_J["PF"]


def test_specs_are_reproducible():
    spec = dataclasses.replace(resolve_spec("D_small_l"), iterations=2)

    assert generate_dataset(spec) == generate_dataset(spec, threads=3)
