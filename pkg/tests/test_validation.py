import pytest

from netdesign import ParameterError, StrategyConfig, best_data_sample, linear_objective, validate_strategies
from tests.factories import dataset_of


class TestBestDataSample:
    def test_edge_cap(self):
        dataset = dataset_of([(4, 0.2), (6, 0.9), (5, 0.4), (5, 0.4)])

        assert best_data_sample(dataset, 5) is dataset.samples[2]
        assert best_data_sample(dataset, 6) is dataset.samples[1]
        assert best_data_sample(dataset, 3) is None


class TestValidateStrategies:
    @pytest.fixture
    def strategies(self) -> list[StrategyConfig]:
        return [StrategyConfig("A", 8), StrategyConfig("PF", 8)]

    def test_rows(self, linear_dataset, strategies):
        rows = validate_strategies(linear_dataset, linear_dataset.secrets, strategies)

        assert [(row.iteration, row.strategy) for row in rows] == [(0, "A"), (0, "PF"), (1, "A"), (1, "PF")]
        for row in rows:
            dynamics = linear_dataset.secrets.for_iteration(row.iteration)
            assert row.J == pytest.approx(linear_objective(dynamics, row.outcome.graph).J)
            assert row.outcome.J == row.J
            assert row.J_star is None
            best = best_data_sample(linear_dataset.iteration(row.iteration), 8)
            assert row.best_data_sample_J == best.J

    def test_selected_iterations_and_oracle(self, linear_dataset, strategies):
        rows = validate_strategies(
            linear_dataset, linear_dataset.secrets, strategies[:1], iterations=[1], oracle={1: 0.75}
        )

        assert len(rows) == 1
        assert rows[0].iteration == 1
        assert rows[0].J_star == 0.75

    def test_missing_iteration(self, linear_dataset, strategies):
        with pytest.raises(ParameterError, match="no samples for iteration 5"):
            validate_strategies(linear_dataset, linear_dataset.secrets, strategies, iterations=[5])
