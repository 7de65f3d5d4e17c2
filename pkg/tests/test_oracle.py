import itertools

import pytest

from netdesign import (
    Graph,
    OptimizerError,
    ParameterError,
    connected_graph_count,
    eigenratio_objective,
    enumerate_connected_graphs,
    exhaustive_optimum,
    generate,
    linear_objective,
    oracle_optimum,
)
from tests.factories import GaConfigFactory, LinearDynamicsFactory, NonlinearDynamicsFactory


class TestEnumeration:
    @pytest.mark.parametrize("n_v", [1, 2, 3, 4, 5])
    def test_counts(self, n_v):
        graphs = list(enumerate_connected_graphs(n_v))

        assert len(graphs) == len(set(graphs)) == connected_graph_count(n_v)

    def test_order(self):
        graphs = list(enumerate_connected_graphs(4))

        assert graphs[0] == Graph(4, ((0, 1), (0, 2), (0, 3)))
        assert graphs[-1] == generate("complete", 4)
        edge_counts = [graph.n_e for graph in graphs]
        assert edge_counts == sorted(edge_counts)

    def test_edge_limit(self):
        trees = list(enumerate_connected_graphs(4, max_edge_count=3))

        assert len(trees) == 16

    def test_too_large(self):
        with pytest.raises(ParameterError, match=r"1\.\.6 vertices"):
            next(enumerate_connected_graphs(7))


class TestExhaustiveOptimum:
    def test_first_graph_wins_ties(self):
        graph, value = exhaustive_optimum(lambda graph: 0.0, 4, 6)

        assert graph == Graph(4, ((0, 1), (0, 2), (0, 3)))
        assert value == 0.0

    def test_eigenratio(self):
        graph, value = exhaustive_optimum(eigenratio_objective, 5, 10)

        assert graph == generate("complete", 5)
        assert value == pytest.approx(-1.0)

    def test_no_candidate(self):
        with pytest.raises(OptimizerError, match="at most 3 edges"):
            exhaustive_optimum(eigenratio_objective, 5, 3)


class TestOracleOptimum:
    def test_exhaustive_linear(self):
        dynamics = LinearDynamicsFactory(n_v=5)

        result = oracle_optimum(dynamics, 7, exhaustive=True)

        assert result.method == "exhaustive"
        assert result.objective == "J"
        assert result.graph.n_e <= 7
        best = max(
            linear_objective(dynamics, graph).J
            for graph in itertools.takewhile(lambda graph: graph.n_e <= 7, enumerate_connected_graphs(5))
        )
        assert result.J == pytest.approx(best)

    def test_genetic_matches_exhaustive(self):
        dynamics = LinearDynamicsFactory(n_v=5)

        exhaustive = oracle_optimum(dynamics, 6, objective_name="negQ", exhaustive=True)
        genetic = oracle_optimum(dynamics, 6, objective_name="negQ", ga_config=GaConfigFactory(seed=1))

        assert genetic.method == "genetic"
        assert eigenratio_objective(genetic.graph) == pytest.approx(eigenratio_objective(exhaustive.graph))
        # J is always the true synchronization objective of the graph found
        assert genetic.J == pytest.approx(linear_objective(dynamics, genetic.graph).J)

    def test_nonlinear(self):
        dynamics = NonlinearDynamicsFactory(n_v=5, t_max=0.2)

        result = oracle_optimum(dynamics, 10, ga_config=GaConfigFactory(max_generations=3))

        assert 0.0 <= result.J <= 1.0
        assert result.graph.n_v == 5

    def test_unknown_objective(self):
        with pytest.raises(ParameterError, match="Unknown oracle objective"):
            oracle_optimum(LinearDynamicsFactory(n_v=5), 6, objective_name="Q")
