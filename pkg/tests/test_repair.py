import numpy as np
import pytest

from netdesign import (
    DomainError,
    Graph,
    ParameterError,
    cap_and_connect,
    is_connected,
    non_bridge_edges,
    repair_connectivity,
)

TWO_TRIANGLES = Graph(6, ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)))


class TestNonBridgeEdges:
    def test_triangle_with_tail(self):
        assert non_bridge_edges(Graph(4, ((0, 1), (0, 2), (1, 2), (2, 3)))) == {(0, 1), (0, 2), (1, 2)}

    def test_tree(self):
        assert non_bridge_edges(Graph(4, ((0, 1), (1, 2), (1, 3)))) == set()


class TestRepairConnectivity:
    def test_swaps_lowest_for_highest(self):
        scores = np.arange(15, dtype=float)

        repaired = Graph.from_indicator(6, repair_connectivity(TWO_TRIANGLES.indicator(), 6, scores))

        # (0, 1) has the lowest score of the cycle edges, (2, 5) the highest of the bridging pairs
        assert repaired.edges == ((0, 2), (1, 2), (2, 5), (3, 4), (3, 5), (4, 5))

    def test_ties(self):
        repaired = Graph.from_indicator(6, repair_connectivity(TWO_TRIANGLES.indicator(), 6, np.zeros(15)))

        assert repaired.edges == ((0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (3, 5))

    def test_several_components(self):
        graph = Graph(7, ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)))

        repaired = Graph.from_indicator(7, repair_connectivity(graph.indicator(), 7, np.zeros(21)))

        assert is_connected(repaired)
        assert repaired.n_e == 6

    def test_connected_unchanged(self):
        ring = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))

        assert repair_connectivity(ring.indicator(), 4, np.zeros(6)).tolist() == ring.indicator().tolist()

    def test_forest(self):
        with pytest.raises(DomainError, match="Cannot connect a forest"):
            repair_connectivity(Graph(4, ((0, 1), (2, 3))).indicator(), 4, np.zeros(6))


class TestCapAndConnect:
    @pytest.mark.parametrize("seed", range(10))
    def test_feasible(self, seed):
        rng = np.random.default_rng(seed)
        indicator = rng.random(28) < 0.3

        repaired = Graph.from_indicator(8, cap_and_connect(indicator, 8, 9, rng))

        assert is_connected(repaired)
        assert repaired.n_e <= 9

    def test_keeps_feasible_input(self):
        ring = Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)))

        assert Graph.from_indicator(5, cap_and_connect(ring.indicator(), 5, 7, np.random.default_rng(0))) == ring

    def test_seeded(self):
        indicator = np.zeros(28, dtype=bool)

        first = cap_and_connect(indicator, 8, 7, np.random.default_rng(3))
        second = cap_and_connect(indicator, 8, 7, np.random.default_rng(3))

        assert first.tolist() == second.tolist()
        assert first.sum() == 7

    def test_cap_too_small(self):
        with pytest.raises(DomainError, match="at least 4 edges"):
            cap_and_connect(np.ones(10, dtype=bool), 5, 3, np.random.default_rng(0))

    def test_drops_lowest_scores(self):
        ring = Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)))
        scores = np.ones(10)
        scores[ring.indicator()] = 10.0
        scores[Graph(5, ((0, 2),)).indicator()] = 5.0

        repaired = cap_and_connect(np.ones(10, dtype=bool), 5, 6, np.random.default_rng(0), scores)

        assert Graph.from_indicator(5, repaired).edges == ((0, 1), (0, 2), (0, 4), (1, 2), (2, 3), (3, 4))

    @pytest.mark.parametrize("seed", range(5))
    def test_ties_broken_at_random(self, seed):
        # the star edges outscore everything else, the other pairs tie
        star = Graph(6, tuple((0, j) for j in range(1, 6)))
        scores = np.where(star.indicator(), 2.0, 1.0)

        rng = np.random.default_rng(seed)

        repaired = Graph.from_indicator(6, cap_and_connect(np.ones(15, dtype=bool), 6, 7, rng, scores))

        assert set(star.edges) <= set(repaired.edges)
        assert repaired.n_e == 7

    def test_score_shape(self):
        with pytest.raises(ParameterError, match="one score per vertex pair"):
            cap_and_connect(np.ones(10, dtype=bool), 5, 6, np.random.default_rng(0), np.ones(9))
