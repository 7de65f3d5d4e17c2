import numpy as np
import pytest

from netdesign import (
    DomainError,
    Graph,
    MemoizedMetrics,
    MetricMemoConfig,
    extract_features,
    feature_length,
    feature_matrix,
    feature_names,
    generate,
    spectrum,
)


class TestFeatures:
    def test_layout(self):
        graph = generate("scale_free", 6, rng=4)

        features = extract_features(graph)
        named = dict(zip(feature_names(6), features))

        assert features.shape == (feature_length(6),) == (15 + 18 + 8,)
        assert len(feature_names(6)) == feature_length(6)
        assert features[:15].tolist() == graph.indicator().astype(float).tolist()
        assert named["n_e"] == graph.n_e
        assert named["lambda_2"] == pytest.approx(spectrum(graph)[1])
        assert named["lambda_n"] == pytest.approx(spectrum(graph)[-1])
        assert named["edge_0_1"] == float(graph.has_edge(0, 1))

    def test_star(self):
        named = dict(zip(feature_names(5), extract_features(generate("star", 5))))

        assert named["d_hat_0"] == pytest.approx(0.6)
        assert named["d_hat_1"] == pytest.approx(-0.15)
        assert named["var_hat_d"] == pytest.approx(0.6)
        assert named["global_clustering"] == 0.0
        assert named["avg_shortest_path"] == pytest.approx(1.6)
        assert named["diameter"] == 2

    def test_labeled(self):
        star = generate("star", 5)
        relabeled = star.relabel([2, 0, 1, 3, 4])

        first, second = extract_features(star), extract_features(relabeled)

        assert not np.allclose(first, second)
        assert sorted(first) == pytest.approx(sorted(second))

    def test_disconnected(self):
        with pytest.raises(DomainError):
            extract_features(Graph(4, ((0, 1), (2, 3))))


class TestFeatureMatrix:
    def test_memoized(self):
        graphs = [generate("ring", 6), generate("path", 6), generate("ring", 6)]
        memo = MemoizedMetrics(MetricMemoConfig("features", extract_features))

        matrix = feature_matrix(graphs, memo)

        assert matrix.shape == (3, feature_length(6))
        assert np.array_equal(matrix, feature_matrix(graphs))
        assert len(memo.memoized_values["features"]) == 2

    def test_empty(self):
        assert feature_matrix([]).shape == (0, 0)
