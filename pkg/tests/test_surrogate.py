import math

import numpy as np
import pytest
from dirty_equals import IsPartialDict

from netdesign import (
    ParameterError,
    SurrogateNet,
    TrainingError,
    extract_features,
    generate,
    load_net,
    loss_and_gradients,
    predict,
    save_net,
    train_surrogate,
)
from tests.factories import NnConfigFactory


@pytest.fixture
def regression() -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(0)
    features = rng.normal(size=(64, 5))
    targets = 0.5 + 0.3 * np.tanh(features @ np.array([1.0, -0.5, 0.0, 0.25, 0.0]))
    return features, targets


class TestLossAndGradients:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        net = SurrogateNet.initialize((3, 4, 2, 1), rng)
        inputs = rng.normal(size=(7, 3))
        targets = rng.normal(size=7)

        _, grad_weights, grad_biases = loss_and_gradients(net.weights, net.biases, inputs, targets)

        step = 1e-6
        for params, grads in ((net.weights, grad_weights), (net.biases, grad_biases)):
            for param, grad in zip(params, grads):
                numeric = np.zeros_like(param)
                for index in np.ndindex(param.shape):
                    original = param[index]
                    param[index] = original + step
                    plus, _, _ = loss_and_gradients(net.weights, net.biases, inputs, targets)
                    param[index] = original - step
                    minus, _, _ = loss_and_gradients(net.weights, net.biases, inputs, targets)
                    param[index] = original
                    numeric[index] = (plus - minus) / (2 * step)
                assert np.allclose(grad, numeric, atol=1e-6)

    def test_loss(self):
        net = SurrogateNet.initialize((2, 1), np.random.default_rng(0))
        net.weights[0][:] = 0.0
        net.biases[0][:] = 1.0

        loss, _, _ = loss_and_gradients(net.weights, net.biases, np.zeros((2, 2)), np.array([0.0, 3.0]))

        assert loss == pytest.approx((1.0 + 4.0) / 2)


class TestTraining:
    def test_loss_decreases(self, regression):
        features, targets = regression

        result = train_surrogate(features, targets, NnConfigFactory())

        assert len(result.loss_trace) == 200
        assert result.final_loss < result.loss_trace[0]
        assert result.final_loss < np.var(targets)

    def test_seeded(self, regression):
        features, targets = regression
        config = NnConfigFactory(epochs=20)

        first = train_surrogate(features, targets, config).net
        second = train_surrogate(features, targets, config).net

        assert all(np.array_equal(a, b) for a, b in zip(first.weights, second.weights))

    def test_constant_feature(self, regression):
        features, targets = regression
        features[:, 2] = 4.0

        net = train_surrogate(features, targets, NnConfigFactory(epochs=5)).net

        assert net.feature_std[2] == 1.0
        assert np.all(np.isfinite(net.predict_features(features)))

    def test_non_finite_loss(self, regression):
        features, targets = regression
        targets[3] = math.nan

        with pytest.raises(TrainingError, match="non-finite at epoch 0") as exc_info:
            train_surrogate(features, targets, NnConfigFactory())

        assert exc_info.value.epoch == 0
        assert len(exc_info.value.loss_trace) == 1

    def test_invalid(self):
        with pytest.raises(ParameterError, match="one target per sample"):
            train_surrogate(np.zeros((3, 2)), np.zeros(2))


class TestNet:
    @pytest.fixture
    def net(self) -> SurrogateNet:
        graphs = [generate("random_edges", 6, seed, e=9) for seed in range(12)]
        graphs = [graph for graph in graphs if graph.degrees().min() > 0]
        features = np.stack([extract_features(graph) for graph in graphs])
        targets = np.linspace(0, 1, len(graphs))
        return train_surrogate(features, targets, NnConfigFactory(epochs=10), n_v=6).net

    def test_predict(self, net: SurrogateNet):
        ring = generate("ring", 6)

        assert predict(net, ring) == pytest.approx(net.predict_features(extract_features(ring))[0])

        with pytest.raises(ParameterError, match="trained on graphs with 6 vertices"):
            predict(net, generate("ring", 7))
        with pytest.raises(ParameterError, match="takes 41 features"):
            net.predict_features(np.zeros(40))

    def test_save_load(self, net: SurrogateNet, tmp_path):
        path = tmp_path / "net.json"

        save_net(net, path)
        loaded = load_net(path)

        ring = generate("ring", 6)
        assert predict(loaded, ring) == predict(net, ring)
        assert loaded.config == net.config
        assert net.to_dict() == IsPartialDict(schema_version=1, feature_schema_version=1, layer_sizes=[41, 4, 1])

    def test_schema_version(self, net: SurrogateNet):
        with pytest.raises(ParameterError, match="Unsupported net schema version"):
            SurrogateNet.from_dict({**net.to_dict(), "schema_version": 99})
