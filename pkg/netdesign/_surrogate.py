from __future__ import annotations

__all__ = [
    "SurrogateNet",
    "TrainingResult",
    "load_net",
    "loss_and_gradients",
    "predict",
    "save_net",
    "train_surrogate",
]

import dataclasses
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from ._config import NnConfig
from ._exceptions import ParameterError, TrainingError
from ._features import FEATURE_SCHEMA_VERSION, extract_features
from ._graph import Graph

logger = logging.getLogger(__name__)

NET_SCHEMA_VERSION = 1


def loss_and_gradients(
    weights: list[np.ndarray], biases: list[np.ndarray], inputs: np.ndarray, targets: np.ndarray
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """
    Mean squared error of a tanh network with a linear output layer, and its gradients by backpropagation.

    ``weights[l]`` has shape (out, in) and ``biases[l]`` shape (out,); ``inputs`` holds one sample per row.
    """
    activations = [inputs]
    for layer, (weight, bias) in enumerate(zip(weights, biases)):
        z = activations[-1] @ weight.T + bias
        activations.append(z if layer == len(weights) - 1 else np.tanh(z))

    outputs = activations[-1][:, 0]
    residual = outputs - targets
    loss = float(np.mean(residual**2))

    grad_weights: list[np.ndarray] = [np.empty(0)] * len(weights)
    grad_biases: list[np.ndarray] = [np.empty(0)] * len(biases)
    delta = (2.0 / len(targets)) * residual[:, np.newaxis]
    for layer in reversed(range(len(weights))):
        grad_weights[layer] = delta.T @ activations[layer]
        grad_biases[layer] = delta.sum(axis=0)
        if layer:
            delta = (delta @ weights[layer]) * (1.0 - activations[layer] ** 2)

    return loss, grad_weights, grad_biases


@dataclasses.dataclass
class SurrogateNet:
    """
    Feedforward regression network approximating J from a graph's feature vector.

    Inputs are standardized with the training-set ``feature_mean`` / ``feature_std`` stored with the net (constant
    features get a unit std). Hidden layers use tanh, the output is linear and never clamped.
    """

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    feature_mean: np.ndarray
    feature_std: np.ndarray
    n_v: int | None = None
    config: NnConfig | None = None

    @classmethod
    def initialize(cls, layer_sizes: tuple[int, ...], rng: np.random.Generator, **kwargs: Any) -> SurrogateNet:
        """Weights uniform in +-1 / sqrt(fan_in), zero biases."""
        weights = []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            bound = 1.0 / math.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases = [np.zeros(size) for size in layer_sizes[1:]]
        return cls(
            layer_sizes=tuple(layer_sizes),
            weights=weights,
            biases=biases,
            feature_mean=kwargs.pop("feature_mean", np.zeros(layer_sizes[0])),
            feature_std=kwargs.pop("feature_std", np.ones(layer_sizes[0])),
            **kwargs,
        )

    def standardize(self, features: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(features) - self.feature_mean) / self.feature_std

    def predict_features(self, features: np.ndarray) -> np.ndarray:
        features = np.atleast_2d(np.asarray(features, dtype=float))
        if features.shape[1] != self.layer_sizes[0]:
            msg = f"The net takes {self.layer_sizes[0]} features, got {features.shape[1]}"
            raise ParameterError(msg)
        a = self.standardize(features)
        for layer, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            a = a @ weight.T + bias
            if layer < len(self.weights) - 1:
                a = np.tanh(a)
        return a[:, 0]

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": NET_SCHEMA_VERSION,
            "feature_schema_version": FEATURE_SCHEMA_VERSION,
            "layer_sizes": list(self.layer_sizes),
            "weights": [weight.tolist() for weight in self.weights],
            "biases": [bias.tolist() for bias in self.biases],
            "feature_mean": self.feature_mean.tolist(),
            "feature_std": self.feature_std.tolist(),
            "n_v": self.n_v,
            "config": dataclasses.asdict(self.config) if self.config is not None else None,
            "init": "uniform_fan_in",
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SurrogateNet:
        if data.get("schema_version") != NET_SCHEMA_VERSION:
            msg = f"Unsupported net schema version {data.get('schema_version')!r}"
            raise ParameterError(msg)
        config = data.get("config")
        if config is not None:
            config = NnConfig(**{**config, "hidden_layers": tuple(config["hidden_layers"])})
        return cls(
            layer_sizes=tuple(data["layer_sizes"]),
            weights=[np.array(weight, dtype=float) for weight in data["weights"]],
            biases=[np.array(bias, dtype=float) for bias in data["biases"]],
            feature_mean=np.array(data["feature_mean"], dtype=float),
            feature_std=np.array(data["feature_std"], dtype=float),
            n_v=data.get("n_v"),
            config=config,
        )


@dataclasses.dataclass(frozen=True)
class TrainingResult:
    net: SurrogateNet
    final_loss: float
    loss_trace: tuple[float, ...]  # mean mini-batch loss of every epoch


def train_surrogate(
    features: np.ndarray, targets: np.ndarray, config: NnConfig | None = None, n_v: int | None = None
) -> TrainingResult:
    """
    Fits a surrogate net to (feature vector, J) pairs by mini-batch Adam on the mean squared error.

    The learning rate is multiplied by ``config.lr_decay`` every ``config.decay_every`` epochs. Mini-batch order and
    initial weights derive from ``config.seed`` only.
    """
    config = config or NnConfig()
    features = np.atleast_2d(np.asarray(features, dtype=float))
    targets = np.asarray(targets, dtype=float).ravel()
    if features.shape[0] < 1 or features.shape[0] != targets.size:
        msg = f"Need at least one sample and one target per sample, got {features.shape[0]} and {targets.size}"
        raise ParameterError(msg)

    rng = np.random.default_rng(config.seed)
    feature_mean = features.mean(axis=0)
    feature_std = features.std(axis=0)
    feature_std[feature_std == 0.0] = 1.0

    net = SurrogateNet.initialize(
        (features.shape[1], *config.hidden_layers, 1),
        rng,
        feature_mean=feature_mean,
        feature_std=feature_std,
        n_v=n_v,
        config=config,
    )
    inputs = net.standardize(features)

    params = [*net.weights, *net.biases]
    first_moment = [np.zeros_like(param) for param in params]
    second_moment = [np.zeros_like(param) for param in params]
    step = 0
    loss_trace: list[float] = []

    for epoch in range(config.epochs):
        learning_rate = config.learning_rate * config.lr_decay ** (epoch // config.decay_every)
        if epoch % config.decay_every == 0:
            logger.debug("Epoch %d: learning rate %.3g", epoch, learning_rate)

        order = rng.permutation(targets.size)
        batch_losses = []
        for start in range(0, targets.size, config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grad_weights, grad_biases = loss_and_gradients(net.weights, net.biases, inputs[batch], targets[batch])
            batch_losses.append(loss)

            step += 1
            for param, grad, m, v in zip(params, [*grad_weights, *grad_biases], first_moment, second_moment):
                m *= config.beta1
                m += (1.0 - config.beta1) * grad
                v *= config.beta2
                v += (1.0 - config.beta2) * grad**2
                m_hat = m / (1.0 - config.beta1**step)
                v_hat = v / (1.0 - config.beta2**step)
                param -= learning_rate * m_hat / (np.sqrt(v_hat) + config.eps)

        epoch_loss = float(np.mean(batch_losses))
        loss_trace.append(epoch_loss)
        if not math.isfinite(epoch_loss):
            msg = f"Training loss became non-finite at epoch {epoch}"
            raise TrainingError(msg, epoch=epoch, loss_trace=loss_trace)

    final_loss, _, _ = loss_and_gradients(net.weights, net.biases, inputs, targets)
    if not math.isfinite(final_loss):
        msg = "Training loss became non-finite"
        raise TrainingError(msg, epoch=config.epochs, loss_trace=loss_trace)
    logger.debug("Trained surrogate %s: final loss %.3g", net.layer_sizes, final_loss)
    return TrainingResult(net=net, final_loss=final_loss, loss_trace=tuple(loss_trace))


def predict(net: SurrogateNet, graph: Graph) -> float:
    if net.n_v is not None and graph.n_v != net.n_v:
        msg = f"The net was trained on graphs with {net.n_v} vertices, got {graph.n_v}"
        raise ParameterError(msg)
    return float(net.predict_features(extract_features(graph))[0])


def save_net(net: SurrogateNet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(net.to_dict()) + "\n", encoding="utf-8")


def load_net(path: str | Path) -> SurrogateNet:
    return SurrogateNet.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
