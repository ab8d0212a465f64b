"""
Fully connected feed-forward network whose parameters are a flat vector.

The vector holds, layer after layer, the row-major (fan_in x fan_out) weight
matrix followed by the fan_out biases.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from app.data.dataset import NEGATIVE, POSITIVE, Dataset
from app.exceptions import ConfigurationError, DimensionError
from app.models.network import WEIGHT_BOUND, NetworkTopology
from app.optim.core import ObjectiveSpec, check_dimension

Layer = Tuple[np.ndarray, np.ndarray]

# keeps saturated outputs strictly inside (0, 1)
OUTPUT_EPS = np.finfo(float).eps


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def sigmoid(z: np.ndarray) -> np.ndarray:
    return np.clip(np.exp(-np.logaddexp(0.0, -z)), OUTPUT_EPS, 1.0 - OUTPUT_EPS)


def unflatten(w: np.ndarray, topo: NetworkTopology) -> List[Layer]:
    w = np.asarray(w, dtype=float)
    check_dimension(w, topo.parameter_count, "weight vector")

    layers = []
    offset = 0
    for fan_in, fan_out in topo.layer_shapes():
        weights = w[offset:offset + fan_in * fan_out].reshape(fan_in, fan_out)
        offset += fan_in * fan_out
        biases = w[offset:offset + fan_out]
        offset += fan_out
        layers.append((weights, biases))
    return layers


def flatten(layers: List[Layer], topo: NetworkTopology) -> np.ndarray:
    shapes = topo.layer_shapes()
    if len(layers) != len(shapes):
        raise DimensionError("layer count does not match the topology", len(shapes), len(layers))

    parts = []
    for (weights, biases), (fan_in, fan_out) in zip(layers, shapes):
        weights = np.asarray(weights, dtype=float)
        biases = np.asarray(biases, dtype=float)
        if weights.shape != (fan_in, fan_out) or biases.shape != (fan_out,):
            raise DimensionError(f"layer shape {weights.shape} does not match ({fan_in}, {fan_out})")
        parts.extend((weights.ravel(), biases))
    return np.concatenate(parts)


def forward(x: np.ndarray, w: np.ndarray, topo: NetworkTopology) -> np.ndarray:
    """
    Forward pass for one sample (returns the output pair) or a batch of rows
    (returns an N x 2 matrix).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    batch = np.atleast_2d(x)
    if batch.shape[1] != topo.input_size:
        raise DimensionError("input has the wrong length", topo.input_size, batch.shape[1])

    layers = unflatten(w, topo)
    activation = batch
    for weights, biases in layers[:-1]:
        activation = relu(activation @ weights + biases)
    weights, biases = layers[-1]
    outputs = sigmoid(activation @ weights + biases)
    return outputs[0] if single else outputs


def one_hot(labels: np.ndarray) -> np.ndarray:
    targets = np.zeros((labels.shape[0], 2))
    targets[np.arange(labels.shape[0]), labels] = 1.0
    return targets


def _require_rows(data: Dataset):
    if len(data) == 0:
        raise ConfigurationError("dataset is empty")


def predict(w: np.ndarray, features: np.ndarray, topo: NetworkTopology) -> np.ndarray:
    outputs = np.atleast_2d(forward(features, w, topo))
    # argmax returns the first maximum, so exact ties go to the negative class
    return np.argmax(outputs, axis=1)


def rmse_loss(w: np.ndarray, data: Dataset, topo: NetworkTopology) -> float:
    _require_rows(data)
    outputs = forward(data.features, w, topo)
    return float(np.sqrt(np.mean((outputs - one_hot(data.labels)) ** 2)))


def accuracy(w: np.ndarray, data: Dataset, topo: NetworkTopology) -> float:
    _require_rows(data)
    return float(np.mean(predict(w, data.features, topo) == data.labels))


@dataclass
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def sensitivity(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def specificity(self) -> float:
        return self.tn / (self.tn + self.fp) if self.tn + self.fp else 0.0


def confusion(w: np.ndarray, data: Dataset, topo: NetworkTopology) -> ConfusionCounts:
    _require_rows(data)
    predicted = predict(w, data.features, topo)
    actual = data.labels
    return ConfusionCounts(
        tp=int(np.sum((predicted == POSITIVE) & (actual == POSITIVE))),
        tn=int(np.sum((predicted == NEGATIVE) & (actual == NEGATIVE))),
        fp=int(np.sum((predicted == POSITIVE) & (actual == NEGATIVE))),
        fn=int(np.sum((predicted == NEGATIVE) & (actual == POSITIVE))),
    )


def as_objective(data: Dataset, topo: NetworkTopology) -> ObjectiveSpec:
    _require_rows(data)
    if data.n_features != topo.input_size:
        raise DimensionError("dataset width does not match the network input", topo.input_size, data.n_features)

    return ObjectiveSpec.box(
        topo.parameter_count,
        -WEIGHT_BOUND,
        WEIGHT_BOUND,
        lambda w: rmse_loss(w, data, topo),
        name=f"dfnn{topo.layer_sizes}",
    )
