from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ._exceptions import DimensionMismatchError, LearningError
from ._layers import Conv2D, Dense, Flatten, Layer, MaxPool2D, ReLU, Sigmoid
from ._stores import read_json, write_json

__all__ = [
    "NetworkSpec",
    "Network",
    "build_mlp",
    "build_cnn",
    "build_network",
    "loss",
    "gradient",
    "DEFAULT_MLP_WIDTHS",
]

logger = logging.getLogger(__name__)

DEFAULT_MLP_WIDTHS: Tuple[int, ...] = (500, 500, 500, 100, 100)


class NetworkSpec(BaseModel):
    """Architecture of one of the two network families.

    An MLP is ``input_dim -> widths... -> 1`` with ReLU hidden layers; zero
    hidden widths is logistic regression. A CNN reads ``channels`` grids of
    side ``grid`` through conv/pool blocks, then one dense ReLU layer.
    """

    kind: Literal["mlp", "cnn"] = "mlp"
    input_dim: int = Field(default=23, ge=1)
    widths: List[int] = Field(default_factory=lambda: list(DEFAULT_MLP_WIDTHS))
    channels: int = Field(default=2, ge=1)
    grid: int = Field(default=21, ge=4)
    conv_channels: List[int] = Field(default_factory=lambda: [8, 16])
    kernel_size: int = Field(default=3, ge=1)
    dense_width: int = Field(default=64, ge=1)
    seed: int = 0
    init_scale: float = Field(default=1.0, gt=0)

    def input_shape(self) -> Tuple[int, ...]:
        if self.kind == "mlp":
            return (self.input_dim,)
        return (self.channels, self.grid, self.grid)

    def dense_widths(self) -> List[int]:
        """Chain n_0, ..., n_{k+1} of the fully connected part"""
        if self.kind == "mlp":
            return [self.input_dim, *self.widths, 1]
        side = self.grid
        for _ in self.conv_channels:
            side //= 2
        flat = self.conv_channels[-1] * side * side if self.conv_channels else self.channels * side * side
        return [flat, self.dense_width, 1]

    def parameter_count(self) -> int:
        n = self.dense_widths()
        total = sum((n[i] + 1) * n[i + 1] for i in range(len(n) - 1))
        if self.kind == "cnn":
            c_in = self.channels
            for c_out in self.conv_channels:
                total += c_out * (c_in * self.kernel_size**2 + 1)
                c_in = c_out
        return total


class Network:
    """Layers composed as E_k . A_k . ... . E_0 . A_0 with a sigmoid output"""

    def __init__(self, spec: NetworkSpec, layers: Sequence[Layer]) -> None:
        self.spec = spec
        self.layers: List[Layer] = list(layers)

    def __repr__(self) -> str:
        return f"Network(kind={self.spec.kind!r}, parameters={self.spec.parameter_count()})"

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        shape = self.spec.input_shape()
        if x.shape == shape:
            x = x[None, ...]
        if x.shape[1:] != shape:
            raise DimensionMismatchError(f"expected input shape {shape}, got {x.shape[1:]}")
        return x

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Scores in (0, 1), one per sample"""
        out = self._check_input(x)
        for layer in self.layers:
            out = layer.forward(out)
        return out[:, 0]

    predict = forward

    def backward(self, grad_out: np.ndarray) -> None:
        grad = np.asarray(grad_out, dtype=np.float64).reshape(-1, 1)
        for layer in reversed(self.layers):
            grad = layer.backward(grad)

    def parameters(self) -> Dict[str, np.ndarray]:
        return {f"{i}.{name}": p for i, layer in enumerate(self.layers) for name, p in layer.params.items()}

    def gradients(self) -> Dict[str, np.ndarray]:
        return {f"{i}.{name}": g for i, layer in enumerate(self.layers) for name, g in layer.grads.items()}

    def copy(self) -> Network:
        clone = build_network(self.spec)
        clone.load_parameters({k: v.copy() for k, v in self.parameters().items()})
        return clone

    def load_parameters(self, params: Mapping[str, np.ndarray]) -> None:
        for i, layer in enumerate(self.layers):
            for name in layer.params:
                key = f"{i}.{name}"
                if key not in params:
                    raise LearningError(f"missing parameter {key}")
                value = np.asarray(params[key], dtype=np.float64)
                if value.shape != layer.params[name].shape:
                    raise DimensionMismatchError(
                        f"parameter {key} has shape {value.shape}, expected {layer.params[name].shape}"
                    )
                layer.params[name] = value.copy()

    def to_dict(self) -> Dict[str, Any]:
        """Spec plus flat parameter arrays; floats survive a JSON round trip exactly"""
        return {
            "spec": self.spec.model_dump(),
            "parameters": {
                key: {"shape": list(p.shape), "values": p.ravel().tolist()}
                for key, p in self.parameters().items()
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Network:
        spec = NetworkSpec.model_validate(data["spec"])
        net = build_network(spec)
        params = {
            key: np.array(entry["values"], dtype=np.float64).reshape(entry["shape"])
            for key, entry in data["parameters"].items()
        }
        net.load_parameters(params)
        return net

    def save(self, path: Union[str, Path], provenance: Optional[Mapping[str, Any]] = None) -> None:
        data = self.to_dict()
        if provenance:
            data["provenance"] = dict(provenance)
        write_json(path, data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> Network:
        data = read_json(path)
        if not isinstance(data, dict):
            raise LearningError(f"model file {path} does not hold a JSON object")
        return cls.from_dict(data)


def build_mlp(
    input_dim: int = 23,
    widths: Sequence[int] = DEFAULT_MLP_WIDTHS,
    *,
    seed: int = 0,
    init_scale: float = 1.0,
) -> Network:
    """ReLU multilayer perceptron with a sigmoid output; no widths = logistic regression"""
    spec = NetworkSpec(kind="mlp", input_dim=input_dim, widths=list(widths), seed=seed, init_scale=init_scale)
    return build_network(spec)


def build_cnn(
    channels: int = 2,
    *,
    grid: int = 21,
    conv_channels: Sequence[int] = (8, 16),
    dense_width: int = 64,
    seed: int = 0,
    init_scale: float = 1.0,
) -> Network:
    spec = NetworkSpec(
        kind="cnn",
        channels=channels,
        grid=grid,
        conv_channels=list(conv_channels),
        dense_width=dense_width,
        seed=seed,
        init_scale=init_scale,
    )
    return build_network(spec)


def build_network(spec: NetworkSpec) -> Network:
    rng = np.random.default_rng(spec.seed)
    layers: List[Layer] = []
    if spec.kind == "cnn":
        c_in = spec.channels
        for c_out in spec.conv_channels:
            layers += [Conv2D(c_in, c_out, spec.kernel_size, rng=rng), ReLU(), MaxPool2D()]
            c_in = c_out
        layers.append(Flatten())
    n = spec.dense_widths()
    for i in range(len(n) - 1):
        layers.append(Dense(n[i], n[i + 1], rng=rng))
        layers.append(ReLU() if i < len(n) - 2 else Sigmoid())
    if spec.init_scale != 1.0:
        for layer in layers:
            if "W" in layer.params:
                layer.params["W"] = layer.params["W"] * spec.init_scale
    return Network(spec, layers)


def loss(net: Network, x: np.ndarray, y: np.ndarray) -> float:
    """Sum of squared errors over the batch"""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size == 0:
        raise LearningError("loss of an empty batch")
    pred = net.forward(x)
    return float(np.sum((pred - y) ** 2))


def gradient(net: Network, x: np.ndarray, y: np.ndarray) -> Dict[str, np.ndarray]:
    """Exact gradient of the summed squared error, keyed like ``parameters``"""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size == 0:
        raise LearningError("gradient of an empty batch")
    pred = net.forward(x)
    net.backward(2.0 * (pred - y))
    return {k: g.copy() for k, g in net.gradients().items()}
