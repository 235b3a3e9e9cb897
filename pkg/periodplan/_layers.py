"""Network layers with explicit forward and backward passes over numpy batches.

Each layer caches what its backward pass needs during ``forward``; backward
fills ``grads`` for its parameters and returns the gradient of its input.
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._exceptions import DimensionMismatchError

__all__ = [
    "Layer",
    "Dense",
    "Conv2D",
    "MaxPool2D",
    "ReLU",
    "Sigmoid",
    "Flatten",
    "glorot_uniform",
]


def glorot_uniform(
    rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int, fan_out: int, scale: float = 1.0
) -> np.ndarray:
    """Uniform on [-a, a] with a = scale * sqrt(6 / (fan_in + fan_out))"""
    a = scale * np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-a, a, size=shape)


class Layer:
    """Base class; parameter-free layers keep empty dicts"""

    kind = "layer"

    def __init__(self) -> None:
        self.params: Dict[str, np.ndarray] = {}
        self.grads: Dict[str, np.ndarray] = {}

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> Dict[str, object]:
        return {"kind": self.kind}

    def zero_grads(self) -> None:
        self.grads = {k: np.zeros_like(v) for k, v in self.params.items()}


class Dense(Layer):
    """Affine map y = x W^T + b with W of shape (n_out, n_in)"""

    kind = "dense"

    def __init__(self, n_in: int, n_out: int, rng: Optional[np.random.Generator] = None) -> None:
        super().__init__()
        self.n_in, self.n_out = n_in, n_out
        if rng is None:
            w = np.zeros((n_out, n_in))
        else:
            w = glorot_uniform(rng, (n_out, n_in), n_in, n_out)
        self.params = {"W": w, "b": np.zeros(n_out)}
        self.zero_grads()
        self._x: Optional[np.ndarray] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.n_in:
            raise DimensionMismatchError(f"dense layer expects {self.n_in} inputs, got {x.shape[-1]}")
        self._x = x
        return x @ self.params["W"].T + self.params["b"]

    def backward(self, grad: np.ndarray) -> np.ndarray:
        assert self._x is not None
        self.grads["W"] = grad.T @ self._x
        self.grads["b"] = grad.sum(axis=0)
        return grad @ self.params["W"]

    def describe(self) -> Dict[str, object]:
        return {"kind": self.kind, "n_in": self.n_in, "n_out": self.n_out}


class Conv2D(Layer):
    """Square-kernel convolution, stride 1, zero padding that keeps the grid size"""

    kind = "conv2d"

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        kernel_size: int = 3,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        super().__init__()
        if kernel_size % 2 != 1:
            raise DimensionMismatchError("kernel size must be odd")
        self.in_channels, self.out_channels, self.kernel_size = in_channels, out_channels, kernel_size
        self.padding = kernel_size // 2
        shape = (out_channels, in_channels, kernel_size, kernel_size)
        fan_in = in_channels * kernel_size * kernel_size
        fan_out = out_channels * kernel_size * kernel_size
        w = np.zeros(shape) if rng is None else glorot_uniform(rng, shape, fan_in, fan_out)
        self.params = {"W": w, "b": np.zeros(out_channels)}
        self.zero_grads()
        self._windows: Optional[np.ndarray] = None
        self._shape: Optional[Tuple[int, ...]] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != 4 or x.shape[1] != self.in_channels:
            raise DimensionMismatchError(
                f"conv layer expects (batch, {self.in_channels}, h, w), got {x.shape}"
            )
        p, k = self.padding, self.kernel_size
        padded = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)))
        # (batch, c_in, h, w, k, k)
        windows = sliding_window_view(padded, (k, k), axis=(2, 3))
        self._windows = windows
        self._shape = x.shape
        out = np.einsum("bchwij,ocij->bohw", windows, self.params["W"])
        return out + self.params["b"][None, :, None, None]

    def backward(self, grad: np.ndarray) -> np.ndarray:
        assert self._windows is not None and self._shape is not None
        p, k = self.padding, self.kernel_size
        self.grads["W"] = np.einsum("bchwij,bohw->ocij", self._windows, grad)
        self.grads["b"] = grad.sum(axis=(0, 2, 3))
        b, c, h, w = self._shape
        dpad = np.zeros((b, c, h + 2 * p, w + 2 * p))
        weights = self.params["W"]
        for i in range(k):
            for j in range(k):
                dpad[:, :, i : i + h, j : j + w] += np.einsum("bohw,oc->bchw", grad, weights[:, :, i, j])
        return dpad[:, :, p : p + h, p : p + w]

    def describe(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "in_channels": self.in_channels,
            "out_channels": self.out_channels,
            "kernel_size": self.kernel_size,
        }


class MaxPool2D(Layer):
    """2x2 max pooling; an odd trailing row or column is dropped"""

    kind = "maxpool2d"

    def __init__(self) -> None:
        super().__init__()
        self._argmax: Optional[np.ndarray] = None
        self._shape: Optional[Tuple[int, ...]] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        b, c, h, w = x.shape
        ho, wo = h // 2, w // 2
        blocks = x[:, :, : 2 * ho, : 2 * wo].reshape(b, c, ho, 2, wo, 2)
        blocks = blocks.transpose(0, 1, 2, 4, 3, 5).reshape(b, c, ho, wo, 4)
        self._argmax = blocks.argmax(axis=-1)
        self._shape = x.shape
        return np.take_along_axis(blocks, self._argmax[..., None], axis=-1)[..., 0]

    def backward(self, grad: np.ndarray) -> np.ndarray:
        assert self._argmax is not None and self._shape is not None
        b, c, h, w = self._shape
        ho, wo = h // 2, w // 2
        blocks = np.zeros((b, c, ho, wo, 4))
        np.put_along_axis(blocks, self._argmax[..., None], grad[..., None], axis=-1)
        blocks = blocks.reshape(b, c, ho, wo, 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(b, c, 2 * ho, 2 * wo)
        out = np.zeros(self._shape)
        out[:, :, : 2 * ho, : 2 * wo] = blocks
        return out


class ReLU(Layer):
    """max(0, x); the subgradient at 0 is 0"""

    kind = "relu"

    def __init__(self) -> None:
        super().__init__()
        self._mask: Optional[np.ndarray] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        assert self._mask is not None
        return np.where(self._mask, grad, 0.0)


class Sigmoid(Layer):
    kind = "sigmoid"

    def __init__(self) -> None:
        super().__init__()
        self._y: Optional[np.ndarray] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._y = 0.5 * (1.0 + np.tanh(0.5 * x))
        return self._y

    def backward(self, grad: np.ndarray) -> np.ndarray:
        assert self._y is not None
        return grad * self._y * (1.0 - self._y)


class Flatten(Layer):
    kind = "flatten"

    def __init__(self) -> None:
        super().__init__()
        self._shape: Optional[Tuple[int, ...]] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        assert self._shape is not None
        return grad.reshape(self._shape)
