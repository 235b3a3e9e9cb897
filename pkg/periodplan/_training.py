from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from ._exceptions import DivergenceError, LearningError
from ._network import Network, gradient, loss

__all__ = ["TrainConfig", "TrainResult", "train"]

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Minibatch SGD settings; the step size is gamma / (1 + decay * k) at iteration k"""

    gamma: float = Field(default=1e-3, ge=0)
    decay: float = Field(default=0.0, ge=0)
    batch_size: int = Field(default=32, ge=1)
    epochs: int = Field(default=20, ge=0)
    seed: int = 0

    def step_size(self, iteration: int) -> float:
        return self.gamma / (1.0 + self.decay * iteration)


@dataclass
class TrainResult:
    network: Network
    losses: List[float] = field(default_factory=list)
    iterations: int = 0


def train(
    net: Network,
    config: TrainConfig,
    x: np.ndarray,
    y: np.ndarray,
    *,
    schedule: Optional[Callable[[int], float]] = None,
) -> TrainResult:
    """Minibatch SGD: A(k) = A(k-1) - gamma(k) * grad L(A(k-1); T_k).

    Each epoch draws a fresh permutation from the seeded generator and walks
    it in batches of ``batch_size``; the network is updated in place.

    Args:
        net: network to train
        config: step size, batch size, epochs and seed
        x: inputs, first axis indexes samples
        y: 0/1 targets
        schedule: optional step-size function overriding the config

    Returns:
        TrainResult with the full-data loss after every epoch

    Raises:
        DivergenceError: a gradient or the loss became NaN or infinite; the
            offending step is never applied
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if len(x) == 0 or len(x) != len(y):
        raise LearningError(f"need aligned nonempty data, got {len(x)} inputs and {len(y)} targets")
    step = schedule or config.step_size
    rng = np.random.default_rng(config.seed)
    result = TrainResult(network=net)
    k = 0
    for epoch in range(config.epochs):
        order = rng.permutation(len(x))
        for start in range(0, len(order), config.batch_size):
            idx = order[start : start + config.batch_size]
            k += 1
            grads = gradient(net, x[idx], y[idx])
            # the network keeps its last finite parameters
            if not all(np.isfinite(g).all() for g in grads.values()):
                raise DivergenceError(f"non-finite gradient at iteration {k}", iteration=k)
            gamma = step(k)
            if gamma:
                for i, layer in enumerate(net.layers):
                    for name in layer.params:
                        layer.params[name] = layer.params[name] - gamma * grads[f"{i}.{name}"]
        current = loss(net, x, y)
        if not np.isfinite(current):
            raise DivergenceError(f"loss diverged after epoch {epoch + 1}", iteration=k)
        result.losses.append(current)
        logger.debug("epoch %d: loss %.6f", epoch + 1, current)
    result.iterations = k
    logger.info("trained %s for %d iterations", net.spec.kind, k)
    return result
