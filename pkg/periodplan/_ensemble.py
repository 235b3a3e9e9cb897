"""The product ensemble of the MLP and CNN scores, its training and sweeps."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from ._dataset import balance_oversample, split
from ._exceptions import LearningError, UndefinedMetricError
from ._features import PCAModel, record_channels
from ._metrics import evaluate, roc
from ._network import DEFAULT_MLP_WIDTHS, Network, NetworkSpec, build_network
from ._stores import read_json, write_json
from ._training import TrainConfig, train
from ._types import Edge
from .types.features import FeatureRecord, PCARecord

__all__ = [
    "EnsembleModel",
    "FeatureScorer",
    "SweepRow",
    "WidthRow",
    "ensemble_score",
    "feature_arrays",
    "train_ensemble",
    "alpha_sweep",
    "width_sweep",
]

logger = logging.getLogger(__name__)


def feature_arrays(
    records: Sequence[FeatureRecord], pca: Optional[PCAModel] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """(PCA vectors, psi channels) for a batch of feature records"""
    if not records:
        raise LearningError("no feature records given")
    vectors = []
    for r in records:
        if pca is not None:
            vectors.append(pca.transform(np.array(r.vector)))
        elif r.pca is not None:
            vectors.append(np.array(r.pca))
        else:
            raise LearningError(f"record {r.edge} has no PCA vector and no PCA model was given")
    channels = np.stack([record_channels(r) for r in records])
    return np.stack(vectors), channels


@dataclass
class EnsembleModel:
    """phi_ensemble = phi_MLP * phi_CNN"""

    mlp: Network
    cnn: Network
    pca: Optional[PCAModel] = None

    def score(self, vectors: np.ndarray, channels: np.ndarray) -> np.ndarray:
        return self.mlp.forward(vectors) * self.cnn.forward(channels)

    def score_records(self, records: Sequence[FeatureRecord]) -> np.ndarray:
        vectors, channels = feature_arrays(records, self.pca)
        return self.score(vectors, channels)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mlp": self.mlp.to_dict(),
            "cnn": self.cnn.to_dict(),
            "pca": self.pca.to_record().model_dump() if self.pca is not None else None,
        }

    def save(self, path: Union[str, Path], provenance: Optional[Mapping[str, Any]] = None) -> None:
        data = self.to_dict()
        if provenance:
            data["provenance"] = dict(provenance)
        write_json(path, data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> EnsembleModel:
        data = read_json(path)
        if not isinstance(data, dict) or "mlp" not in data or "cnn" not in data:
            raise LearningError(f"{path} is not an ensemble model file")
        pca = PCAModel.from_record(PCARecord.model_validate(data["pca"])) if data.get("pca") else None
        return cls(mlp=Network.from_dict(data["mlp"]), cnn=Network.from_dict(data["cnn"]), pca=pca)


def ensemble_score(model: EnsembleModel, vectors: np.ndarray, channels: np.ndarray) -> np.ndarray:
    return model.score(vectors, channels)


class FeatureScorer:
    """Scorer over stored feature records; edges without features score 0"""

    def __init__(self, model: EnsembleModel, features: Mapping[str, FeatureRecord]) -> None:
        self.model = model
        self.features = features

    def score(self, edges: Sequence[Edge]) -> List[float]:
        out = [0.0] * len(edges)
        known: List[Tuple[int, FeatureRecord]] = []
        for i, (a, b) in enumerate(edges):
            rec = self.features.get(f"{a} | {b}") or self.features.get(f"{b} | {a}")
            if rec is not None:
                known.append((i, rec))
        if known:
            scores = self.model.score_records([r for _, r in known])
            for (i, _), s in zip(known, scores):
                out[i] = float(s)
        return out


def train_ensemble(
    records: Sequence[FeatureRecord],
    labels: Mapping[str, bool],
    *,
    pca: Optional[PCAModel] = None,
    config: Optional[TrainConfig] = None,
    mlp_widths: Sequence[int] = DEFAULT_MLP_WIDTHS,
    cnn_channels: Sequence[int] = (8, 16),
    cnn_dense: int = 64,
    balance: bool = True,
    seed: int = 0,
) -> EnsembleModel:
    """Train both networks on the same (optionally oversampled) edges"""
    config = config or TrainConfig(seed=seed)
    rows = [r for r in records if r.edge in labels]
    if balance:
        rows = balance_oversample(rows, seed, label=lambda r: labels[r.edge])
    vectors, channels = feature_arrays(rows, pca)
    y = np.array([1.0 if labels[r.edge] else 0.0 for r in rows])
    mlp = build_network(
        NetworkSpec(kind="mlp", input_dim=vectors.shape[1], widths=list(mlp_widths), seed=seed)
    )
    cnn = build_network(
        NetworkSpec(
            kind="cnn",
            channels=channels.shape[1],
            grid=channels.shape[2],
            conv_channels=list(cnn_channels),
            dense_width=cnn_dense,
            seed=seed + 1,
        )
    )
    train(mlp, config, vectors, y)
    train(cnn, config, channels, y)
    logger.info("trained ensemble on %d samples", len(rows))
    return EnsembleModel(mlp=mlp, cnn=cnn, pca=pca)


class SweepRow(BaseModel):
    alpha: float
    n_train: int
    n_test: int
    success_accuracy: float
    failure_accuracy: float
    auc: Optional[float] = None


class WidthRow(BaseModel):
    width: int
    auc: Optional[float] = None


def _auc(scores: np.ndarray, y: Sequence[bool]) -> Optional[float]:
    try:
        return roc(scores, y).auc
    except UndefinedMetricError:
        return None


def alpha_sweep(
    records: Sequence[FeatureRecord],
    labels: Mapping[str, bool],
    alphas: Sequence[float],
    *,
    pca: Optional[PCAModel] = None,
    config: Optional[TrainConfig] = None,
    tau: float = 0.5,
    seed: int = 0,
) -> List[SweepRow]:
    """Per-class accuracy and AUC of the ensemble on the held-out part, per alpha"""
    by_edge = {r.edge: r for r in records if r.edge in labels}
    out: List[SweepRow] = []
    for alpha in alphas:
        spec = split(list(by_edge), alpha, seed)
        model = train_ensemble(
            [by_edge[e] for e in spec.train], labels, pca=pca, config=config, seed=seed
        )
        test = [by_edge[e] for e in spec.test]
        scores = model.score_records(test)
        y = [labels[r.edge] for r in test]
        c = evaluate(scores, y, tau)
        out.append(
            SweepRow(
                alpha=alpha,
                n_train=len(spec.train),
                n_test=len(spec.test),
                success_accuracy=c.tpr,
                failure_accuracy=c.tnr,
                auc=_auc(scores, y),
            )
        )
        logger.info("alpha %.2f: TPR %.3f TNR %.3f", alpha, c.tpr, c.tnr)
    return out


def width_sweep(
    records: Sequence[FeatureRecord],
    labels: Mapping[str, bool],
    widths: Sequence[int],
    *,
    alpha: float = 0.5,
    pca: Optional[PCAModel] = None,
    config: Optional[TrainConfig] = None,
    seed: int = 0,
) -> List[WidthRow]:
    """Held-out MLP AUC as the first three hidden widths vary"""
    config = config or TrainConfig(seed=seed)
    by_edge = {r.edge: r for r in records if r.edge in labels}
    spec = split(list(by_edge), alpha, seed)
    train_rows = balance_oversample([by_edge[e] for e in spec.train], seed, label=lambda r: labels[r.edge])
    x_train, _ = feature_arrays(train_rows, pca)
    y_train = np.array([1.0 if labels[r.edge] else 0.0 for r in train_rows])
    test_rows = [by_edge[e] for e in spec.test]
    x_test, _ = feature_arrays(test_rows, pca)
    y_test = [labels[r.edge] for r in test_rows]
    out: List[WidthRow] = []
    for width in widths:
        hidden = [width, width, width, *DEFAULT_MLP_WIDTHS[3:]]
        net = build_network(NetworkSpec(kind="mlp", input_dim=x_train.shape[1], widths=hidden, seed=seed))
        train(net, config, x_train, y_train)
        out.append(WidthRow(width=width, auc=_auc(net.forward(x_test), y_test)))
    return out
