"""Model inputs: rational heights, matrix statistics, edge vectors, PCA, channels.

Everything stays exact up to ``psi``; floats only appear after it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np

from ._connection import ConnectionMatrix, Pencil
from ._dataset import QUARTIC_MONOMIALS
from ._exceptions import DatasetError, DimensionMismatchError
from ._polynomial import Polynomial
from ._stores import JsonlStore, read_json, write_json
from .types.features import FeatureRecord, MatrixStatsRecord, PCARecord
from .types.labels import EdgeLabel, TimingRow
from .types.matrices import format_rational

__all__ = [
    "psi",
    "psi_entropy",
    "MatrixStats",
    "matrix_stats",
    "edge_vector",
    "PCAModel",
    "pca_fit",
    "pca_transform",
    "matrix_channels",
    "record_channels",
    "feature_record",
    "FeatureStore",
    "timing_rows",
]

logger = logging.getLogger(__name__)


def psi(q: Union[int, Fraction]) -> float:
    """log|m1| + log m2 for q = m1/m2 in lowest terms; psi(0) = 0"""
    q = Fraction(q)
    if not q:
        return 0.0
    return math.log(abs(q.numerator)) + math.log(q.denominator)


def psi_entropy(q: Union[int, Fraction]) -> float:
    """log(|m1|)^2 + log(m2)^2, with the same zero convention as psi"""
    q = Fraction(q)
    if not q:
        return 0.0
    return math.log(abs(q.numerator)) ** 2 + math.log(q.denominator) ** 2


def _flatten(values: Any) -> Iterable[Fraction]:
    if isinstance(values, (int, Fraction)):
        yield Fraction(values)
        return
    for v in values:
        yield from _flatten(v)


@dataclass(frozen=True)
class MatrixStats:
    psi_sum: float
    psi_entropy: float
    psi_nonzero: int

    def to_record(self) -> MatrixStatsRecord:
        return MatrixStatsRecord(
            psi_sum=self.psi_sum, psi_entropy=self.psi_entropy, psi_nonzero=self.psi_nonzero
        )


def matrix_stats(tensor: Any) -> MatrixStats:
    """(sum of psi, minus sum of psi_entropy, count of nonzero psi) over all entries.

    Accepts a rational scalar, matrix or stack of matrices (any nesting).
    """
    total = 0.0
    entropy = 0.0
    nonzero = 0
    for q in _flatten(tensor):
        h = psi(q)
        total += h
        entropy += psi_entropy(q)
        if h != 0.0:
            nonzero += 1
    return MatrixStats(psi_sum=total, psi_entropy=-entropy, psi_nonzero=nonzero)


def _dense(p: Polynomial) -> np.ndarray:
    if p and p.homogeneous_degree() != 4:
        raise DimensionMismatchError(f"edge endpoints must be quartics, got {p}")
    return np.array([float(p.coefficient(m)) for m in QUARTIC_MONOMIALS], dtype=np.float64)


def edge_vector(f: Polynomial, g: Polynomial) -> np.ndarray:
    """Coefficients of f then g over the 35 quartic monomials, grevlex descending"""
    return np.concatenate([_dense(f), _dense(g)])


@dataclass
class PCAModel:
    """
    Principal component projection fitted by SVD

    Attributes:
        mean: column means of the fitted data
        components: k orthonormal rows, the top right singular vectors
        singular_values: every singular value of the centered data, descending
    """

    mean: np.ndarray
    components: np.ndarray
    singular_values: np.ndarray

    @property
    def k(self) -> int:
        return int(self.components.shape[0])

    def explained_variance_ratio(self) -> np.ndarray:
        """Share of total variance carried by each retained component"""
        energy = self.singular_values**2
        total = float(energy.sum())
        if total == 0.0:
            return np.zeros(self.k)
        return energy[: self.k] / total

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.mean.shape[0]:
            raise DimensionMismatchError(
                f"expected vectors of length {self.mean.shape[0]}, got {x.shape[-1]}"
            )
        return (x - self.mean) @ self.components.T

    def reconstruct(self, z: np.ndarray) -> np.ndarray:
        return self.mean + np.asarray(z, dtype=np.float64) @ self.components

    def to_record(self) -> PCARecord:
        return PCARecord(
            mean=self.mean.tolist(),
            components=self.components.tolist(),
            singular_values=self.singular_values.tolist(),
            k=self.k,
        )

    @classmethod
    def from_record(cls, record: PCARecord) -> PCAModel:
        return cls(
            mean=np.array(record.mean, dtype=np.float64),
            components=np.array(record.components, dtype=np.float64).reshape(record.k, -1),
            singular_values=np.array(record.singular_values, dtype=np.float64),
        )

    def save(self, path: Union[str, Path], provenance: Optional[Mapping[str, Any]] = None) -> None:
        data = self.to_record().model_dump()
        if provenance:
            data["provenance"] = dict(provenance)
        write_json(path, data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> PCAModel:
        return cls.from_record(PCARecord.model_validate(read_json(path)))


def pca_fit(x: np.ndarray, k: int) -> PCAModel:
    """Center x and keep its top-k right singular vectors.

    Args:
        x: n x p data matrix
        k: components to retain, 1 <= k <= min(n, p)
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionMismatchError(f"PCA needs a 2-D data matrix, got shape {x.shape}")
    n, p = x.shape
    if not 1 <= k <= min(n, p):
        raise DimensionMismatchError(f"cannot keep {k} components of a {n} x {p} matrix")
    mean = x.mean(axis=0)
    _, s, vt = np.linalg.svd(x - mean, full_matrices=False)
    logger.debug("PCA on %d x %d data keeps %d components", n, p, k)
    return PCAModel(mean=mean, components=vt[:k].copy(), singular_values=s)


def pca_transform(model: PCAModel, v: np.ndarray) -> np.ndarray:
    return model.transform(v)


def matrix_channels(matrices: Sequence[ConnectionMatrix]) -> np.ndarray:
    """psi-image of each connection matrix, stacked as an (s, m0, m0) array"""
    if not matrices:
        raise DatasetError("at least one connection matrix is needed for channels")
    return np.stack(
        [np.array([[psi(v) for v in row] for row in m.entries], dtype=np.float64) for m in matrices]
    )


def feature_record(
    pencil: Pencil,
    matrices: Mapping[Fraction, ConnectionMatrix],
    basepoints: Sequence[Fraction] = (Fraction(0), Fraction(1)),
    pca: Optional[PCAModel] = None,
) -> FeatureRecord:
    """Assemble every model input of an edge.

    Raises:
        DatasetError: no matrix was computed for one of the basepoints
    """
    chosen: List[ConnectionMatrix] = []
    for t0 in basepoints:
        m = matrices.get(Fraction(t0))
        if m is None:
            raise DatasetError(f"no connection matrix at t0 = {t0} for {pencil.edge_id}")
        chosen.append(m)
    vector = edge_vector(pencil.f, pencil.g)
    stats = matrix_stats([m.entries for m in chosen])
    return FeatureRecord(
        edge=pencil.edge_id,
        vector=vector.tolist(),
        pca=pca.transform(vector).tolist() if pca is not None else None,
        basepoints=[format_rational(Fraction(t)) for t in basepoints],
        matrices=[m.to_record() for m in chosen],
        stats=stats.to_record(),
    )


def record_channels(record: FeatureRecord) -> np.ndarray:
    """Rebuild the psi channels of a stored record from its exact matrices"""
    return np.stack(
        [np.array([[psi(v) for v in row] for row in m.matrix()], dtype=np.float64) for m in record.matrices]
    )


class FeatureStore(JsonlStore[FeatureRecord]):
    def __init__(self, path: Union[str, Path]) -> None:
        super().__init__(path, FeatureRecord)


def timing_rows(
    labels: Iterable[EdgeLabel], features: Optional[Mapping[str, FeatureRecord]] = None
) -> List[TimingRow]:
    """Join labels with matrix statistics for the time/complexity export"""
    rows: List[TimingRow] = []
    for label in labels:
        rec = features.get(label.edge) if features else None
        rows.append(
            TimingRow(
                edge=label.edge,
                elapsed_s=label.elapsed_s,
                success=label.success,
                order=label.order,
                degree=label.degree,
                psi_sum=rec.stats.psi_sum if rec else None,
                psi_entropy=rec.stats.psi_entropy if rec else None,
                psi_nonzero=rec.stats.psi_nonzero if rec else None,
            )
        )
    return rows
