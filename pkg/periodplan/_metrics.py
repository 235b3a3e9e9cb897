from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Mapping, Optional, Sequence, Union

import numpy as np

from ._exceptions import LearningError, UndefinedMetricError

__all__ = [
    "Confusion",
    "RocPoint",
    "RocCurve",
    "evaluate",
    "roc",
    "write_roc_csv",
    "ROC_COLUMNS",
]

ROC_COLUMNS = ("tau", "TP", "FP", "FN", "TN", "TPR", "TNR")


def _rate(num: int, den: int) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class Confusion:
    """Counts at cutoff tau; a sample is predicted positive when score >= tau"""

    tau: float
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def tpr(self) -> float:
        return _rate(self.tp, self.tp + self.fn)

    @property
    def tnr(self) -> float:
        return _rate(self.tn, self.tn + self.fp)

    @property
    def fpr(self) -> float:
        return _rate(self.fp, self.tn + self.fp)

    @property
    def accuracy(self) -> float:
        return _rate(self.tp + self.tn, self.total)


RocPoint = Confusion


@dataclass(frozen=True)
class RocCurve:
    points: List[Confusion]
    auc: float

    def rows(self) -> List[List[float]]:
        return [[p.tau, p.tp, p.fp, p.fn, p.tn, p.tpr, p.tnr] for p in self.points]


def _align(scores: Sequence[float], labels: Sequence[bool]) -> tuple:
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    y = np.asarray(labels).astype(bool).reshape(-1)
    if s.shape != y.shape:
        raise LearningError(f"{s.size} scores for {y.size} labels")
    return s, y


def evaluate(scores: Sequence[float], labels: Sequence[bool], tau: float = 0.5) -> Confusion:
    s, y = _align(scores, labels)
    pred = s >= tau
    return Confusion(
        tau=float(tau),
        tp=int(np.sum(pred & y)),
        fp=int(np.sum(pred & ~y)),
        fn=int(np.sum(~pred & y)),
        tn=int(np.sum(~pred & ~y)),
    )


def roc(scores: Sequence[float], labels: Sequence[bool]) -> RocCurve:
    """ROC points for tau sweeping the sorted distinct scores, plus AUC.

    Points run by increasing tau, from everything predicted positive down to
    nothing positive at tau = +inf. The AUC is the trapezoid rule in the
    (false positive rate, true positive rate) plane.

    Raises:
        UndefinedMetricError: labels hold a single class
    """
    s, y = _align(scores, labels)
    if y.all() or not y.any():
        raise UndefinedMetricError("ROC AUC is undefined when only one class is present")
    thresholds = list(np.unique(s)) + [np.inf]
    points = [evaluate(s, y, float(t)) for t in thresholds]
    fpr = np.array([p.fpr for p in reversed(points)])
    tpr = np.array([p.tpr for p in reversed(points)])
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(points=points, auc=auc)


def write_roc_csv(
    curve: RocCurve,
    path: Union[str, Path],
    provenance: Optional[Mapping[str, object]] = None,
) -> None:
    """CSV with columns tau, TP, FP, FN, TN, TPR, TNR; provenance goes in '#' comments"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for key, value in (provenance or {}).items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh)
        writer.writerow(ROC_COLUMNS)
        for row in curve.rows():
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
