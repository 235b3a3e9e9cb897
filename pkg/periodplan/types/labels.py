from __future__ import annotations

from datetime import datetime, timezone
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

__all__ = [
    "AttemptStatus",
    "AttemptOutcome",
    "EdgeLabel",
    "TimingRow",
]

AttemptStatus = Literal["success", "timeout", "singular", "faulted"]


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class AttemptOutcome(BaseModel):
    """Terminal result of one edge attempt.

    ``budget`` is the wall clock the attempt ran under. A log holds one
    outcome per edge, except that a timeout may be followed by a retry under
    a strictly larger budget.
    """

    edge: Tuple[str, str]
    status: AttemptStatus
    elapsed: float = Field(ge=0)
    budget: Optional[float] = Field(default=None, gt=0)
    timestamp: datetime = Field(default_factory=utcnow)
    detail: Optional[str] = None

    model_config = {"extra": "allow"}

    @property
    def success(self) -> bool:
        return self.status == "success"


class EdgeLabel(BaseModel):
    """Budgeted first-ODE outcome of an edge.

    ``success`` is stored explicitly instead of a 0/1 beta code.
    """

    edge: str
    elapsed_s: float = Field(ge=0)
    success: bool
    order: Optional[int] = Field(default=None, ge=1)
    degree: Optional[int] = Field(default=None, ge=0)
    failure: Optional[Literal["timeout", "singular", "error"]] = None
    host: str = ""
    timestamp: datetime = Field(default_factory=utcnow)
    budget_s: float = Field(gt=0)

    model_config = {"extra": "allow"}

    @model_validator(mode="after")
    def _check_consistency(self) -> EdgeLabel:
        if self.success and (self.order is None or self.degree is None):
            raise ValueError("a successful label needs order and degree")
        if not self.success and self.failure is None:
            raise ValueError("a failed label needs a failure category")
        return self

    @property
    def key(self) -> str:
        return self.edge


class TimingRow(BaseModel):
    """One row of the timing/complexity export"""

    edge: str
    elapsed_s: float
    success: bool
    order: Optional[int] = None
    degree: Optional[int] = None
    psi_sum: Optional[float] = None
    psi_entropy: Optional[float] = None
    psi_nonzero: Optional[int] = None

    def as_row(self) -> List[object]:
        return [
            self.edge,
            self.elapsed_s,
            int(self.success),
            self.order if self.order is not None else "",
            self.degree if self.degree is not None else "",
            self.psi_sum if self.psi_sum is not None else "",
            self.psi_entropy if self.psi_entropy is not None else "",
            self.psi_nonzero if self.psi_nonzero is not None else "",
        ]
