from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

__all__ = [
    "EdgePolicy",
    "VertexRecord",
    "EdgeRecord",
    "OrbitRecord",
    "SplitSpec",
]

EdgePolicy = Literal["complete", "monomial-difference", "custom"]


class VertexRecord(BaseModel):
    """One fewnomial quartic, identified by its canonical string"""

    vertex: str
    k: int = Field(ge=1, le=35)

    model_config = {"extra": "allow"}

    @property
    def key(self) -> str:
        return self.vertex


class EdgeRecord(BaseModel):
    f: str
    g: str
    policy: EdgePolicy = "complete"

    model_config = {"extra": "allow"}

    @property
    def key(self) -> str:
        return f"{self.f} | {self.g}"


class OrbitRecord(BaseModel):
    """Membership of a vertex in its variable-permutation orbit"""

    vertex: str
    orbit: int = Field(ge=0)
    representative: str

    @property
    def key(self) -> str:
        return self.vertex


class SplitSpec(BaseModel):
    """A seeded train/test partition of labeled edge ids"""

    alpha: float = Field(gt=0, lt=1)
    seed: int
    train: List[str]
    test: List[str]
    total: Optional[int] = None

    @model_validator(mode="after")
    def _check_partition(self) -> SplitSpec:
        if set(self.train) & set(self.test):
            raise ValueError("train and test edges overlap")
        if self.total is None:
            self.total = len(self.train) + len(self.test)
        elif self.total != len(self.train) + len(self.test):
            raise ValueError("split sizes do not add up to the labeled total")
        return self
