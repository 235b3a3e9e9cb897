from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, Field

from .matrices import ConnectionRecord

__all__ = ["MatrixStatsRecord", "FeatureRecord", "PCARecord"]


class MatrixStatsRecord(BaseModel):
    """Height statistics of a stack of connection matrices"""

    psi_sum: float = Field(ge=0)
    psi_entropy: float = Field(le=0)
    psi_nonzero: int = Field(ge=0)


class FeatureRecord(BaseModel):
    """Model inputs of one edge; the matrices keep their exact rational entries"""

    edge: str
    vector: List[float]
    pca: Optional[List[float]] = None
    basepoints: List[str]
    matrices: List[ConnectionRecord]
    stats: MatrixStatsRecord

    model_config = {"extra": "allow"}

    @property
    def key(self) -> str:
        return self.edge


class PCARecord(BaseModel):
    mean: List[float]
    components: List[List[float]]
    singular_values: List[float]
    k: int = Field(ge=1)
