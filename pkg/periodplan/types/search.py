from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from .labels import AttemptOutcome

__all__ = [
    "SearchStatus",
    "SearchCounts",
    "SearchReport",
    "StrategyStats",
    "StrategyComparison",
]

SearchStatus = Literal["success", "fail"]


class SearchCounts(BaseModel):
    attempted: int = 0
    succeeded: int = 0
    timeouts: int = 0
    singular: int = 0
    faulted: int = 0


class SearchReport(BaseModel):
    """Result of a search: the accepted subgraph, its tree, paths and timings"""

    status: SearchStatus
    targets: List[str]
    accepted: List[Tuple[str, str]]
    tree: List[Tuple[str, str]] = Field(default_factory=list)
    paths: List[List[str]] = Field(default_factory=list)
    attempts: List[AttemptOutcome] = Field(default_factory=list)
    counts: SearchCounts = Field(default_factory=SearchCounts)
    provenance: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"extra": "allow"}


class StrategyStats(BaseModel):
    """Outcome of one edge-selection strategy over many source vertices.

    ``histogram[n]`` counts source vertices with exactly n successful edges.
    """

    name: str
    attempts: int = 0
    successes: int = 0
    failure_rate: Optional[float] = None
    histogram: List[int] = Field(default_factory=list)


class StrategyComparison(BaseModel):
    top_n: int
    aided: StrategyStats
    unaided: StrategyStats
    provenance: Dict[str, Any] = Field(default_factory=dict)
