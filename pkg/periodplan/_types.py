from __future__ import annotations

from fractions import Fraction
from typing import (
    TYPE_CHECKING,
    List,
    Protocol,
    Sequence,
    Tuple,
    runtime_checkable,
)
from typing_extensions import TypeAlias

if TYPE_CHECKING:
    from .types.labels import AttemptOutcome

__all__ = [
    "NOT_GIVEN",
    "NotGiven",
    "is_given",
    "Exponents",
    "RationalMatrix",
    "Edge",
    "EdgeOracle",
    "Scorer",
]


# Sentinel value for optional parameters
class NotGiven:
    """Sentinel value for options the caller did not pass"""

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NOT_GIVEN"


NOT_GIVEN = NotGiven()


def is_given(value: object) -> bool:
    """Check if a value is not NOT_GIVEN"""
    return not isinstance(value, NotGiven)


Exponents: TypeAlias = Tuple[int, ...]
RationalMatrix: TypeAlias = List[List[Fraction]]
Edge: TypeAlias = Tuple[str, str]


@runtime_checkable
class EdgeOracle(Protocol):
    """Anything that can attempt an edge under a wall-clock budget"""

    def attempt(self, edge: Edge, budget_seconds: float) -> AttemptOutcome:
        ...


@runtime_checkable
class Scorer(Protocol):
    """Computability score phi: edges -> [0, 1]"""

    def score(self, edges: Sequence[Edge]) -> List[float]:
        ...
