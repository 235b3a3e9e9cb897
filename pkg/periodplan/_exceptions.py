from __future__ import annotations

from typing import Any, List, Optional

__all__ = [
    "PeriodPlanError",
    "AlgebraError",
    "ParseError",
    "PoleError",
    "SingularMatrixError",
    "IdealError",
    "BudgetExceededError",
    "NotZeroDimensionalError",
    "IdealMembershipError",
    "SingularHypersurfaceError",
    "ReductionError",
    "DatasetError",
    "UnknownPolicyError",
    "BalancingError",
    "LearningError",
    "DimensionMismatchError",
    "DivergenceError",
    "UndefinedMetricError",
    "SearchError",
    "DisconnectedTargetsError",
    "CheckpointError",
    "OracleFault",
    "ConfigError",
    "StoreError",
]


class PeriodPlanError(Exception):
    """Base exception for all periodplan errors"""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r})"


class AlgebraError(PeriodPlanError):
    """Base class for polynomial arithmetic errors"""
    pass


class ParseError(AlgebraError):
    """Malformed polynomial text"""

    def __init__(self, message: str, *, text: str = "", position: int = 0) -> None:
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class PoleError(AlgebraError):
    """A coefficient has a pole at the evaluation point"""

    def __init__(self, message: str, *, coefficient: Any = None, point: Any = None) -> None:
        super().__init__(message)
        self.coefficient = coefficient
        self.point = point


class SingularMatrixError(AlgebraError):
    """A substitution matrix is not invertible"""
    pass


class IdealError(PeriodPlanError):
    """Base class for Groebner basis and Jacobian ring errors"""
    pass


class BudgetExceededError(IdealError):
    """A step or wall-clock budget tripped before the computation finished"""

    def __init__(
        self,
        message: str,
        *,
        reason: str = "wall_clock",
        steps: int = 0,
        elapsed: float = 0.0,
    ) -> None:
        super().__init__(message)
        self.reason = reason
        self.steps = steps
        self.elapsed = elapsed


class NotZeroDimensionalError(IdealError):
    """The Jacobian ideal does not define a finite-dimensional quotient"""

    def __init__(self, message: str, *, leading_terms: Optional[List[str]] = None) -> None:
        super().__init__(message)
        self.leading_terms = leading_terms or []


class SingularHypersurfaceError(NotZeroDimensionalError):
    """A hypersurface expected to be smooth is singular"""
    pass


class IdealMembershipError(IdealError):
    """Polynomial is not a member of the ideal"""
    pass


class ReductionError(PeriodPlanError):
    """Griffiths-Dwork reduction reached an impossible state"""
    pass


class DatasetError(PeriodPlanError):
    """Base class for vertex/edge dataset errors"""
    pass


class UnknownPolicyError(DatasetError):
    """Edge policy name is not recognised"""
    pass


class BalancingError(DatasetError):
    """Class balancing needs both classes present"""
    pass


class LearningError(PeriodPlanError):
    """Base class for network and metric errors"""
    pass


class DimensionMismatchError(LearningError):
    """Input does not match the network's input dimension"""
    pass


class DivergenceError(LearningError):
    """Training loss became NaN or infinite"""

    def __init__(self, message: str, *, iteration: int) -> None:
        super().__init__(message)
        self.iteration = iteration


class UndefinedMetricError(LearningError):
    """Metric is undefined for the given labels (e.g. single class AUC)"""
    pass


class SearchError(PeriodPlanError):
    """Base class for graph search errors"""
    pass


class DisconnectedTargetsError(SearchError):
    """Target vertices do not lie in one component"""
    pass


class CheckpointError(SearchError):
    """Checkpoint log is corrupt or inconsistent"""

    def __init__(self, message: str, *, line_number: int = 0) -> None:
        super().__init__(message if not line_number else f"{message} (line {line_number})")
        self.line_number = line_number


class OracleFault(SearchError):
    """An edge oracle crashed instead of returning an outcome"""
    pass


class ConfigError(PeriodPlanError):
    """Configuration failed validation"""
    pass


class StoreError(PeriodPlanError):
    """A JSON-Lines store could not be read or written"""

    def __init__(self, message: str, *, line_number: int = 0) -> None:
        super().__init__(message if not line_number else f"{message} (line {line_number})")
        self.line_number = line_number
