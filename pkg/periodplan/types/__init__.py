from .matrices import (
    ConnectionRecord,
    TranslateRecord,
    format_rational,
    parse_rational,
)
from .labels import (
    AttemptStatus,
    AttemptOutcome,
    EdgeLabel,
    TimingRow,
)
from .dataset import (
    EdgePolicy,
    VertexRecord,
    EdgeRecord,
    OrbitRecord,
    SplitSpec,
)
from .features import (
    MatrixStatsRecord,
    FeatureRecord,
    PCARecord,
)
from .search import (
    SearchStatus,
    SearchCounts,
    SearchReport,
    StrategyStats,
    StrategyComparison,
)

__all__ = [
    "ConnectionRecord",
    "TranslateRecord",
    "format_rational",
    "parse_rational",
    "AttemptStatus",
    "AttemptOutcome",
    "EdgeLabel",
    "TimingRow",
    "EdgePolicy",
    "VertexRecord",
    "EdgeRecord",
    "OrbitRecord",
    "SplitSpec",
    "MatrixStatsRecord",
    "FeatureRecord",
    "PCARecord",
    "SearchStatus",
    "SearchCounts",
    "SearchReport",
    "StrategyStats",
    "StrategyComparison",
]
