from . import types
from ._version import __version__
from ._types import NOT_GIVEN, NotGiven, EdgeOracle, Scorer
from ._exceptions import (
    PeriodPlanError,
    AlgebraError,
    ParseError,
    PoleError,
    SingularMatrixError,
    IdealError,
    BudgetExceededError,
    NotZeroDimensionalError,
    IdealMembershipError,
    SingularHypersurfaceError,
    ReductionError,
    DatasetError,
    UnknownPolicyError,
    BalancingError,
    LearningError,
    DimensionMismatchError,
    DivergenceError,
    UndefinedMetricError,
    SearchError,
    DisconnectedTargetsError,
    CheckpointError,
    OracleFault,
    ConfigError,
    StoreError,
)
from ._config import Config, NetworkConfig, load_config
from ._univariate import UPoly, RationalFunction
from ._polynomial import Polynomial, substitute_linear, evaluate_t, pencil_family
from ._budget import Budget, BudgetMeter
from ._groebner import GroebnerBasis, buchberger
from ._jacobian import (
    GriffithsBasis,
    JacobianRing,
    RingCache,
    is_smooth,
    griffiths_basis,
    express_in_ideal,
)
from ._connection import (
    Pencil,
    PoleForm,
    ConnectionMatrix,
    TranslateMatrix,
    griffiths_dwork_reduce,
    gm_connection_at,
    translate_matrix,
)
from ._picard_fuchs import (
    PicardFuchsOperator,
    FirstOdeOutcome,
    LabelStore,
    first_ode,
    check_specialization,
    label_edge,
)
from ._oracle import SyntheticOracle, AlgebraicOracle, canonical_edge
from ._dataset import (
    VertexSet,
    OrbitTable,
    EdgeSet,
    enumerate_fewnomials,
    s4_orbits,
    sample_orbit_representatives,
    companion_neighbors,
    build_edges,
    split,
    balance_oversample,
)
from ._features import (
    psi,
    psi_entropy,
    matrix_stats,
    edge_vector,
    PCAModel,
    pca_fit,
    pca_transform,
    feature_record,
)
from ._network import NetworkSpec, Network, build_mlp, build_cnn, build_network
from ._training import TrainConfig, train
from ._metrics import Confusion, RocCurve, evaluate, roc
from ._ensemble import EnsembleModel, FeatureScorer, train_ensemble, ensemble_score
from ._forest import UnionFind, ForestState, extract_tree, extract_path
from ._checkpoint import Checkpoint
from ._scheduler import (
    SearchProblem,
    SearchResult,
    attempt_edge,
    queue_order,
    brute_force,
    informed_brute_force,
    resume,
    run_rounds,
    compare_strategies,
)

__all__ = [
    "types",
    "__version__",
    "NOT_GIVEN",
    "NotGiven",

    # Configuration
    "Config",
    "NetworkConfig",
    "load_config",

    # Algebra
    "UPoly",
    "RationalFunction",
    "Polynomial",
    "substitute_linear",
    "evaluate_t",
    "pencil_family",

    # Ideals and Jacobian rings
    "Budget",
    "BudgetMeter",
    "GroebnerBasis",
    "buchberger",
    "GriffithsBasis",
    "JacobianRing",
    "RingCache",
    "is_smooth",
    "griffiths_basis",
    "express_in_ideal",

    # Connections
    "Pencil",
    "PoleForm",
    "ConnectionMatrix",
    "TranslateMatrix",
    "griffiths_dwork_reduce",
    "gm_connection_at",
    "translate_matrix",

    # Picard-Fuchs oracle
    "PicardFuchsOperator",
    "FirstOdeOutcome",
    "LabelStore",
    "first_ode",
    "check_specialization",
    "label_edge",
    "EdgeOracle",
    "SyntheticOracle",
    "AlgebraicOracle",
    "canonical_edge",

    # Dataset
    "VertexSet",
    "OrbitTable",
    "EdgeSet",
    "enumerate_fewnomials",
    "s4_orbits",
    "sample_orbit_representatives",
    "companion_neighbors",
    "build_edges",
    "split",
    "balance_oversample",

    # Features
    "psi",
    "psi_entropy",
    "matrix_stats",
    "edge_vector",
    "PCAModel",
    "pca_fit",
    "pca_transform",
    "feature_record",

    # Learning
    "NetworkSpec",
    "Network",
    "build_mlp",
    "build_cnn",
    "build_network",
    "TrainConfig",
    "train",
    "Confusion",
    "RocCurve",
    "evaluate",
    "roc",
    "EnsembleModel",
    "FeatureScorer",
    "train_ensemble",
    "ensemble_score",
    "Scorer",

    # Search
    "UnionFind",
    "ForestState",
    "extract_tree",
    "extract_path",
    "Checkpoint",
    "SearchProblem",
    "SearchResult",
    "attempt_edge",
    "queue_order",
    "brute_force",
    "informed_brute_force",
    "resume",
    "run_rounds",
    "compare_strategies",

    # Exceptions
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
