"""Wave-particle duality measures, complementarity relations, and the
entanglement monotones they induce, with a numerical convex-roof extension
and machine checks of the standard measure-reliability criteria."""

from .criteria import (
    CriterionReport,
    TEST_DOUBLES,
    check_c1_continuity,
    check_c2_permutation,
    check_c3_c4_extremes,
    check_c5_transfer,
    check_c6_convexity,
    double_pair,
    full_audit,
)
from .measures import (
    EntropyReport,
    MEASURES,
    MeasurePair,
    c_hs,
    c_l1,
    c_re,
    c_wy,
    entropy_report,
    get_measure,
    get_pair,
    p_hs,
    p_l1,
    p_vn,
    registry,
    shannon_entropy,
)
from .monotones import (
    MONOTONES,
    MonotoneValue,
    check_local_unitary_invariance,
    check_schur_concavity,
    get_monotone,
    monotone_pure,
    s_l,
    s_vn,
    w_l1,
    w_wy,
    wootters_concurrence,
)
from .relations import (
    CSV_HEADER,
    RelationReport,
    check_complete,
    check_incomplete,
)
from .roof import (
    EnsembleParameterization,
    RankExceedsEnsembleSize,
    RoofConfig,
    RoofResult,
    convex_roof_estimate,
    decode_ensemble,
    entanglement_of_formation_oracle,
    tangle_oracle,
)
from .sampling import (
    SeededStream,
    ginibre_density,
    haar_bipartite,
    haar_pure,
    haar_unitary,
    random_simplex,
)
from .states import (
    BipartitePureState,
    DEFAULT_TOLERANCES,
    DensityMatrix,
    LengthMismatch,
    NotHermitian,
    NotPositive,
    NotUnitTrace,
    ProbabilityVector,
    PureStateVector,
    SchmidtDecomposition,
    StateValidationError,
    Tolerances,
    majorizes,
    partial_trace_B,
    psd_sqrt,
    purify,
    schmidt_decompose,
    validate_density_matrix,
)
from .stateio import StateFileError, load_state, parse_state, save_state, state_to_json

__version__ = "0.1.0"
