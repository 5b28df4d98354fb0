"""Tsallis relative alpha-entropies of coherence, the l1 norm and their orderings."""

from .errors import (
    AlphaOutOfRangeError,
    BadEnsembleError,
    CoherenceError,
    ConstructionFailedError,
    DegenerateIntervalError,
    DimensionMismatchError,
    IllConditionedBranchError,
    NoConvergenceError,
    NotHermitianError,
    NotNormalizedError,
    NotPositiveError,
    OutOfBlochDiskError,
    SupportMismatchError,
    TraceNotOneError,
    ValidationError,
)
from .hermitian import DensityMatrix, PureState, Spectrum, eigh, matrix_power, projector, validate_density
from .measures import (
    MeasureId,
    MeasureKind,
    MeasureValue,
    c2_entrywise,
    c_alpha,
    c_l1,
    c_l2,
    c_rel_entropy,
    evaluate,
    measure,
    nearest_incoherent,
    tsallis_divergence,
    tsallis_r,
    von_neumann_entropy,
)
from .qubit import (
    BlochVector,
    CheckMode,
    PureQubit,
    QubitParams,
    c1_qubit,
    c2_qubit,
    c_half_qubit,
    extremal_curves,
    extremal_states,
    monotonicity_check,
    r_half_qubit,
    rho_tz,
)
from .ordering import (
    ComparisonRecord,
    Family,
    RegionVerdict,
    Verdict,
    ViolationReport,
    classify_region,
    compare,
    scan_pure_qudit_pairs,
    scan_qubit_pairs,
)
from .channels import (
    IncoherentChannel,
    MonotonicityReport,
    check_c2a,
    check_c2b,
    check_c3_convexity,
    check_generalized_monotonicity,
    random_incoherent_channel,
)
from .registry import counterexample_registry, registry_states, reproduce

__version__ = "0.1.0"
