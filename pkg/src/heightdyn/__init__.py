"""Height expansion and contraction coefficients of dominant
endomorphisms, exact ample-cone arithmetic, and a Weil height machine
on products of projective spaces over Q."""

from .scalars import (
    FieldMismatchError,
    QuadraticNumber,
    as_scalar,
    format_scalar,
    parse_scalar,
    sign,
    sqrt_decompose,
)
from .lattice import (
    ConeInterval,
    DimensionMismatchError,
    DivisorClass,
    EmptyConeError,
    ExactnessError,
    LatticeError,
    OrthantCone,
    PicardLattice,
    QuadraticCone,
)
from .coefficients import (
    CoefficientError,
    CoefficientResult,
    GlobalMuConfig,
    GlobalMuResult,
    NotDominantError,
    PullbackMap,
    apply_pullback,
    compose,
    global_mu,
    mu1,
    mu2,
    polarization_check,
    seshadri_lower,
    validate_dominant_pullback,
)
from .heights import (
    BasePointError,
    MultiHomogeneousMap,
    MultiPoint,
    MultidegreeError,
    ProjectivePoint,
    SignatureError,
    ambient_height,
    coordinate_power_map,
    enumerate_points,
    enumerate_projective,
    evaluate,
    height_wrt,
    multidegree_matrix,
    normalize,
    weil_height,
)
from .dynamics import (
    DynamicsError,
    NorthcottReport,
    OrbitRecord,
    PreperiodicSearch,
    default_escape_ceiling,
    estimate_silverman_mu,
    find_preperiodic,
    orbit,
    preperiodic_height_bound,
    verify_weak_northcott,
)
from .products import (
    AdmissibilityCheck,
    BlockStructure,
    ClassificationError,
    NotBlockDiagonalError,
    PowerCoefficients,
    admissible_row,
    check_block_triangular,
    classify_dominant,
    diagonalization_power,
    int_matrix_power,
    power_coefficients,
)
from .documents import DocumentError, dump_document, parse_document
from .registry import CaseResult, ExampleCase, RegistryReport, example_cases, run_paper_examples

__version__ = "0.1.0"
