"""kellerlab: exact tools for polynomial endomorphisms.

Everything runs over exact coefficient fields (arbitrary-precision rationals
or integers modulo a prime): polynomial maps and their Jacobians, the Keller
condition, bounded formal inversion with sharp degree bounds for power-linear
maps, kernel-based reductions, and collinear-collision certificates over
prime fields.
"""

__version__ = "0.1.0"

from .errors import (
    ArityMismatch,
    BadIndex,
    BadSubInverse,
    BadVariable,
    BudgetExceeded,
    DependenceViolation,
    DependentInput,
    DivisorNotUnit,
    FieldMismatch,
    InconsistentReduction,
    KellerlabError,
    NonSquare,
    NotHomogeneous,
    NotInvertibleUpToBound,
    NotNormalized,
    NotStrictlyLowerTriangular,
    ParseError,
    PreconditionError,
    PreconditionFailed,
    SingularLinearPart,
    SingularMatrix,
    TheoremViolation,
    ZeroDirection,
)
from .field_linalg import (
    Field,
    Fp,
    Matrix,
    PrimeField,
    QQ,
    Rationals,
    complete_to_basis,
    generalized_vandermonde,
    is_prime,
    parse_scalar,
)
from .mpoly import MPoly, UniPoly, parse, rational_roots, render
from .polymap import PolyMap, PolyMatrix, euler_check, hadamard_power, power_linear
from .inversion import (
    AffineNormalization,
    InverseResult,
    VERDICT_NOT_UP_TO_BOUND,
    VERDICT_POLYNOMIAL,
    extend_inverse,
    formal_inverse,
    inverse_degree,
    invert_polymap,
    is_normalized,
    normalize_affine,
    triangular_inverse,
    verify_inverse,
)
from .reduction import (
    DegreeBoundReport,
    KernelReduction,
    constant_kernel,
    degree_bound_report,
    kernel_conjugate,
    pair_reduction,
)
from .collinear import (
    CollisionWitness,
    DEFAULT_COLLISION_BUDGET,
    LineData,
    LineInjectivity,
    RankDropResult,
    collision_search,
    find_rank_drop,
    verify_coefficient_rank,
    line_injectivity,
    line_restriction,
    verify_collision_obstruction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
