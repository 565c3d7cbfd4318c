"""Exact tools for polynomial maps with symmetric Jacobian patterns."""
from .exactnum import HALF_SQRT2, I, I_SQRT2, ONE, SQRT2, ZERO, Scalar, as_scalar
from .linalg import PolyMatrix, ScalarMatrix
from .multipoly import Poly, TermLimitError
from .polymap import (
    FormalInverse,
    KellerFlags,
    PolyMap,
    compose,
    formal_inverse,
    gradient,
    hessian,
    is_keller,
    jacobian,
    keller_nilpotency,
    linear_conjugate,
    power_map,
    quasi_translation_check,
)
from .sympattern import (
    CATALOG_NAMES,
    InstanceSpec,
    Pattern,
    SignedConstraint,
    ZeroSpaceError,
    classify_map,
    forced_zeros,
    generate_instance,
    pattern_build,
    pattern_classify,
    pattern_holds,
    pattern_space,
)
from .reductions import (
    ReductionError,
    ReductionReport,
    center_decompose,
    djc_pair,
    djc_split,
    dsjc_stabilize,
    meng_extend,
    meng_extend_dp,
    power_linear_even,
    realify,
    rsjc_dsjc_conj,
    sjc_rsjc_conj,
)
from .dependence import (
    DependenceWitness,
    PlanarHessianForm,
    nred_pad,
    planar_hessian_decompose,
    solve_dependence,
)
from .harness import VerifyReport, verify_theorem

__version__ = "0.1.0"
