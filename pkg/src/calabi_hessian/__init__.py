"""Symmetric reduction of the complex (k, l)-Hessian equation on projective bundles.

The equation becomes a polynomial boundary-value problem ``F(x, y(x)) = 0``,
``y(0) = 0``, ``y(b) = q``; this package checks the positivity criteria that
predict solvability and constructs the solution curve.
"""

from .criteria import CriteriaReport, check_Dinf, check_P0, classify
from .errors import (
    ConeViolation,
    DegenerateClass,
    InvalidArgument,
    OracleBreakdown,
    RetryWithSmallerEpsilon,
    SeedNotFound,
    SingularInput,
)
from .polynomials import (
    BivariatePolynomial,
    CalabiParams,
    MuValue,
    build_F,
    build_F_chain,
    build_G,
    compute_mu,
    eval_and_partials,
    intersection_ratio,
    verify_dy_identity,
)
from .solver import (
    SeedResult,
    SolutionCurve,
    continue_curve,
    rk4_oracle,
    seed_chain,
    seed_slope,
    solve,
    verify_solution,
)
from .symmetric import (
    EigenVector,
    hessian_quotient,
    in_admissible_cone,
    newton_defect,
    sigma,
    structured_eigenvector,
    uniform_q_positive,
)

__version__ = "0.1.0"
