"""Relative divergence of grading functions on finite chains.

Grading functions are strictly increasing functions on a finite totally
ordered set. This package evaluates the relative divergence of one grading
function from another, maximizes it under pins and linear moment
constraints, and recovers the conditional probability formula as the
maximizer of a three-element instance.
"""

from .chain import (
    TAU_STRICT,
    Chain,
    GradingFunction,
    IncrementVector,
    from_increments,
    increments,
    indexing_gf,
    make_chain,
    make_grading_function,
    total_range,
)
from .conditional import (
    CpInstance,
    CpReport,
    build_cp_problem,
    conditional_probability,
    q,
    q_double_prime,
    q_prime,
    verify_cp_identity,
)
from .divergence import (
    cdf_gf,
    divergence_gradient,
    relative_divergence,
    shannon_entropy,
)
from .errors import *  # noqa: F401,F403
from .solver import (
    MrdpProblem,
    SolveResult,
    grid_oracle,
    kkt_residuals,
    solve_constrained,
    solve_pinned,
)

__version__ = "0.1.0"
