"""Small-height zeros of rational quadratic forms off a union of hyperplanes.

Given a quadratic form ``F`` and linear forms ``L_1, ..., L_M`` over Q,
together with the promise that some zero of ``F`` avoids every hyperplane
``L_i = 0``, the solvers construct such a zero whose height obeys explicit
bounds in ``H(F)`` and ``H(L_i)``, and every result is checked exactly.
"""

from .arith import (
    LinearForm,
    QuadraticForm,
    canonical_rep,
    eval_bilinear,
    eval_quadratic,
    parse_rational,
    primitive_rep,
    substitute_linear,
)
from .certify import SolveOptions, run_solve
from .constants import BoundReport, BoundValue, a_constant, b_constant, evaluate_bounds
from .documents import Instance, emit_instance, parse_instance
from .errors import (
    AnisotropicError,
    DimensionError,
    FormatError,
    NoSolutionError,
    PreconditionError,
    SearchTruncated,
    SmallZerosError,
    ZeroFormError,
)
from .heights import form_height, homogeneous_height, inhomogeneous_height
from .multi import MultiSolution, combine_case1, combine_case2, solve_multi
from .nonvanishing import Polynomial, nonvanishing_point_linear, nonvanishing_point_poly
from .oracle import find_witness, minimal_solution
from .single import (
    SingleSolution,
    lift_through_linear,
    reduce_by_linear,
    reflect,
    select_t,
    singular_reduction,
    solve_base_n1,
    solve_single,
)
from .verify import verify_certificate
from .zeros import is_singular_point, nonsingular_small_zero, small_zero

__version__ = "0.1.0"
