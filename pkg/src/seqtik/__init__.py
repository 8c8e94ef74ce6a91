"""Tikhonov regularization with l_p / l_0 penalties in sequence spaces.

Exact coordinate-wise minimizers for a diagonal model operator, the a
priori parameter choice and its rate exponents, hard thresholding for
auxiliary elements and post-processing, and sweep tooling that measures
empirical convergence slopes.
"""
from .errors import (
    DegenerateParametersError,
    InvalidInputError,
    NotSeparableError,
    ParameterOrderError,
    SeqtikError,
    SolverError,
)
from .model import (
    DiagonalOperator,
    RegProblem,
    apply_operator,
    gen_noise,
    gen_truth,
    make_problem,
    random_operator,
)
from .oracle import GridSpec, oracle_prox, oracle_tikhonov
from .sequences import (
    BoundCheck,
    SpaceParams,
    TruncatedSequence,
    check_interpolation,
    norm_s,
    penalty_rp,
    radon_riesz_probe,
)
from .thresholding import (
    ThresholdRule,
    auxiliary_element,
    bernstein_bound_check,
    beta_of_alpha,
    hard_threshold,
    jackson_bound_check,
)
from .tikhonov import (
    RegConfig,
    RegSolution,
    alpha_apriori,
    gamma_rates,
    post_process,
    prox_coordinate,
    solve,
    tikhonov_value,
)

__version__ = "0.1.0"
