"""Hard thresholding and the auxiliary elements built from it."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ParameterOrderError
from .sequences import BoundCheck, SpaceParams, TruncatedSequence, _holds, _values, penalty_rp


@dataclass(frozen=True)
class ThresholdRule:
    """Threshold level ``beta > 0``."""

    beta: float

    def __post_init__(self):
        beta = float(self.beta)
        if not (math.isfinite(beta) and beta > 0):
            raise InvalidInputError(f"threshold level must be finite and > 0, got {self.beta}")
        object.__setattr__(self, "beta", beta)


def _level(rule) -> float:
    return rule.beta if isinstance(rule, ThresholdRule) else ThresholdRule(rule).beta


def hard_threshold(u, rule) -> TruncatedSequence:
    """Keep entries with ``|u_k| >= beta`` (boundary kept), zero the rest.

    ``rule`` may be a :class:`ThresholdRule` or a positive float.
    """
    beta = _level(rule)
    x = _values(u)
    return TruncatedSequence(np.where(np.abs(x) >= beta, x, 0.0))


def beta_of_alpha(alpha: float, params: SpaceParams) -> ThresholdRule:
    """``beta(alpha) = alpha^(a/N)``, evaluated in log space."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidInputError(f"alpha must be finite and > 0, got {alpha}")
    return ThresholdRule(math.exp(params.a / params.N * math.log(alpha)))


def auxiliary_element(u_dagger, alpha: float, params: SpaceParams) -> TruncatedSequence:
    """Hard-thresholded truth ``H_beta(alpha)(u_dagger)``."""
    return hard_threshold(u_dagger, beta_of_alpha(alpha, params))


def jackson_bound_check(u, rule, q: float, t: float) -> BoundCheck:
    """Approximation estimate ``||H_beta(u) - u||_t^t <= R_q(u) beta^(t - q)``."""
    if not (0 <= q <= t and t >= 1):
        raise ParameterOrderError(f"need 0 <= q <= t and t >= 1, got q={q}, t={t}")
    beta = _level(rule)
    x = _values(u)
    dropped = x[np.abs(x) < beta]
    lhs = math.fsum(np.abs(dropped) ** t)
    rhs = penalty_rp(x, q) * beta ** (t - q)
    return BoundCheck(lhs, rhs, _holds(lhs, rhs))


def bernstein_bound_check(u, rule, p: float, q: float) -> BoundCheck:
    """Inverse estimate ``R_p(H_beta(u)) <= R_q(u) beta^(-(q - p))``."""
    if not 0 <= p <= q:
        raise ParameterOrderError(f"need 0 <= p <= q, got p={p}, q={q}")
    beta = _level(rule)
    x = _values(u)
    lhs = penalty_rp(hard_threshold(x, beta), p)
    rhs = penalty_rp(x, q) * beta ** (p - q)
    return BoundCheck(lhs, rhs, _holds(lhs, rhs))
