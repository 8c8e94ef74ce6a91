"""Exact minimization of the separable Tikhonov functional.

With ``B = diag(w)`` on ``V = l_a`` and misfit exponent ``sigma = a`` the
functional

    T(u) = ||A u - v||_a^sigma + alpha * R_p(u)

splits into independent scalar problems

    f(t) = |w t - v|^sigma + alpha |t|^p,

each of which is solved to global optimality, including the combinatorial
``p = 0`` case and the nonconvex range ``0 < p < 1``.

Scalar reduction used by the solver (``v > 0``, ``x = w t / v`` in [0, 1]):

    f / v^sigma = (1 - x)^sigma + mu x^p,   mu = alpha w^-p v^(p - sigma).

In the logit variable ``r = log(x / (1 - x))`` the stationarity condition
reads ``K(r) = -(sigma - p) softplus(r) + (1 - p) r - log(mu p / sigma) = 0``.
``K`` is strictly decreasing for ``p >= 1``. For ``0 < p < 1`` it is concave
with its peak at ``x = (1 - p) / (sigma - p)``; the only candidate local
minimizer is the root right of the peak, which is then compared against
``t = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from .errors import InvalidInputError, NotSeparableError, SolverError
from .model import RegProblem, apply_operator
from .sequences import (
    BoundCheck,
    SpaceParams,
    TruncatedSequence,
    _holds,
    _values,
    norm_s,
    penalty_rp,
)
from .thresholding import hard_threshold

#: Smallest noise level accepted by the log-space exponent helpers.
MIN_DELTA = 1e-12


@dataclass(frozen=True)
class RegConfig:
    """Regularization parameter plus solver settings.

    ``solver_grid`` is the iteration budget of the bracketed 1-D root
    search; ``tol_1d`` its relative tolerance in the logit variable.
    """

    params: SpaceParams
    alpha: float
    solver_grid: int = 256
    tol_1d: float = 1e-12

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise InvalidInputError(f"alpha must be finite and > 0, got {self.alpha}")
        if not self.tol_1d > 0:
            raise InvalidInputError("tol_1d must be > 0")
        if int(self.solver_grid) != self.solver_grid or self.solver_grid < 64:
            raise InvalidInputError("solver_grid must be an integer >= 64")
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass(frozen=True, eq=False)
class RegSolution:
    u_reg: TruncatedSequence
    objective: float
    misfit: float
    penalty: float
    support_size: int

    def __eq__(self, other):
        if not isinstance(other, RegSolution):
            return NotImplemented
        return (
            self.u_reg == other.u_reg
            and (self.objective, self.misfit, self.penalty, self.support_size)
            == (other.objective, other.misfit, other.penalty, other.support_size)
        )

    def to_dict(self) -> dict:
        return {
            "u_reg": self.u_reg.tolist(),
            "objective": self.objective,
            "misfit": self.misfit,
            "penalty": self.penalty,
            "support_size": self.support_size,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegSolution":
        return cls(
            u_reg=TruncatedSequence(data["u_reg"]),
            objective=float(data["objective"]),
            misfit=float(data["misfit"]),
            penalty=float(data["penalty"]),
            support_size=int(data["support_size"]),
        )


def _check_separable(problem: RegProblem, config: RegConfig):
    if config.params.sigma != problem.op.a:
        raise NotSeparableError(
            f"sigma={config.params.sigma} differs from image index a={problem.op.a}"
        )


def _misfit_and_penalty(problem: RegProblem, u, config: RegConfig) -> Tuple[float, float]:
    u = TruncatedSequence(_values(u))
    if u.n != problem.n:
        raise InvalidInputError(f"length mismatch: problem has {problem.n}, u has {u.n}")
    residual = apply_operator(problem.op, u) - problem.v_noisy
    misfit = norm_s(residual, problem.op.a) ** config.params.sigma
    penalty = config.alpha * penalty_rp(u, config.params.p)
    return misfit, penalty


def tikhonov_value(problem: RegProblem, u, config: RegConfig) -> float:
    """``||A u - v_noisy||_a^sigma + alpha R_p(u)``."""
    misfit, penalty = _misfit_and_penalty(problem, u, config)
    return misfit + penalty


def _softplus(r):
    return np.logaddexp(0.0, r)


def _expand(K, r, log_c, sign, want_positive):
    # walk r in direction `sign` until K has the wanted sign
    gap = np.ones_like(r)
    for _ in range(2100):
        vals = K(r, log_c)
        bad = ~(vals > 0) if want_positive else ~(vals < 0)
        if not bad.any():
            return r
        r = np.where(bad, r + sign * gap, r)
        gap = np.where(bad, 2.0 * gap, gap)
    raise SolverError("could not bracket the stationary point")


def _newton_decreasing(K, dK, lo, hi, log_c, tol, max_iter, index):
    """Safeguarded Newton for the root of a decreasing ``K`` in ``[lo, hi]``."""
    r = hi.copy()
    done = np.zeros(r.shape, dtype=bool)
    for _ in range(max_iter):
        kr = K(r, log_c)
        pos = kr > 0
        lo = np.where(pos, r, lo)
        hi = np.where(pos, hi, r)
        slope = dK(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            r_new = r - kr / slope
        outside = ~((r_new > lo) & (r_new < hi)) | ~(slope < 0)
        r_new = np.where(outside, 0.5 * (lo + hi), r_new)
        scale = tol * np.maximum(1.0, np.abs(r))
        converged = (kr == 0) | (np.abs(r_new - r) <= scale) | (hi - lo <= scale)
        r = np.where(done | (kr == 0), r, r_new)
        done |= converged
        if done.all():
            return r
    bad = int(index[np.flatnonzero(~done)[0]]) if index is not None else None
    raise SolverError(f"1-D search did not converge in {max_iter} iterations", coordinate=bad)


def _prox_abs(av, w, alpha, p, sigma, tol, max_iter, index=None):
    """Minimizer magnitudes for nonnegative data ``av``; vectorized."""
    av = np.asarray(av, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    t = np.zeros_like(av)
    if p == 0:
        keep = av ** sigma > alpha  # tie goes to the sparser candidate
        t[keep] = av[keep] / w[keep]
        return t

    nz = np.flatnonzero(av > 0)
    if nz.size == 0:
        return t
    a_nz, w_nz = av[nz], w[nz]
    idx = nz if index is None else index[nz]
    log_mu = math.log(alpha) - p * np.log(w_nz) + (p - sigma) * np.log(a_nz)
    log_c = log_mu + math.log(p) - math.log(sigma)

    if p == 1:
        z = log_c / (sigma - 1.0)  # log(1 - x) at the stationary point
        x = np.where(z < 0, -np.expm1(np.minimum(z, 0.0)), 0.0)
        t[nz] = a_nz * x / w_nz
        return t

    def K(r, lc):
        return -(sigma - p) * _softplus(r) + (1.0 - p) * r - lc

    def dK(r):
        return -(sigma - p) * expit(r) + (1.0 - p)

    if p < 1:
        x_peak = (1.0 - p) / (sigma - p)
        r_peak = math.log(x_peak / (1.0 - x_peak))
        active = K(np.full_like(log_c, r_peak), log_c) > 0
    else:
        active = np.ones(log_c.shape, dtype=bool)
    x = np.zeros_like(a_nz)
    sel = np.flatnonzero(active)
    if sel.size:
        lc = log_c[sel]
        r_right = -lc / (sigma - 1.0)
        if p < 1:
            lo = np.full_like(lc, r_peak)
            hi = np.maximum(r_peak, r_right) + 1.0
        else:
            r_left = -lc / (p - 1.0)
            lo = _expand(K, np.minimum(r_left, r_right) - 1.0, lc, -1.0, True)
            hi = np.maximum(r_left, r_right)
        hi = _expand(K, hi, lc, 1.0, False)
        r = _newton_decreasing(K, dK, lo, hi, lc, tol, max_iter, idx[sel])
        x_sel = expit(r)
        if p < 1:
            # global comparison against t = 0, where f / v^sigma = 1
            h = np.exp(-sigma * _softplus(r)) + np.exp(log_mu[sel] - p * _softplus(-r))
            x_sel = np.where(h < 1.0, x_sel, 0.0)
        x[sel] = x_sel
    t[nz] = a_nz * x / w_nz
    return t


def _validate_scalar_inputs(w, alpha, p, sigma):
    if not (w > 0 and math.isfinite(w)):
        raise InvalidInputError("w must be finite and > 0")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidInputError("alpha must be finite and > 0")
    if not (p >= 0 and math.isfinite(p)):
        raise InvalidInputError("p must be finite and >= 0")
    if not (sigma > 1 and math.isfinite(sigma)):
        raise InvalidInputError("sigma must be finite and > 1")


def prox_coordinate(v: float, w: float, alpha: float, p: float, sigma: float,
                    config: Optional[RegConfig] = None) -> float:
    """Global minimizer of ``|w t - v|^sigma + alpha |t|^p`` over real ``t``.

    ``|t|^0`` is read as the indicator of ``t != 0``. Ties between ``t = 0``
    and a nonzero candidate resolve to ``0``.
    """
    _validate_scalar_inputs(w, alpha, p, sigma)
    if not math.isfinite(v):
        raise InvalidInputError("v must be finite")
    tol = 1e-12 if config is None else config.tol_1d
    max_iter = 256 if config is None else int(config.solver_grid)
    mag = _prox_abs(np.array([abs(float(v))]), np.array([float(w)]), float(alpha), float(p),
                    float(sigma), tol, max_iter)
    return math.copysign(float(mag[0]), v) if mag[0] != 0 else 0.0


def solve(problem: RegProblem, config: RegConfig) -> RegSolution:
    """Global minimizer of the Tikhonov functional in the separable regime."""
    _check_separable(problem, config)
    params = config.params
    v = problem.v_noisy.entries
    w = problem.op.weights.entries
    mag = _prox_abs(
        np.abs(v), w, config.alpha, params.p, params.sigma,
        config.tol_1d, int(config.solver_grid), index=np.arange(v.size),
    )
    u_reg = TruncatedSequence(np.where(mag != 0, np.copysign(mag, v), 0.0))
    misfit, penalty = _misfit_and_penalty(problem, u_reg, config)
    return RegSolution(
        u_reg=u_reg,
        objective=misfit + penalty,
        misfit=misfit,
        penalty=penalty,
        support_size=int(np.count_nonzero(u_reg.entries)),
    )


def _log_delta(delta: float) -> float:
    if not (math.isfinite(delta) and delta >= MIN_DELTA):
        raise InvalidInputError(f"delta must be finite and >= {MIN_DELTA}, got {delta}")
    return math.log(delta)


def alpha_apriori(delta: float, params: SpaceParams) -> float:
    """``alpha = delta^(sigma + (q - p) a / (a - q))``."""
    exponent = params.sigma + (params.q - params.p) * params.a / (params.a - params.q)
    return math.exp(exponent * _log_delta(delta))


def gamma_rates(params: SpaceParams) -> Tuple[float, float]:
    """Error rate exponent and penalty growth exponent.

    ``gamma1 = (a / tau) (tau - q) / (a - q)``,
    ``gamma2 = (q - p) a / (a - q)``.
    """
    p, q, tau, a = params.p, params.q, params.tau, params.a
    gamma1 = (a / tau) * (tau - q) / (a - q)
    gamma2 = (q - p) * a / (a - q)
    return gamma1, gamma2


def post_threshold(delta: float, params: SpaceParams) -> float:
    """``beta_delta = delta^(a / (a - q))``."""
    return math.exp(params.a / (params.a - params.q) * _log_delta(delta))


def post_process(u_reg, delta: float, params: SpaceParams) -> TruncatedSequence:
    """Hard-threshold a regularized solution at ``beta_delta``."""
    return hard_threshold(u_reg, post_threshold(delta, params))


def bound_scales(alpha: float, delta: float, params: SpaceParams) -> dict:
    """Constant-free right-hand sides of the three a priori bounds.

    ``objective``: ``alpha^kappa + delta^sigma``;
    ``error_a``: ``alpha^((a - q)/N) + delta``;
    ``penalty``: ``alpha^(kappa - 1) + delta^sigma / alpha``.
    """
    la, ld = math.log(alpha), _log_delta(delta)
    kappa, sigma = params.kappa, params.sigma
    return {
        "objective": math.exp(kappa * la) + math.exp(sigma * ld),
        "error_a": math.exp((params.a - params.q) / params.N * la) + delta,
        "penalty": math.exp((kappa - 1.0) * la) + math.exp(sigma * ld - la),
    }


def tikfun_bound_check(problem: RegProblem, solution: RegSolution, config: RegConfig,
                       c_cal: float) -> BoundCheck:
    """``T(u_reg) <= c_cal (alpha^kappa + delta^sigma)``."""
    rhs = c_cal * bound_scales(config.alpha, problem.delta, config.params)["objective"]
    return BoundCheck(solution.objective, rhs, _holds(solution.objective, rhs))


def error_bound_check(problem: RegProblem, solution: RegSolution, config: RegConfig,
                      c_cal: float) -> BoundCheck:
    """``||u_reg - u_dagger||_a <= c_cal (alpha^((a-q)/N) + delta)``."""
    lhs = norm_s(solution.u_reg - problem.u_dagger, config.params.a)
    rhs = c_cal * bound_scales(config.alpha, problem.delta, config.params)["error_a"]
    return BoundCheck(lhs, rhs, _holds(lhs, rhs))


def penalty_bound_check(problem: RegProblem, solution: RegSolution, config: RegConfig,
                        c_cal: float) -> BoundCheck:
    """``R_p(u_reg) <= c_cal (alpha^(kappa-1) + delta^sigma / alpha)``."""
    lhs = penalty_rp(solution.u_reg, config.params.p)
    rhs = c_cal * bound_scales(config.alpha, problem.delta, config.params)["penalty"]
    return BoundCheck(lhs, rhs, _holds(lhs, rhs))


def calibrate_constant(pilot_ratios, factor: float = 2.0) -> float:
    """Empirical stand-in for an existential constant: ``factor * max ratio``."""
    ratios = [float(r) for r in pilot_ratios]
    if not ratios or not all(math.isfinite(r) and r >= 0 for r in ratios):
        raise InvalidInputError("pilot ratios must be a non-empty list of finite values >= 0")
    return factor * max(ratios)
