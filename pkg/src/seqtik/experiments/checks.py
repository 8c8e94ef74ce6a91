"""Randomized verification suites: analytic inequalities and solver-vs-oracle.

Each suite returns a :class:`SuiteResult`; the CLI ``check`` and
``oracle-compare`` commands and the acceptance tests share them.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..model import DiagonalOperator, apply_operator, make_problem
from ..oracle import _objective, oracle_prox, oracle_tikhonov
from ..sequences import EPS_TOL, SpaceParams, TruncatedSequence, check_interpolation, norm_s
from ..thresholding import bernstein_bound_check, jackson_bound_check
from ..tikhonov import RegConfig, prox_coordinate, solve


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    seconds: float = 0.0
    examples: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    def record_failure(self, **info):
        self.failures += 1
        if len(self.examples) < 5:
            self.examples.append(info)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.cases} cases, {self.failures} failures, {self.seconds:.2f}s"

    def to_dict(self) -> dict:
        return {"name": self.name, "cases": self.cases, "failures": self.failures,
                "seconds": self.seconds, "passed": self.passed, "examples": self.examples}


def random_entries(rng: np.random.Generator, beta: float = None) -> np.ndarray:
    """Random vector with exact zeros, wide magnitudes and (optionally)
    entries placed exactly at ``+-beta``."""
    n = int(rng.integers(1, 41))
    x = rng.standard_normal(n) * 10.0 ** rng.uniform(-3, 1, size=n)
    x[rng.random(n) < 0.3] = 0.0
    if beta is not None:
        at_level = rng.random(n) < 0.15
        x[at_level] = beta * rng.choice([-1.0, 1.0], size=int(at_level.sum()))
    if rng.random() < 0.02:
        x[:] = 0.0
    return x


def _draw_index(rng, lo, hi, corner_lo=0.2, corner_hi=0.1):
    u = rng.random()
    if u < corner_lo:
        return lo
    if u < corner_lo + corner_hi:
        return hi
    return float(rng.uniform(lo, hi))


def interpolation_suite(cases: int = 10_000, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    res = SuiteResult("interpolation inequality")
    start = time.perf_counter()
    for _ in range(cases):
        tau = float(rng.uniform(1.0, 4.0))
        a = tau + float(rng.uniform(0.05, 4.0))
        p = 0.0 if rng.random() < 0.25 else float(rng.uniform(0.0, tau * 0.999))
        q = _draw_index(rng, p, tau)
        params = SpaceParams(p, q, tau, a, a)
        x = random_entries(rng)
        chk = check_interpolation(x, params)
        res.cases += 1
        if not chk.holds:
            res.record_failure(p=p, tau=tau, a=a, lhs=chk.lhs, rhs=chk.rhs)
    res.seconds = time.perf_counter() - start
    return res


def jackson_suite(cases: int = 10_000, seed: int = 1) -> SuiteResult:
    rng = np.random.default_rng(seed)
    res = SuiteResult("Jackson (approximation) estimate")
    start = time.perf_counter()
    for _ in range(cases):
        t = float(rng.uniform(1.0, 5.0))
        q = _draw_index(rng, 0.0, t)
        beta = float(10.0 ** rng.uniform(-3, 1))
        x = random_entries(rng, beta)
        chk = jackson_bound_check(x, beta, q, t)
        res.cases += 1
        if not chk.holds:
            res.record_failure(q=q, t=t, beta=beta, lhs=chk.lhs, rhs=chk.rhs)
    res.seconds = time.perf_counter() - start
    return res


def bernstein_suite(cases: int = 10_000, seed: int = 2) -> SuiteResult:
    rng = np.random.default_rng(seed)
    res = SuiteResult("Bernstein (inverse) estimate")
    start = time.perf_counter()
    for _ in range(cases):
        q = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.0, 4.0))
        p = _draw_index(rng, 0.0, q)
        beta = float(10.0 ** rng.uniform(-3, 1))
        x = random_entries(rng, beta)
        chk = bernstein_bound_check(x, beta, p, q)
        res.cases += 1
        if not chk.holds:
            res.record_failure(p=p, q=q, beta=beta, lhs=chk.lhs, rhs=chk.rhs)
    res.seconds = time.perf_counter() - start
    return res


def two_sided_suite(cases: int = 10_000, seed: int = 3) -> SuiteResult:
    rng = np.random.default_rng(seed)
    res = SuiteResult("two-sided operator estimate")
    start = time.perf_counter()
    for _ in range(cases):
        x = random_entries(rng)
        a = float(rng.uniform(1.05, 6.0))
        op = DiagonalOperator(TruncatedSequence(rng.uniform(0.5, 3.0, size=x.size)), a)
        u_norm = norm_s(x, a)
        image = norm_s(apply_operator(op, x), a)
        res.cases += 1
        lower_ok = op.d1 * u_norm <= image * (1 + EPS_TOL)
        upper_ok = image <= op.d2 * u_norm * (1 + EPS_TOL)
        if not (lower_ok and upper_ok):
            res.record_failure(a=a, d1=op.d1, d2=op.d2, norm=u_norm, image=image)
    res.seconds = time.perf_counter() - start
    return res


def inequality_suites(cases: int = 10_000, seed: int = 0) -> List[SuiteResult]:
    return [
        interpolation_suite(cases, seed),
        jackson_suite(cases, seed + 1),
        bernstein_suite(cases, seed + 2),
        two_sided_suite(cases, seed + 3),
    ]


def coordinate_oracle_suite(p: float, sigma: float, cases: int = 500, seed: int = 0,
                            tol_1d: float = 1e-12) -> SuiteResult:
    """Solver value never exceeds the grid-oracle value by more than
    ``tol_1d * (1 + |f_oracle|)``."""
    rng = np.random.default_rng([seed, int(p * 1000), int(sigma)])
    res = SuiteResult(f"coordinate solver vs oracle (p={p:g}, sigma=a={sigma:g})")
    start = time.perf_counter()
    for _ in range(cases):
        v = float(rng.standard_normal() * 10.0 ** rng.uniform(-2, 1))
        w = float(rng.uniform(0.5, 2.0))
        alpha = float(10.0 ** rng.uniform(-4, 1))
        t_s = prox_coordinate(v, w, alpha, p, sigma)
        t_o = oracle_prox(v, w, alpha, p, sigma)
        f_s = float(_objective(t_s, v, w, alpha, p, sigma))
        f_o = float(_objective(t_o, v, w, alpha, p, sigma))
        res.cases += 1
        if f_s > f_o + tol_1d * (1.0 + abs(f_o)):
            res.record_failure(v=v, w=w, alpha=alpha, t_solver=t_s, t_oracle=t_o,
                               f_solver=f_s, f_oracle=f_o)
    res.seconds = time.perf_counter() - start
    return res


_INSTANCE_PARAMS = (
    SpaceParams(0.0, 1.0, 1.5, 2.0, 2.0),
    SpaceParams(0.5, 1.0, 1.5, 2.0, 2.0),
    SpaceParams(1.0, 1.0, 1.5, 2.0, 2.0),
    SpaceParams(0.0, 1.0, 2.0, 4.0, 4.0),
    SpaceParams(0.5, 4.0 / 3.0, 2.0, 4.0, 4.0),
    SpaceParams(1.0, 4.0 / 3.0, 2.0, 4.0, 4.0),
)


def instance_oracle_suite(cases: int = 100, n: int = 6, seed: int = 0, rel_tol: float = 1e-6) -> SuiteResult:
    """Full solver objective matches :func:`oracle_tikhonov` within ``rel_tol``."""
    rng = np.random.default_rng([seed, 77])
    res = SuiteResult(f"full solver vs oracle_tikhonov (n={n})")
    start = time.perf_counter()
    for i in range(cases):
        params = _INSTANCE_PARAMS[i % len(_INSTANCE_PARAMS)]
        op = DiagonalOperator(TruncatedSequence(rng.uniform(1.0, 2.0, size=n)), params.a)
        u_dagger = rng.standard_normal(n) * (rng.random(n) < 0.7)
        delta = float(10.0 ** rng.uniform(-3, -0.5))
        problem = make_problem(op, u_dagger, delta, int(rng.integers(2 ** 31)), params)
        config = RegConfig(params, float(10.0 ** rng.uniform(-4, 0)))
        sol = solve(problem, config)
        _, oracle_value = oracle_tikhonov(problem, config)
        res.cases += 1
        scale = max(abs(oracle_value), math.ulp(1.0))
        if abs(sol.objective - oracle_value) > rel_tol * scale:
            res.record_failure(instance=i, solver=sol.objective, oracle=oracle_value)
    res.seconds = time.perf_counter() - start
    return res


def oracle_suites(seed: int = 0) -> List[SuiteResult]:
    out = [
        coordinate_oracle_suite(p, sigma, seed=seed)
        for sigma in (2.0, 4.0)
        for p in (0.0, 0.5, 1.0, 2.0)
    ]
    out.append(instance_oracle_suite(seed=seed))
    return out
