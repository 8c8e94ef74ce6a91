"""Brute-force ground truth for the separable solver.

Deliberately shares no minimization code with :mod:`seqtik.tikhonov`: it
scans a dense grid in the original variable ``t`` and polishes the best grid
point with a golden-section pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidInputError
from .model import RegProblem
from .sequences import TruncatedSequence

MAX_EXHAUSTIVE_N = 8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    points: int = 4001

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise InvalidInputError(f"degenerate grid [{self.lo}, {self.hi}]")
        if self.points < 1000:
            raise InvalidInputError("grid needs at least 1000 points")

    @classmethod
    def covering(cls, v: float, w: float, points: int = 4001) -> "GridSpec":
        """Grid over ``[min(0, v/w) - |v/w|, max(0, v/w) + |v/w|]``."""
        t0 = v / w
        half = abs(t0) if t0 != 0 else 1.0
        return cls(min(0.0, t0) - half, max(0.0, t0) + half, points)


def _objective(t, v, w, alpha, p, sigma):
    t = np.asarray(t, dtype=float)
    if p == 0:
        pen = (t != 0).astype(float)
    else:
        pen = np.abs(t) ** p
    return np.abs(w * t - v) ** sigma + alpha * pen


def _golden(f, lo, hi, iters=200):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if hi - lo <= 1e-15 * max(1.0, abs(lo), abs(hi)):
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return c if fc <= fd else d


def oracle_prox(v: float, w: float, alpha: float, p: float, sigma: float,
                grid: Optional[GridSpec] = None) -> float:
    """Dense-grid minimizer of ``|w t - v|^sigma + alpha |t|^p``."""
    if p == 0:
        # two candidates: t = 0 and the exact data fit
        return v / w if abs(v) ** sigma > alpha else 0.0
    if v == 0:
        return 0.0
    grid = grid or GridSpec.covering(v, w)
    scale = max(abs(grid.lo), abs(grid.hi))
    uniform = np.linspace(grid.lo, grid.hi, grid.points)
    near_zero = scale * np.logspace(-14, 0, grid.points // 2)
    ts = np.unique(np.concatenate([uniform, near_zero, -near_zero, [0.0, v / w]]))
    ts = ts[(ts >= grid.lo) & (ts <= grid.hi)]
    values = _objective(ts, v, w, alpha, p, sigma)
    i = int(np.argmin(values))
    best_t, best_f = float(ts[i]), float(values[i])

    lo = float(ts[max(i - 1, 0)])
    hi = float(ts[min(i + 1, ts.size - 1)])
    if hi > lo:
        def f(t):
            return float(_objective(t, v, w, alpha, p, sigma))
        t_ref = _golden(f, lo, hi)
        if f(t_ref) < best_f:
            best_t = t_ref
    return best_t


def oracle_tikhonov(problem: RegProblem, config, grid_points: int = 4001) -> Tuple[TruncatedSequence, float]:
    """Coordinate-wise oracle minimization for tiny problems (``n <= 8``).

    ``config`` supplies ``params`` (``p``, ``sigma``) and ``alpha``. The
    returned value is recomputed here rather than through the solver module.
    """
    n = problem.n
    if n > MAX_EXHAUSTIVE_N:
        raise InvalidInputError(f"oracle_tikhonov is exhaustive; n={n} exceeds {MAX_EXHAUSTIVE_N}")
    p, sigma, alpha = config.params.p, config.params.sigma, config.alpha
    if sigma != problem.op.a:
        raise InvalidInputError("the oracle relies on separability (sigma == a)")
    v = problem.v_noisy.entries
    w = problem.op.weights.entries
    t = np.array([
        oracle_prox(float(v[k]), float(w[k]), alpha, p, sigma,
                    GridSpec.covering(float(v[k]), float(w[k]), grid_points))
        for k in range(n)
    ])
    value = float(np.sum(_objective(t, v, w, alpha, p, sigma)))
    return TruncatedSequence(t), value
