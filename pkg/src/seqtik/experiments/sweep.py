"""Noise-level sweeps under the a priori parameter choice and slope fits."""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidInputError, SolverError
from ..model import TRUTH_KINDS, gen_truth, make_problem, random_operator, truth_tail_norm
from ..sequences import SpaceParams, norm_s, penalty_rp
from ..tikhonov import (
    RegConfig,
    alpha_apriori,
    bound_scales,
    gamma_rates,
    post_process,
    solve,
)

log = logging.getLogger(__name__)

DEFAULT_DELTAS = tuple(float(d) for d in np.geomspace(1e-1, 1e-4, 8))
TAIL_FACTOR = 1e-2
FINITE_NOTE = (
    "finite truncation: the diagonal operator has closed range at finite n, "
    "so this run simulates the ill-posed scheme rather than realizing it"
)


@dataclass(frozen=True)
class SweepConfig:
    params: SpaceParams
    truth_kind: str = "power-decay"
    n: Optional[int] = None
    deltas: Tuple[float, ...] = DEFAULT_DELTAS
    trials_per_delta: int = 5
    seed: int = 0
    post_process: bool = False
    decay_margin: float = 0.2
    sparsity: int = 10
    max_n: int = 2 ** 14

    def __post_init__(self):
        deltas = tuple(float(d) for d in self.deltas)
        object.__setattr__(self, "deltas", deltas)
        if len(deltas) < 3:
            raise InvalidInputError("a sweep needs at least 3 noise levels")
        if not all(0 < d <= 1 for d in deltas):
            raise InvalidInputError("noise levels must lie in (0, 1]")
        if not all(a > b for a, b in zip(deltas, deltas[1:])):
            raise InvalidInputError("noise levels must be strictly decreasing")
        if self.truth_kind not in TRUTH_KINDS:
            raise InvalidInputError(f"unknown truth kind {self.truth_kind!r}")
        if self.trials_per_delta < 1:
            raise InvalidInputError("trials_per_delta must be >= 1")
        if self.seed < 0:
            raise InvalidInputError("seed must be >= 0")
        if self.n is not None and self.n < 1:
            raise InvalidInputError("n must be >= 1")

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["params"] = self.params.to_dict()
        out["deltas"] = list(self.deltas)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidInputError(f"unknown config fields: {sorted(unknown)}")
        if "params" not in data:
            raise InvalidInputError("config needs a 'params' object")
        kwargs = dict(data)
        kwargs["params"] = SpaceParams.from_dict(data["params"])
        if "deltas" in kwargs:
            kwargs["deltas"] = tuple(kwargs["deltas"])
        return cls(**kwargs)


@dataclass(frozen=True)
class SweepRow:
    """Per-noise-level medians over the trials."""

    delta: float
    alpha: float
    err_tau: float
    err_a: float
    penalty_rp: float
    support_size: float
    objective: float
    post_err_tau: Optional[float] = None
    post_support: Optional[float] = None


@dataclass
class SweepReport:
    rows: List[SweepRow]
    slopes: Dict[str, Optional[float]]
    predicted: Dict[str, float]
    metadata: dict
    wall_time: Optional[float] = field(default=None, compare=False)

    def column(self, name: str) -> List[Optional[float]]:
        return [getattr(row, name) for row in self.rows]

    def to_dict(self) -> dict:
        # wall time stays out so that equal configs give byte-identical JSON
        return {
            "rows": [{f.name: getattr(r, f.name) for f in fields(SweepRow)} for r in self.rows],
            "slopes": dict(self.slopes),
            "predicted": dict(self.predicted),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepReport":
        return cls(
            rows=[SweepRow(**r) for r in data["rows"]],
            slopes=dict(data["slopes"]),
            predicted=dict(data["predicted"]),
            metadata=dict(data["metadata"]),
        )


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares line through ``(ln x, ln y)``: slope, intercept, r^2."""
    if len(xs) != len(ys):
        raise InvalidInputError("xs and ys differ in length")
    if len(xs) < 3:
        raise InvalidInputError("need at least 3 points for a slope fit")
    if not all(x > 0 for x in xs) or not all(y > 0 for y in ys):
        raise InvalidInputError("slope fits need strictly positive data")
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    m = len(lx)
    mx, my = math.fsum(lx) / m, math.fsum(ly) / m
    sxx = math.fsum((a - mx) ** 2 for a in lx)
    if sxx == 0:
        raise InvalidInputError("xs must not all be equal")
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(lx, ly))
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = math.fsum((b - (intercept + slope * a)) ** 2 for a, b in zip(lx, ly))
    ss_tot = math.fsum((b - my) ** 2 for b in ly)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2


def derive_seed(seed: int, *tags: int) -> int:
    """Independent 32-bit seed for a (seed, tag, ...) cell."""
    return int(np.random.SeedSequence([seed, *tags]).generate_state(1)[0])


def resolve_truncation(config: SweepConfig) -> Tuple[int, float, bool]:
    """Pick ``n`` and report the truth tail ``||u_{k>n}||_tau``.

    Automatic choice: the smallest power of two (at least 64 and at least
    the sparsity) whose tail is below ``1e-2 * min(deltas)``, capped at
    ``max_n``. When the cap is hit the run proceeds and the report flags it.
    """
    target = TAIL_FACTOR * min(config.deltas)

    def tail(n):
        return truth_tail_norm(config.truth_kind, n, config.params, config.params.tau,
                               config.decay_margin)

    if config.n is not None:
        n = config.n
    else:
        n = 64
        while n < config.sparsity:
            n *= 2
        while n < config.max_n and not tail(n) < target:
            n *= 2
        n = min(n, max(config.max_n, 64))
    t = tail(n)
    ok = t < target
    if not ok:
        log.warning("truncation n=%d leaves a truth tail %.3g >= %.3g", n, t, target)
    return n, t, ok


_ROW_FIELDS = ("err_tau", "err_a", "penalty_rp", "support_size", "objective",
               "post_err_tau", "post_support")


def _median(values):
    if values[0] is None:
        return None
    return float(np.median(np.array(values, dtype=np.float64)))


def _safe_slope(deltas, values, label):
    if any(v is None for v in values):
        return None
    if not all(v > 0 for v in values):
        log.warning("slope %s skipped: non-positive values", label)
        return None
    return fit_slope(deltas, values)[0]


def run_sweep(config: SweepConfig, threads: int = 1) -> SweepReport:
    """Solve one seeded problem family over all noise levels.

    Truth and operator are fixed per config; each (delta, trial) cell draws
    its own noise. Cells may run on several threads; results are assembled
    in fixed (delta, trial) order, so the report does not depend on
    ``threads``.
    """
    if threads < 1:
        raise InvalidInputError("threads must be >= 1")
    start = time.perf_counter()
    params = config.params
    n, tail, tail_ok = resolve_truncation(config)
    op = random_operator(n, params.a, derive_seed(config.seed, 3))
    u_dagger = gen_truth(config.truth_kind, n, params, config.decay_margin,
                         derive_seed(config.seed, 2), config.sparsity)

    def run_cell(cell):
        i, j = cell
        delta = config.deltas[i]
        problem = make_problem(op, u_dagger, delta, derive_seed(config.seed, 1, i, j), params)
        reg = RegConfig(params, alpha_apriori(delta, params))
        try:
            sol = solve(problem, reg)
        except SolverError as exc:
            exc.delta, exc.trial = delta, j
            raise
        err = sol.u_reg - u_dagger
        out = {
            "err_tau": norm_s(err, params.tau),
            "err_a": norm_s(err, params.a),
            "penalty_rp": penalty_rp(sol.u_reg, params.p),
            "support_size": float(sol.support_size),
            "objective": sol.objective,
            "post_err_tau": None,
            "post_support": None,
        }
        if config.post_process:
            post = post_process(sol.u_reg, delta, params)
            out["post_err_tau"] = norm_s(post - u_dagger, params.tau)
            out["post_support"] = float(np.count_nonzero(post.entries))
        return out

    cells = [(i, j) for i in range(len(config.deltas)) for j in range(config.trials_per_delta)]
    if threads == 1:
        results = [run_cell(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_cell, cells))

    rows = []
    k = config.trials_per_delta
    for i, delta in enumerate(config.deltas):
        chunk = results[i * k:(i + 1) * k]
        medians = {name: _median([c[name] for c in chunk]) for name in _ROW_FIELDS}
        rows.append(SweepRow(delta=delta, alpha=alpha_apriori(delta, params), **medians))

    deltas = list(config.deltas)
    col = {name: [getattr(r, name) for r in rows] for name in _ROW_FIELDS}
    slopes = {
        "slope_err_tau": _safe_slope(deltas, col["err_tau"], "err_tau"),
        "slope_err_a": _safe_slope(deltas, col["err_a"], "err_a"),
        "slope_penalty": _safe_slope(deltas, col["penalty_rp"], "penalty_rp"),
        "slope_support": _safe_slope(deltas, col["support_size"], "support_size"),
        "slope_post_err_tau": _safe_slope(deltas, col["post_err_tau"], "post_err_tau"),
        "slope_post_support": _safe_slope(deltas, col["post_support"], "post_support"),
    }
    gamma1, gamma2 = gamma_rates(params)
    metadata = {
        "seed": config.seed,
        "n": n,
        "params": params.to_dict(),
        "truth_kind": config.truth_kind,
        "decay_margin": config.decay_margin,
        "sparsity": config.sparsity,
        "trials_per_delta": config.trials_per_delta,
        "post_process": config.post_process,
        "d1": op.d1,
        "d2": op.d2,
        "tail_norm_tau": tail,
        "tail_target": TAIL_FACTOR * min(config.deltas),
        "tail_ok": tail_ok,
        "note": FINITE_NOTE,
    }
    return SweepReport(rows, slopes, {"gamma1": gamma1, "gamma2": gamma2}, metadata,
                       wall_time=time.perf_counter() - start)


def bound_ratios(report: SweepReport, params: SpaceParams) -> Dict[str, List[float]]:
    """Observed ``lhs / (constant-free rhs)`` of the a priori bounds per row.

    ``objective``: minimum value vs ``alpha^kappa + delta^sigma``;
    ``error_a``: ``||u - u_dagger||_a`` vs ``alpha^((a-q)/N) + delta``;
    ``penalty``: ``R_p(u)`` vs ``alpha^(kappa-1) + delta^sigma / alpha``.
    """
    out = {"objective": [], "error_a": [], "penalty": []}
    for row in report.rows:
        scales = bound_scales(row.alpha, row.delta, params)
        out["objective"].append(row.objective / scales["objective"])
        out["error_a"].append(row.err_a / scales["error_a"])
        out["penalty"].append(row.penalty_rp / scales["penalty"])
    return out


def has_plateau(ratios: Sequence[float], window: int = 3, factor: float = 2.0) -> bool:
    """Ratios ordered by decreasing delta stay bounded: the max over the last
    ``window`` entries is at most ``factor`` times the max over the first."""
    if len(ratios) < window:
        raise InvalidInputError("not enough ratios for a plateau test")
    return max(ratios[-window:]) <= factor * max(ratios[:window])
