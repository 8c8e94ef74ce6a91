"""Synthetic forward operators, true solutions and norm-calibrated noise.

The forward map is realized as ``A = B o E`` with ``E`` the embedding of
l_tau into l_a and ``B = diag(w)`` on ``V = l_a``. With ``d1 = min w`` and
``d2 = max w`` the two-sided estimate ``d1 ||u||_a <= ||Au||_V <= d2 ||u||_a``
holds exactly. At finite truncation this only simulates the scheme: any
finite section has closed range.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import zeta

from .errors import InvalidInputError
from .sequences import SpaceParams, TruncatedSequence, _values, as_sequence, norm_s

TRUTH_KINDS = ("power-decay", "sparse", "mixed")


@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    """``u -> (w_k u_k)_k`` with image norm ``||.||_a``."""

    weights: TruncatedSequence
    a: float

    def __post_init__(self):
        w = as_sequence(self.weights)
        if not np.all(w.entries > 0):
            raise InvalidInputError("operator weights must be strictly positive")
        if not (math.isfinite(self.a) and self.a > 0):
            raise InvalidInputError("image-space index a must be finite and > 0")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "a", float(self.a))

    @property
    def n(self) -> int:
        return self.weights.n

    @property
    def d1(self) -> float:
        return float(self.weights.entries.min())

    @property
    def d2(self) -> float:
        return float(self.weights.entries.max())

    def image_norm(self, v) -> float:
        """``||v||_V`` for ``V = l_a``."""
        return norm_s(v, self.a)

    def __eq__(self, other):
        if not isinstance(other, DiagonalOperator):
            return NotImplemented
        return self.a == other.a and self.weights == other.weights


def random_operator(n: int, a: float, seed: int, low: float = 1.0, high: float = 2.0) -> DiagonalOperator:
    """Diagonal operator with seeded weights drawn uniformly from ``[low, high]``."""
    if not 0 < low <= high:
        raise InvalidInputError("need 0 < low <= high for the weight range")
    rng = np.random.default_rng(seed)
    return DiagonalOperator(TruncatedSequence(rng.uniform(low, high, size=n)), a)


def apply_operator(op: DiagonalOperator, u) -> TruncatedSequence:
    x = _values(u)
    if x.size != op.n:
        raise InvalidInputError(f"length mismatch: operator has {op.n}, input has {x.size}")
    return TruncatedSequence(op.weights.entries * x)


def _decay_exponent(params: SpaceParams, decay_margin: float) -> float:
    if params.q == 0:
        raise InvalidInputError("power-decay truth needs q > 0")
    if not decay_margin > 0:
        raise InvalidInputError("decay_margin must be > 0")
    return 1.0 / params.q + decay_margin


def gen_truth(
    kind: str,
    n: int,
    params: SpaceParams,
    decay_margin: float = 0.2,
    seed: int = 0,
    sparsity: int = 10,
) -> TruncatedSequence:
    """Generate a true solution in l_q.

    ``power-decay``: ``u_k = k^-(1/q + decay_margin)``.
    ``sparse``: ``sparsity`` nonzeros in ``[0.5, 2]`` at seeded positions.
    ``mixed``: the power-decay profile plus sparse spikes placed among the
    first ``4 * sparsity`` indices.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if kind not in TRUTH_KINDS:
        raise InvalidInputError(f"unknown truth kind {kind!r}; expected one of {TRUTH_KINDS}")
    rng = np.random.default_rng(seed)
    if kind == "sparse":
        if not 1 <= sparsity <= n:
            raise InvalidInputError("need 1 <= sparsity <= n")
        u = np.zeros(n)
        u[rng.choice(n, size=sparsity, replace=False)] = rng.uniform(0.5, 2.0, size=sparsity)
        return TruncatedSequence(u)

    k = np.arange(1, n + 1, dtype=np.float64)
    u = k ** -_decay_exponent(params, decay_margin)
    if kind == "mixed":
        head = min(n, 4 * sparsity)
        count = min(sparsity, head)
        u[rng.choice(head, size=count, replace=False)] += rng.uniform(0.5, 2.0, size=count)
    return TruncatedSequence(u)


def truth_tail_norm(kind: str, n: int, params: SpaceParams, t: float, decay_margin: float = 0.2) -> float:
    """``||(u_k)_{k > n}||_t`` of the untruncated truth of the given kind.

    Sparse truths live inside the first ``n`` entries; the power profile
    tail is a Hurwitz zeta value.
    """
    if kind == "sparse":
        return 0.0
    exponent = t * _decay_exponent(params, decay_margin)
    if exponent <= 1:
        return math.inf
    return float(zeta(exponent, n + 1)) ** (1.0 / t)


def gen_noise(v_clean, delta: float, a: float, seed: int) -> TruncatedSequence:
    """``v + delta * eta / ||eta||_a`` with seeded standard-normal ``eta``.

    The perturbation has l_a norm exactly ``delta`` up to roundoff.
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidInputError(f"noise level must be finite and > 0, got {delta}")
    v = _values(v_clean)
    while True:
        eta = np.random.default_rng(seed).standard_normal(v.size)
        scale = norm_s(eta, a)
        if scale > 0:
            break
        seed += 1
    return TruncatedSequence(v + (delta / scale) * eta)


@dataclass(frozen=True, eq=False)
class RegProblem:
    """Operator, truth, clean and noisy data at noise level ``delta``."""

    op: DiagonalOperator
    u_dagger: TruncatedSequence
    v_clean: TruncatedSequence
    v_noisy: TruncatedSequence
    delta: float
    seed: int
    params: Optional[SpaceParams] = None

    def __post_init__(self):
        n = self.op.n
        for name in ("u_dagger", "v_clean", "v_noisy"):
            seq = as_sequence(getattr(self, name))
            if seq.n != n:
                raise InvalidInputError(f"{name} has length {seq.n}, operator has {n}")
            object.__setattr__(self, name, seq)
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise InvalidInputError("delta must be finite and > 0")

    @property
    def n(self) -> int:
        return self.op.n

    def __eq__(self, other):
        if not isinstance(other, RegProblem):
            return NotImplemented
        return (
            self.op == other.op
            and self.u_dagger == other.u_dagger
            and self.v_clean == other.v_clean
            and self.v_noisy == other.v_noisy
            and self.delta == other.delta
            and self.seed == other.seed
            and self.params == other.params
        )

    def to_dict(self) -> dict:
        return {
            "weights": self.op.weights.tolist(),
            "u_dagger": self.u_dagger.tolist(),
            "v_noisy": self.v_noisy.tolist(),
            "delta": self.delta,
            "seed": self.seed,
            "params": None if self.params is None else self.params.to_dict(),
            "a": self.op.a,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegProblem":
        required = {"weights", "u_dagger", "v_noisy", "delta", "seed", "params"}
        missing = required - set(data)
        unknown = set(data) - required - {"a"}
        if missing or unknown:
            raise InvalidInputError(
                f"bad problem layout: missing {sorted(missing)}, unknown {sorted(unknown)}"
            )
        params = None if data["params"] is None else SpaceParams.from_dict(data["params"])
        if "a" in data:
            a = float(data["a"])
        elif params is not None:
            a = params.a
        else:
            raise InvalidInputError("problem needs either params or a")
        op = DiagonalOperator(TruncatedSequence(data["weights"]), a)
        u_dagger = TruncatedSequence(data["u_dagger"])
        return cls(
            op=op,
            u_dagger=u_dagger,
            v_clean=apply_operator(op, u_dagger),
            v_noisy=TruncatedSequence(data["v_noisy"]),
            delta=float(data["delta"]),
            seed=int(data["seed"]),
            params=params,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "RegProblem":
        return cls.from_dict(json.loads(text))


def make_problem(
    op: DiagonalOperator,
    u_dagger,
    delta: float,
    seed: int,
    params: Optional[SpaceParams] = None,
) -> RegProblem:
    """Clean data ``A u_dagger`` plus noise of l_a norm exactly ``delta``."""
    v_clean = apply_operator(op, u_dagger)
    v_noisy = gen_noise(v_clean, delta, op.a, seed)
    return RegProblem(op, as_sequence(u_dagger), v_clean, v_noisy, float(delta), int(seed), params)
