"""Finitely truncated real sequences, their l_s (quasi-)norms and penalties.

A :class:`TruncatedSequence` of length ``n`` stands for the infinite sequence
whose entries beyond ``n`` are zero. All sums are evaluated with
:func:`math.fsum`, which is correctly rounded and therefore independent of
summation order and thread count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DegenerateParametersError, InvalidInputError, ParameterOrderError

#: Relative slack used by every analytic-inequality check.
EPS_TOL = 1e-10


class TruncatedSequence:
    """Immutable finite section ``(u_1, ..., u_n)`` of a real sequence."""

    __slots__ = ("_entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.ndim != 1:
            raise InvalidInputError(f"expected a 1-D sequence, got shape {arr.shape}")
        if arr.size == 0:
            raise InvalidInputError("a truncated sequence needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("sequence entries must be finite")
        arr.flags.writeable = False
        self._entries = arr

    @classmethod
    def zeros(cls, n: int) -> "TruncatedSequence":
        return cls(np.zeros(n))

    @property
    def entries(self) -> np.ndarray:
        """Read-only float64 view of the stored entries."""
        return self._entries

    @property
    def n(self) -> int:
        return self._entries.size

    def __len__(self):
        return self._entries.size

    def __getitem__(self, k):
        return self._entries[k]

    def __iter__(self):
        return iter(self._entries.tolist())

    def __array__(self, dtype=None, copy=None):
        return self._entries if dtype is None else self._entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSequence):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __sub__(self, other):
        return TruncatedSequence(self._entries - _values(other))

    def __add__(self, other):
        return TruncatedSequence(self._entries + _values(other))

    def __repr__(self):
        if self.n <= 6:
            return f"TruncatedSequence({self._entries.tolist()})"
        head = ", ".join(repr(x) for x in self._entries[:3].tolist())
        return f"TruncatedSequence([{head}, ...], n={self.n})"

    def tolist(self) -> list:
        return self._entries.tolist()


def as_sequence(u) -> TruncatedSequence:
    """Return ``u`` unchanged if it already is a sequence, else wrap it."""
    return u if isinstance(u, TruncatedSequence) else TruncatedSequence(u)


def _values(u) -> np.ndarray:
    return as_sequence(u).entries


@dataclass(frozen=True)
class SpaceParams:
    """Index tuple ``(p, q, tau, a, sigma)``.

    ``p`` selects the penalty, ``q`` the summability of the true solution,
    ``tau`` the error norm, ``a`` the conditional-stability index and
    ``sigma`` the misfit exponent. Required: ``0 <= p <= q <= tau < a``,
    ``tau >= 1`` and ``sigma > 0``.
    """

    p: float
    q: float
    tau: float
    a: float
    sigma: float

    def __post_init__(self):
        for name in ("p", "q", "tau", "a", "sigma"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidInputError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidInputError(f"{name} must be finite")
            object.__setattr__(self, name, float(value))
        if self.sigma <= 0:
            raise InvalidInputError("sigma must be positive")
        if self.tau < 1:
            raise ParameterOrderError("tau must be >= 1")
        if not (0 <= self.p <= self.q <= self.tau < self.a):
            raise ParameterOrderError(
                f"need 0 <= p <= q <= tau < a, got p={self.p}, q={self.q}, "
                f"tau={self.tau}, a={self.a}"
            )

    @cached_property
    def N(self) -> float:
        """``(a - q) sigma + (q - p) a``, the common denominator of the rates."""
        return (self.a - self.q) * self.sigma + (self.q - self.p) * self.a

    @cached_property
    def kappa(self) -> float:
        """Exponent of ``alpha`` in the bound on the Tikhonov minimum; in (0, 1]."""
        return (self.a - self.q) * self.sigma / self.N

    @cached_property
    def theta(self) -> float:
        """Interpolation weight ``(a - tau) / (a - p)``."""
        return (self.a - self.tau) / (self.a - self.p)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "tau": self.tau, "a": self.a, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, data: dict) -> "SpaceParams":
        names = {"p", "q", "tau", "a", "sigma"}
        unknown, missing = set(data) - names, names - set(data)
        if unknown or missing:
            raise InvalidInputError(
                f"bad parameter fields: unknown {sorted(unknown)}, missing {sorted(missing)}"
            )
        return cls(**data)


class BoundCheck(NamedTuple):
    """Both sides of an inequality ``lhs <= rhs`` and whether it held."""

    lhs: float
    rhs: float
    holds: bool


def _holds(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + EPS_TOL)


def norm_s(u, s: float) -> float:
    """``(sum |u_k|^s)^(1/s)`` for ``s > 0``; the number of nonzeros for ``s == 0``.

    Entries are rescaled by ``max |u_k|`` before powering so that neither
    tiny nor large entries under/overflow.
    """
    if not (s >= 0 and math.isfinite(s)):
        raise InvalidInputError(f"norm index must be finite and >= 0, got {s}")
    x = np.abs(_values(u))
    if s == 0:
        return float(np.count_nonzero(x))
    m = float(x.max())
    if m == 0.0:
        return 0.0
    return m * math.fsum((x / m) ** s) ** (1.0 / s)


def penalty_rp(u, p: float) -> float:
    """``R_p(u) = sum |u_k|^p`` for ``p > 0`` and the support size for ``p == 0``."""
    if not (p >= 0 and math.isfinite(p)):
        raise InvalidInputError(f"penalty index must be finite and >= 0, got {p}")
    x = np.abs(_values(u))
    if p == 0:
        return float(np.count_nonzero(x))
    return math.fsum(x ** p)


def check_interpolation(u, params: SpaceParams) -> BoundCheck:
    """Evaluate ``||u||_tau^tau <= R_p(u)^theta * ||u||_a^(a (1 - theta))``."""
    p, tau, a = params.p, params.tau, params.a
    if not p < tau < a:
        raise DegenerateParametersError(
            f"interpolation needs p < tau < a strictly, got p={p}, tau={tau}, a={a}"
        )
    theta = params.theta
    lhs = penalty_rp(u, tau)
    rp = penalty_rp(u, p)
    norm_a = norm_s(u, a)
    rhs = rp ** theta * norm_a ** (a * (1.0 - theta))
    return BoundCheck(lhs, rhs, _holds(lhs, rhs))


def _tends_to_zero(values: Sequence[float], tol: float) -> bool:
    # last quarter stays within 10x of the final value, which is below tol
    final = values[-1]
    if not final <= tol:
        return False
    tail = values[len(values) - max(1, len(values) // 4):]
    return all(v <= 10.0 * final for v in tail)


def radon_riesz_probe(u_seq, u, p: float, tol: float = 1e-6) -> Optional[bool]:
    """Probe the Radon-Riesz (Kadec-Klee) property on a finite family.

    Returns ``None`` when the hypotheses (componentwise convergence and
    convergence of the ``p``-norms) are not observed on ``u_seq``; otherwise
    returns whether ``||u_n - u||_p`` is observed to tend to zero. This is a
    finite-sample sanity probe, not a proof.
    """
    if not p > 0:
        raise InvalidInputError("the probe needs p > 0")
    members = [as_sequence(x) for x in u_seq]
    if not members:
        raise InvalidInputError("the family u_seq is empty")
    u = as_sequence(u)
    if any(m.n != u.n for m in members):
        raise InvalidInputError("all sequences must share the truncation length")

    norm_u = norm_s(u, p)
    componentwise = [float(np.max(np.abs(m.entries - u.entries))) for m in members]
    norm_gap = [abs(norm_s(m, p) - norm_u) for m in members]
    if not (_tends_to_zero(componentwise, tol) and _tends_to_zero(norm_gap, tol)):
        return None
    distance = [norm_s(m - u, p) for m in members]
    return _tends_to_zero(distance, tol)
