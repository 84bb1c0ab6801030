"""Eventually periodic bilateral weight sequences.

A weight sequence ``w = (w_n)_{n in Z}`` is described by a finite core placed
at ``core_start`` and two periodic blocks tiling the left and right tails.
Long products are carried as ``(sign, log|prod|)`` so that windows of
thousands of indices neither overflow nor underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

#: Log-rates closer to 0 than this are treated as exactly neutral (rate 1).
RATE_TOL = 1e-12

# direct float products are trusted inside this magnitude band
_SAFE_LO = 1e-280
_SAFE_HI = 1e280


@dataclass(frozen=True)
class WeightSpec:
    """Eventually periodic weight sequence.

    ``left_period`` tiles leftward so that its last element sits at
    ``core_start - 1``; ``right_period`` tiles rightward starting at
    ``core_start + len(core)``.
    """

    core_start: int
    core: tuple[float, ...]
    left_period: tuple[float, ...]
    right_period: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "core_start", int(self.core_start))
        for name in ("core", "left_period", "right_period"):
            values = tuple(float(v) for v in getattr(self, name))
            for v in values:
                if v == 0.0 or not math.isfinite(v):
                    raise ValueError(f"{name}: weights must be finite and nonzero, got {v!r}")
            object.__setattr__(self, name, values)
        if not self.left_period:
            raise ValueError("left_period must be nonempty")
        if not self.right_period:
            raise ValueError("right_period must be nonempty")

    @classmethod
    def constant(cls, value: float) -> "WeightSpec":
        return cls(0, (), (value,), (value,))

    @classmethod
    def two_sided(cls, left: float, right: float, first_right: int = 0) -> "WeightSpec":
        """``w(n) = left`` for ``n < first_right`` and ``right`` otherwise."""
        return cls(first_right, (), (left,), (right,))

    @property
    def core_end(self) -> int:
        """First index of the right periodic tail."""
        return self.core_start + len(self.core)

    @property
    def q_left(self) -> int:
        return len(self.left_period)

    @property
    def q_right(self) -> int:
        return len(self.right_period)

    @property
    def w_min(self) -> float:
        return min(abs(v) for v in self.core + self.left_period + self.right_period)

    @property
    def w_max(self) -> float:
        return max(abs(v) for v in self.core + self.left_period + self.right_period)

    def __call__(self, n: int) -> float:
        return weight_at(self, n)

    def values(self, lo: int, hi: int) -> np.ndarray:
        """Weights ``w(lo), ..., w(hi)`` as an array (empty when ``hi < lo``)."""
        return np.array([weight_at(self, n) for n in range(lo, hi + 1)], dtype=float)

    def log_abs(self, lo: int, hi: int) -> np.ndarray:
        return np.log(np.abs(self.values(lo, hi)))

    def to_dict(self) -> dict:
        return {
            "core_start": self.core_start,
            "core": list(self.core),
            "left_period": list(self.left_period),
            "right_period": list(self.right_period),
        }


def weight_at(spec: WeightSpec, n: int) -> float:
    end = spec.core_end
    if n >= end:
        return spec.right_period[(n - end) % spec.q_right]
    if n < spec.core_start:
        q = spec.q_left
        return spec.left_period[q - 1 - ((spec.core_start - 1 - n) % q)]
    return spec.core[n - spec.core_start]


def product(spec: WeightSpec, a: int, b: int) -> tuple[int, float]:
    """Sign and log-magnitude of ``w(a) * ... * w(b)``."""
    if a > b:
        raise ValueError(f"invalid product range: a={a} > b={b}")
    sign = 1
    logs = []
    for n in range(a, b + 1):
        v = weight_at(spec, n)
        if v < 0:
            sign = -sign
        logs.append(math.log(abs(v)))
    return sign, math.fsum(logs)


def product_value(spec: WeightSpec, a: int, b: int) -> float:
    """``w(a) * ... * w(b)`` as a float; the empty product (``b == a - 1``) is 1.

    Direct multiplication is used while it is safely representable (exact for
    dyadic weights); otherwise the log-domain product is exponentiated.
    """
    if b < a:
        return 1.0
    p = math.prod(weight_at(spec, n) for n in range(a, b + 1))
    if math.isfinite(p) and _SAFE_LO < abs(p) < _SAFE_HI:
        return p
    sign, log = product(spec, a, b)
    return sign * math.exp(log)


def scale_by_product(spec: WeightSpec, a: int, b: int, value: float, invert: bool = False) -> float:
    """``value * prod`` (or ``value / prod`` with ``invert``) over ``[a, b]``.

    Falls back to log-domain combination so that intermediate products that
    overflow do not spoil a representable result.
    """
    if value == 0.0:
        return 0.0
    if b < a:
        return value
    p = math.prod(weight_at(spec, n) for n in range(a, b + 1))
    if math.isfinite(p) and _SAFE_LO < abs(p) < _SAFE_HI:
        return value / p if invert else value * p
    sign, log = product(spec, a, b)
    if invert:
        log = -log
    out = math.copysign(1.0, value) * sign * math.exp(math.log(abs(value)) + log)
    return out


@dataclass(frozen=True)
class RateSummary:
    r_left: float
    r_right: float
    log_left: float
    log_right: float
    log_domain: tuple[bool, bool] = (True, True)

    def side(self, which: str) -> int:
        """-1, 0 or +1 according as the side's rate is below, at or above 1."""
        log = self.log_left if which == "left" else self.log_right
        return (log > 0) - (log < 0)

    def to_dict(self) -> dict:
        return {
            "r_left": self.r_left,
            "r_right": self.r_right,
            "log_left": self.log_left,
            "log_right": self.log_right,
            "log_domain": list(self.log_domain),
        }


def _period_log_mean(values: Sequence[float]) -> float:
    log = math.fsum(math.log(abs(v)) for v in values) / len(values)
    return 0.0 if abs(log) <= RATE_TOL else log


def rates(spec: WeightSpec) -> RateSummary:
    """Per-side geometric means of one period's weight magnitudes."""
    log_left = _period_log_mean(spec.left_period)
    log_right = _period_log_mean(spec.right_period)
    return RateSummary(math.exp(log_left), math.exp(log_right), log_left, log_right)


def log_prefix(spec: WeightSpec, lo: int, hi: int) -> np.ndarray:
    """Prefix sums ``P`` with ``P[i] = sum_{n=lo}^{lo+i-1} log|w(n)|``.

    ``log|w(a) ... w(b)| = P[b - lo + 1] - P[a - lo]`` for ``lo <= a <= b <= hi``.
    """
    logs = spec.log_abs(lo, hi)
    out = np.zeros(len(logs) + 1)
    np.cumsum(logs, out=out[1:])
    return out


def lcm_period(spec: WeightSpec) -> int:
    return math.lcm(spec.q_left, spec.q_right)
