"""Finite shadowing problems for weighted backward shifts.

Given a finite chain ``x_0, ..., x_{n-1}`` we look for ``x`` with
``||B^j x - x_j|| < eps`` for every ``j``. In the sup norm the problem splits
into independent one-dimensional problems, one per coordinate: coordinate
``m`` of ``B^j x`` is ``w(m-j+1)...w(m) x(m)``, so each ``(j, m)`` pins
``x(m)`` to an interval and the problem is feasible iff every coordinate's
intervals intersect.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .spaces import C0, SeqVector, SpaceNorm, iterate, norm
from .trajectories import Pseudotrajectory
from .weights import WeightSpec, product_value

#: Closed intervals use ``eps - EPS_SHRINK`` so that the strict bound survives.
EPS_SHRINK = 1e-12

FEASIBLE, INFEASIBLE, UNKNOWN = "feasible", "infeasible", "unknown"


@dataclass(frozen=True)
class ShadowResult:
    status: str
    shadow: SeqVector | None
    error: float | None
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "shadow": None if self.shadow is None else self.shadow.to_list(),
            "error": self.error,
            "certificate": self.certificate,
        }


def _points(traj) -> list[SeqVector]:
    return list(traj.points) if isinstance(traj, Pseudotrajectory) else list(traj)


def shadow_error(spec: WeightSpec, x: SeqVector, traj, space: SpaceNorm = C0) -> float:
    """``max_j ||B^j x - x_j||``."""
    return max(norm(iterate(spec, x, j) - xj, space) for j, xj in enumerate(_points(traj)))


def parse_mode(mode: str | int | None) -> int | None:
    """``"unrestricted"``/None -> None, ``"support:M"`` or an int -> M."""
    if mode is None or mode == "unrestricted":
        return None
    if isinstance(mode, int):
        bound = mode
    elif isinstance(mode, str) and mode.startswith("support:"):
        bound = int(mode.split(":", 1)[1])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if bound < 0:
        raise ValueError("support bound must be nonnegative")
    return bound


def constrained_coordinates(points: Sequence[SeqVector]) -> list[int]:
    """Coordinates ``m`` with some nonzero ``x_j(m - j)``; all others can stay 0."""
    return sorted({i + j for j, xj in enumerate(points) for i in xj.support})


def finite_shadow_solve(
    spec: WeightSpec,
    traj,
    eps: float,
    space: SpaceNorm = C0,
    mode: str | int | None = None,
) -> ShadowResult:
    """Exact sup-norm shadowing by per-coordinate interval intersection.

    With a support bound ``M`` (``mode="support:M"``) coordinates outside
    ``[-M, M]`` are pinned to 0. For ``l_p`` spaces the sup-norm midpoint
    solution is returned when its ``l_p`` error happens to be below ``eps``,
    otherwise the result is ``unknown``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if space.kind not in ("c0", "lp"):
        raise ValueError("the solver handles c0 and lp spaces")
    bound = parse_mode(mode)
    points = _points(traj)
    tight = eps - EPS_SHRINK
    shadow = {}
    for m in constrained_coordinates(points):
        cons = []
        for j, xj in enumerate(points):
            p = product_value(spec, m - j + 1, m)
            v = xj[m - j]
            lo, hi = (v - tight) / p, (v + tight) / p
            if p < 0:
                lo, hi = hi, lo
            cons.append({"j": j, "n": m - j, "lower": lo, "upper": hi})
        if bound is not None and abs(m) > bound:
            cons.append({"support_bound": True, "lower": 0.0, "upper": 0.0})
        low = max(cons, key=lambda c: c["lower"])
        high = min(cons, key=lambda c: c["upper"])
        if low["lower"] > high["upper"]:
            cert = {
                "coordinate": m,
                "lower_constraint": low,
                "upper_constraint": high,
                "endpoints": cons,
            }
            return ShadowResult(INFEASIBLE, None, None, cert)
        shadow[m] = 0.5 * (low["lower"] + high["upper"])
    x = SeqVector(shadow)
    err_sup = shadow_error(spec, x, points, C0)
    if space.kind == "c0":
        return ShadowResult(FEASIBLE, x, err_sup, {"coordinates": len(shadow)})
    err = shadow_error(spec, x, points, space)
    status = FEASIBLE if err < eps else UNKNOWN
    return ShadowResult(status, x, err, {"coordinates": len(shadow), "sup_error": err_sup})


#: Size guards for the exhaustive oracle.
BRUTE_MAX_COORDS = 9
BRUTE_MAX_POINTS = 5


def brute_force_shadow(
    spec: WeightSpec,
    traj,
    eps: float,
    step: float = 1e-2,
) -> tuple[float, SeqVector, float]:
    """Minimal sup-norm shadowing error over a grid of spacing ``step``, coordinate by coordinate.

    The sup-norm error is the max over coordinates of per-coordinate errors,
    so minimizing each coordinate separately over its grid minimizes the
    total. Each coordinate's grid spans the box outside of which the error
    is at least ``eps``. Returns ``(error, x, slack)`` where ``slack`` bounds
    how far the grid minimum can sit above the true minimum.
    """
    points = _points(traj)
    if len(points) > BRUTE_MAX_POINTS:
        raise ValueError(f"brute force handles at most {BRUTE_MAX_POINTS} points")
    coords = constrained_coordinates(points)
    if len(coords) > BRUTE_MAX_COORDS:
        raise ValueError(f"brute force handles at most {BRUTE_MAX_COORDS} coordinates")
    best = 0.0
    slack = 0.0
    x = {}
    for m in coords:
        prods = np.array([math.prod(spec(i) for i in range(m - j + 1, m + 1)) for j in range(len(points))])
        vals = np.array([xj[m - j] for j, xj in enumerate(points)])
        radius = float(np.max((np.abs(vals) + eps) / np.abs(prods)))
        grid = np.arange(-radius, radius + step, step)
        errs = np.abs(grid[:, None] * prods[None, :] - vals[None, :]).max(axis=1)
        i = int(np.argmin(errs))
        best = max(best, float(errs[i]))
        x[m] = float(grid[i])
        slack = max(slack, step * float(np.abs(prods).max()))
    return best, SeqVector(x), slack
