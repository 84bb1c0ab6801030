"""Explicit pseudotrajectories of the backward shift and their validation."""
from __future__ import annotations

from dataclasses import dataclass

from .spaces import (
    C0,
    SeqVector,
    SpaceNorm,
    apply_backward,
    apply_backward_inverse,
    iterate,
    norm,
)
from .weights import WeightSpec

#: Slack allowed when checking a defect against a closed step bound.
VALIDATE_TOL = 1e-12


class ConstructionError(RuntimeError):
    """A construction could not satisfy its stated conditions."""


@dataclass(frozen=True)
class Pseudotrajectory:
    points: tuple[SeqVector, ...]
    delta: float
    space: SpaceNorm = C0
    periodic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 2:
            raise ValueError("a pseudotrajectory needs at least two points")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.periodic and self.points[0] != self.points[-1]:
            raise ValueError("periodic pseudotrajectory must start and end at the same point")

    def __len__(self) -> int:
        return len(self.points)

    def max_norm(self) -> float:
        return max(norm(x, self.space) for x in self.points)


def validate(traj: Pseudotrajectory, spec: WeightSpec) -> tuple[float, list[float]]:
    """Step defects ``||B x_j - x_{j+1}||`` in the trajectory's norm."""
    defects = [
        norm(apply_backward(spec, a) - b, traj.space)
        for a, b in zip(traj.points, traj.points[1:])
    ]
    return max(defects), defects


def is_valid(traj: Pseudotrajectory, spec: WeightSpec, tol: float = VALIDATE_TOL) -> bool:
    return validate(traj, spec)[0] <= traj.delta + tol


def gen_genhyp(eps: float, m: int, length: int) -> Pseudotrajectory:
    """Growing windows of ``y(i) = eps 2^{-|i|}``: ``x_j = y`` on ``[m+1-j, m+1]``.

    Meant for the weights ``w(k) = 2`` (``k > 0``), ``1/2`` (``k <= 0``); each
    step defect is ``eps 2^{-m-1}`` at index ``m + 1``.
    """
    if length < 2:
        raise ValueError("length must be at least 2")
    if not eps > 0:
        raise ValueError("eps must be positive")
    points = [
        SeqVector((i, eps * 2.0 ** -abs(i)) for i in range(m + 1 - j, m + 2))
        for j in range(length)
    ]
    return Pseudotrajectory(tuple(points), delta=eps * 2.0 ** -m, space=C0)


def gen_ramp(delta: float, n: int, space: SpaceNorm = C0) -> Pseudotrajectory:
    """``0, d e_{-1}, 2d e_{-2}, ..., n d e_{-n}, (n-1) d e_{-n-1}, ..., d e_{-2n+1}, 0``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not delta > 0:
        raise ValueError("delta must be positive")
    points = [SeqVector()]
    points += [SeqVector({-i: i * delta}) for i in range(1, n + 1)]
    points += [SeqVector({-n - i: (n - i) * delta}) for i in range(1, n)]
    points.append(SeqVector())
    return Pseudotrajectory(tuple(points), delta=delta, space=space, periodic=True)


def s_delta(x: SeqVector, delta: float, space: SpaceNorm = C0) -> SeqVector:
    """Shrink ``x`` radially by ``delta``: ``(1 - delta/||x||) x``, with ``0 -> 0``."""
    if not x:
        return x
    return (1.0 - delta / norm(x, space)) * x


def gen_sdelta_bridge(
    spec: WeightSpec,
    eps: float,
    delta: float,
    k: int,
    l: int,
    m: int,
    space: SpaceNorm = C0,
) -> Pseudotrajectory:
    """Closed chain ``0 -> ... -> eps e_l -> ... -> 0`` with interior defects ``delta``.

    Before the peak the points are ``(B^{-1} S_delta)^j eps e_l`` for
    ``j = m-l, ..., 1`` (supported at ``l+j``); after it they are
    ``(S_delta B)^j eps e_l`` for ``j = 1, ..., l-k`` (supported at ``l-j``).
    The first step defect is the quantity of condition (a) at ``(l, m)``; the
    last one is the quantity of condition (b) at ``(k, l)``. The chain has
    ``m - k + 3`` points and claims the step bound ``2 delta``.
    """
    if not k <= l <= m:
        raise ValueError(f"need k <= l <= m, got {(k, l, m)}")
    if not eps > delta > 0:
        raise ValueError("need eps > delta > 0")
    peak = SeqVector({l: eps})

    before = []
    x = peak
    for _ in range(m - l):
        x = apply_backward_inverse(spec, s_delta(x, delta, space))
        before.append(x)
    before.reverse()

    after = []
    x = peak
    for _ in range(l - k):
        x = s_delta(apply_backward(spec, x), delta, space)
        after.append(x)

    zero = SeqVector()
    points = (zero, *before, peak, *after, zero)
    return Pseudotrajectory(points, delta=2 * delta, space=space, periodic=True)


def renormalized_pullback_orbit(
    spec: WeightSpec,
    y0: SeqVector,
    delta: float,
    max_steps: int,
    space: SpaceNorm = C0,
) -> list[SeqVector]:
    """``y_i = (1 - delta/||y_{i-1}||) B^{-1} y_{i-1}`` until zero, below ``delta``, or ``max_steps``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    orbit = [y0]
    y = y0
    for _ in range(max_steps):
        size = norm(y, space)
        if size == 0.0 or size < delta:
            break
        y = (1.0 - delta / size) * apply_backward_inverse(spec, y)
        orbit.append(y)
    return orbit


def close_to_zero(
    traj: Pseudotrajectory,
    spec: WeightSpec,
    delta: float,
    max_eta_exp: int = 40,
    max_n: int = 2**20,
    rotate: bool = True,
) -> Pseudotrajectory:
    """Embed a periodic pseudotrajectory into a periodic one passing through 0.

    Uses geometrically damped copies ``eta^j x_i`` down to a point with
    ``||B(eta^n x_{k-1})|| < delta`` and ``||eta^n x_0|| < delta``, then 0,
    then back up. With ``rotate`` the result starts and ends at 0 and the
    original cycle appears as a contiguous block; without it the result is
    the unrotated chain starting with the original points.
    """
    if not traj.periodic:
        raise ValueError("close_to_zero needs a periodic pseudotrajectory")
    space = traj.space
    worst, _ = validate(traj, spec)
    if not worst < delta:
        raise ValueError(f"input defect {worst!r} is not below delta={delta!r}")

    cycle = traj.points[:-1]
    k = len(cycle)
    x0, tail = cycle[0], cycle[-1]
    t_tail = apply_backward(spec, tail)

    eta = None
    for j in range(1, max_eta_exp + 1):
        cand = 1.0 - 2.0**-j
        if norm(t_tail - (1.0 / cand) * x0, space) < delta and norm(t_tail - cand * x0, space) < delta:
            eta = cand
            break
    if eta is None:
        raise ConstructionError("no admissible eta found")

    n = 1
    while True:
        scale = eta**n
        if norm(scale * t_tail, space) < delta and norm(scale * x0, space) < delta:
            break
        n *= 2
        if n > max_n:
            raise ConstructionError("no admissible damping exponent found")

    down = [eta**j * x for j in range(1, n + 1) for x in cycle]
    up = [eta**j * x for j in range(n, 0, -1) for x in cycle]
    zero = SeqVector()
    if rotate:
        points = [zero, *up, *cycle, *down, zero]
    else:
        points = [*cycle, *down, zero, *up, x0]
    out = Pseudotrajectory(tuple(points), delta=delta, space=space, periodic=True)
    if not validate(out, spec)[0] < delta:
        raise ConstructionError("closed chain failed validation")
    return out


def splice_with_periodic(
    traj: Pseudotrajectory,
    spec: WeightSpec,
    delta: float,
    periodic_points: list[tuple[SeqVector, int]],
) -> Pseudotrajectory:
    """Close a finite chain ``x_0..x_k`` into a periodic one through periodic orbits.

    ``periodic_points[m-1] = (y_m, p_m)`` must satisfy ``||y_m - x_{m-1}|| < delta``
    and ``||B y_m - x_m|| < delta / w_max``. The output
    ``x_0..x_k, B^2 y_k..B^{p_k-1} y_k, x_{k-1}, ..., x_1, B^2 y_1..B^{p_1-1} y_1, x_0``
    is a ``delta``-pseudotrajectory. Periods 1 and 2 are promoted to 4.
    """
    xs = traj.points
    k = len(xs) - 1
    if len(periodic_points) != k:
        raise ValueError(f"need {k} periodic points, got {len(periodic_points)}")
    space = traj.space
    inner = delta / spec.w_max
    for j, (a, b) in enumerate(zip(xs, xs[1:])):
        if not norm(apply_backward(spec, a) - b, space) < delta:
            raise ValueError(f"step {j} of the input exceeds delta")
    for m, (y, p) in enumerate(periodic_points, start=1):
        if p < 1:
            raise ValueError(f"period must be positive, got {p}")
        if not norm(y - xs[m - 1], space) < delta:
            raise ValueError(f"y_{m} is not delta-close to x_{m - 1}")
        if not norm(apply_backward(spec, y) - xs[m], space) < inner:
            raise ValueError(f"B y_{m} is not (delta / w_max)-close to x_{m}")

    points = list(xs)
    for m in range(k, 0, -1):
        y, p = periodic_points[m - 1]
        if p <= 2:
            p = 4
        points += [iterate(spec, y, i) for i in range(2, p)]
        points.append(xs[m - 1])
    out = Pseudotrajectory(tuple(points), delta=delta, space=space, periodic=True)
    if not validate(out, spec)[0] < delta:
        raise ConstructionError("spliced chain failed validation; are the y_m truly periodic?")
    return out
