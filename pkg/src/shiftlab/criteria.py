"""Decision procedures for dynamical properties of bilateral weighted shifts.

Every procedure returns a :class:`Verdict` whose evidence can be re-checked
from the inputs alone. Conditions quantified over all of ``Z`` are decided
exactly where eventual periodicity allows it (rates, series); the periodic
shadowing triple condition and uniform envelopes are certified on a finite
window only, and such results never carry the status ``holds``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .spaces import (
    C0,
    KoetheMatrix,
    OutOfWindowError,
    SeqVector,
    SpaceNorm,
    apply_backward,
    iterate,
    norm,
)
from .trajectories import gen_sdelta_bridge, s_delta
from .weights import (
    WeightSpec,
    lcm_period,
    log_prefix,
    product_value,
    rates,
    scale_by_product,
)

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"
WINDOW_LIMITED = "window-limited"
CONDITION_C = "condition-C-out-of-scope"

DEFAULT_WINDOW = (-64, 64)
DEFAULT_N_MAX = 128
_LIN_HI = 1e280


def default_grid(eps: float, count: int = 12) -> list[float]:
    return [eps * 2.0**-j for j in range(1, count + 1)]


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (HOLDS, FAILS, UNKNOWN):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == UNKNOWN and self.reason not in (WINDOW_LIMITED, CONDITION_C):
            raise ValueError(f"unknown verdict with reason {self.reason!r}")

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> dict:
        return {"status": self.status, "reason": self.reason, "evidence": _plain(self.evidence)}


def _plain(obj):
    """Convert evidence payloads to JSON-friendly builtins."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, SeqVector):
        return obj.to_list()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    return obj


# ---------------------------------------------------------------------------
# periodic points

def periodic_point_exists(spec: WeightSpec) -> Verdict:
    """Nontrivial periodic points exist iff the fixed-point recursion decays on both sides.

    ``B^k x = x`` forces ``x(n) = w(n+1)...w(n+k) x(n+k)``; the materialized
    solution decays to the right iff ``r_right > 1`` and to the left iff
    ``r_left < 1``.
    """
    r = rates(spec)
    ev = {"r_left": r.r_left, "r_right": r.r_right}
    if r.side("left") < 0 and r.side("right") > 0:
        ev.update(residue=0, period=lcm_period(spec))
        return Verdict(HOLDS, "dense-periodic", ev)
    return Verdict(FAILS, "tails-non-decaying", ev)


def _materialize(spec: WeightSpec, window: tuple[int, int], period: int, residue: int, scale: float) -> SeqVector:
    lo, hi = window
    entries = {}
    for n in range(lo, hi + 1):
        if (n - residue) % period:
            continue
        if n >= residue:
            entries[n] = scale_by_product(spec, residue + 1, n, scale, invert=True)
        else:
            entries[n] = scale_by_product(spec, n + 1, residue, scale)
    return SeqVector(entries)


def _candidate_value(spec: WeightSpec, n: int, period: int, residue: int, scale: float) -> float:
    if n >= residue:
        return scale_by_product(spec, residue + 1, n, scale, invert=True)
    return scale_by_product(spec, n + 1, residue, scale)


def make_periodic_point(
    spec: WeightSpec,
    window: tuple[int, int],
    scale: float = 1.0,
    residue: int = 0,
    period: int | None = None,
    space: SpaceNorm = C0,
) -> tuple[SeqVector, float]:
    """Truncate the periodic point through ``scale * e_residue`` to ``window``.

    Returns the vector and the exact defect ``||B^k x - x||``, which lives on
    the ``k`` indices just inside the right edge and the ``k`` just outside
    the left edge.
    """
    if not periodic_point_exists(spec).holds:
        raise ValueError("the shift has no nontrivial periodic points")
    k = lcm_period(spec) if period is None else period
    lo, hi = window
    if not lo <= residue <= hi:
        raise ValueError("residue must lie in the window")
    x = _materialize(spec, window, k, residue, scale)
    boundary = {}
    for n in range(hi - k + 1, hi + 1):
        if not (n - residue) % k:
            boundary[n] = x[n]
    for n in range(lo - k, lo):
        if not (n - residue) % k:
            boundary[n] = _candidate_value(spec, n, k, residue, scale)
    return x, norm(SeqVector(boundary), space)


def tail_profile(spec: WeightSpec, window: tuple[int, int]) -> tuple[float, float]:
    """Per-period magnitude factor of the fixed-point candidate at each edge.

    The candidate through ``e_0`` decays outward on a side iff the factor is
    below 1.
    """
    lo, hi = window
    ql, qr = spec.q_left, spec.q_right
    x = _materialize(spec, (lo - ql, hi + qr), 1, 0, 1.0)
    right = abs(x[hi + qr]) / abs(x[hi]) if x[hi] else math.inf
    left = abs(x[lo - ql]) / abs(x[lo]) if x[lo] else math.inf
    return left, right


# ---------------------------------------------------------------------------
# generalized hyperbolicity and shadowing

@dataclass(frozen=True)
class GhSplit:
    split_index: int
    c_contract: float
    c_expand: float
    t: float
    n_checked: int

    def to_dict(self) -> dict:
        return {
            "split_index": self.split_index,
            "c_contract": self.c_contract,
            "c_expand": self.c_expand,
            "t": self.t,
            "n_checked": self.n_checked,
        }


def _sup_ratio(spec: WeightSpec, starts: range, n_max: int, t: float, forward: bool) -> float:
    """``max_{n <= n_max} sup_j |prod_n(j)| / t^n`` over the given ``j``.

    ``forward``: product of ``w(j+1)...w(j+n)`` inverted (``S^n e_j``);
    otherwise ``w(j-n+1)...w(j)`` (``T^n e_j``).
    """
    lo = starts.start - (0 if forward else n_max)
    hi = starts.stop - 1 + (n_max if forward else 0)
    P = log_prefix(spec, lo, hi)
    js = np.arange(starts.start, starts.stop) - lo
    best = 0.0  # n = 0
    for n in range(1, n_max + 1):
        if forward:
            logs = -(P[js + 1 + n] - P[js + 1])
        else:
            logs = P[js + 1] - P[js + 1 - n]
        best = max(best, float(logs.max()) - n * math.log(t))
    return math.exp(best)


def gh_check(spec: WeightSpec, s: int = 0, n_check: int = DEFAULT_N_MAX, margin: float = 0.01) -> Verdict:
    """Generalized hyperbolicity with ``M = span{e_n : n <= s}``, ``N = span{e_n : n > s}``."""
    r = rates(spec)
    if not (r.side("left") < 0 < r.side("right")):
        return Verdict(FAILS, "gh", {"r_left": r.r_left, "r_right": r.r_right})
    base = max(r.r_left, 1.0 / r.r_right)
    t = base + min(margin, (1.0 - base) / 2)
    left_starts = range(min(s, spec.core_start - 1) - spec.q_left + 1, s + 1)
    right_starts = range(s + 1, max(s, spec.core_end - 1) + spec.q_right + 1)
    c_m = _sup_ratio(spec, left_starts, n_check, t, forward=False)
    c_n = _sup_ratio(spec, right_starts, n_check, t, forward=True)
    split = GhSplit(s, c_m, c_n, t, n_check)
    return Verdict(HOLDS, "gh", {"split": split, "r_left": r.r_left, "r_right": r.r_right})


def shadowing_criterion(spec: WeightSpec) -> Verdict:
    """Shadowing on ``l_p``/``c_0`` from the uniform-rate rules and generalized hyperbolicity."""
    r = rates(spec)
    ev = {"r_left": r.r_left, "r_right": r.r_right}
    if r.side("left") < 0 and r.side("right") < 0:
        return Verdict(HOLDS, "iA", ev)
    if r.side("left") > 0 and r.side("right") > 0:
        return Verdict(HOLDS, "iB", ev)
    gh = gh_check(spec, spec.core_start - 1)
    if gh.holds:
        return Verdict(HOLDS, "gh", {**ev, **gh.evidence})
    if periodic_point_exists(spec).holds:
        return Verdict(UNKNOWN, CONDITION_C, ev)
    # without periodic points only iA/iB remain; the third condition forces dense periodic points
    return Verdict(FAILS, "sandwich", {**ev, "periodic_points": False})


def chain_recurrence_trivial(spec: WeightSpec, n_terms: int = 64) -> Verdict:
    """Decide ``CR(B_w) = {0}`` by the two summability conditions."""
    r = rates(spec)
    left_terms, right_terms = [], []
    p_left = p_right = 1.0
    for n in range(1, n_terms + 1):
        p_left *= abs(spec(-n + 1))
        p_right *= abs(spec(n))
        left_terms.append(1.0 / p_left)
        right_terms.append(p_right)
    ev = {
        "r_left": r.r_left,
        "r_right": r.r_right,
        "partial_sums_iiiA": [math.fsum(left_terms[:n]) for n in range(1, n_terms + 1)],
        "partial_sums_iiiB": [math.fsum(right_terms[:n]) for n in range(1, n_terms + 1)],
    }
    if r.side("left") > 0:
        return Verdict(HOLDS, "iiiA", ev)
    if r.side("right") < 0:
        return Verdict(HOLDS, "iiiB", ev)
    return Verdict(FAILS, "series-diverge", ev)


def psp_lp_sandwich(spec: WeightSpec) -> Verdict:
    """Periodic shadowing on ``l_p`` bracketed by the uniform-rate rules.

    Uniform contraction or expansion gives shadowing, hence periodic
    shadowing; trivial chain recurrence is necessary for it. In between
    nothing is asserted.
    """
    sc = shadowing_criterion(spec)
    cr = chain_recurrence_trivial(spec)
    ev = {"shadowing": sc.reason, "chain_recurrence": cr.reason}
    if sc.holds and sc.reason in ("iA", "iB"):
        return Verdict(HOLDS, sc.reason, ev)
    if not cr.holds:
        return Verdict(FAILS, "chain-recurrence-nontrivial", ev)
    return Verdict(UNKNOWN, WINDOW_LIMITED, ev)


# ---------------------------------------------------------------------------
# periodic shadowing: the triple condition

def psp_quantities(spec: WeightSpec, eps: float, delta: float, k: int, l: int, m: int) -> tuple[float, float]:
    """Quantities (a) at ``(l, m)`` and (b) at ``(k, l)``, by direct products of |w|.

    (a) = | eps / |w(l+1)...w(m)| - delta * sum_{i=0}^{m-l-1} 1 / |w(m-i)...w(m)| |
    (b) = | eps |w(k)...w(l)| - delta * sum_{i=0}^{l-k-1} |w(k)...w(k+i)| |
    """
    if not k <= l <= m:
        raise ValueError(f"need k <= l <= m, got {(k, l, m)}")
    a_lead = eps / abs(product_value(spec, l + 1, m))
    a_sum = math.fsum(1.0 / abs(product_value(spec, m - i, m)) for i in range(m - l))
    b_lead = eps * abs(product_value(spec, k, l))
    b_sum = math.fsum(abs(product_value(spec, k, k + i)) for i in range(l - k))
    return abs(a_lead - delta * a_sum), abs(b_lead - delta * b_sum)


def _log_abs_diff(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``log|e^p - e^q|`` elementwise (``-inf`` where they coincide)."""
    hi = np.maximum(p, q)
    lo = np.minimum(p, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = hi + np.log1p(-np.exp(lo - hi))
    out[np.isneginf(lo)] = hi[np.isneginf(lo)]
    return out


@dataclass(frozen=True)
class TripleWitness:
    k: int
    l: int
    m: int
    delta: float
    a: float
    b: float

    def to_dict(self) -> dict:
        return {"k": self.k, "l": self.l, "m": self.m, "delta": self.delta, "a": self.a, "b": self.b}


def _triple_witnesses(spec: WeightSpec, eps: float, deltas: Sequence[float], window: tuple[int, int]) -> list[TripleWitness | None]:
    """First witness ``(k, l, m)`` in lexicographic order for each delta, or None.

    (a) depends only on ``(l, m)`` and (b) only on ``(k, l)``, so both are
    swept along diagonals in the log domain; for each ``l`` we keep the first
    ``m`` with (a) < delta and the smallest ``k`` with (b) < delta.
    """
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    n = hi - lo + 1
    g = spec.log_abs(lo, hi)
    log_d = np.log(np.asarray(deltas, dtype=float))[:, None]
    nd = len(deltas)
    log_eps = math.log(eps)

    deltas_col = np.asarray(deltas, dtype=float)[:, None]
    w = np.exp(g)

    def below(log_q, lin_q):
        # linear values are exact for dyadic weights; logs cover the rest
        safe = np.isfinite(lin_q) & (lin_q < _LIN_HI)
        return np.where(safe, lin_q < deltas_col, log_q < log_d)

    first_m = np.full((nd, n), -1)
    E = np.full(n, log_eps)
    T = np.full(n, -np.inf)
    e_lin = np.full(n, float(eps))
    t_lin = np.zeros(n)
    with np.errstate(over="ignore", invalid="ignore"):
        for d in range(n):
            if d:
                E = E[:-1] - g[d:]
                T = np.logaddexp(T[:-1], 0.0) - g[d:]
                e_lin = e_lin[:-1] / w[d:]
                t_lin = (t_lin[:-1] + 1.0) / w[d:]
            la = _log_abs_diff(np.broadcast_to(E, (nd, n - d)), log_d + T)
            hit = below(la, np.abs(e_lin - deltas_col * t_lin)) & (first_m[:, : n - d] < 0)
            first_m[:, : n - d][hit] = d

        best_k = np.full((nd, n), -1)
        F = log_eps + g.copy()
        U = np.full(n, -np.inf)
        f_lin = eps * w
        u_lin = np.zeros(n)
        for d in range(n):
            if d:
                F = F[1:] + g[: n - d]
                U = g[: n - d] + np.logaddexp(0.0, U[1:])
                f_lin = f_lin[1:] * w[: n - d]
                u_lin = w[: n - d] * (1.0 + u_lin[1:])
            lb = _log_abs_diff(np.broadcast_to(F, (nd, n - d)), log_d + U)
            hit = below(lb, np.abs(f_lin - deltas_col * u_lin))
            best_k[:, d:][hit] = d

    out: list[TripleWitness | None] = []
    for t, delta in enumerate(deltas):
        ok = (first_m[t] >= 0) & (best_k[t] >= 0)
        if not ok.any():
            out.append(None)
            continue
        pos = np.nonzero(ok)[0]
        ks = pos - best_k[t, pos]
        j = int(np.lexsort((pos, ks))[0])
        pl = int(pos[j])
        k_, l_, m_ = lo + int(ks[j]), lo + pl, lo + pl + int(first_m[t, pl])
        a, b = psp_quantities(spec, eps, delta, k_, l_, m_)
        out.append(TripleWitness(k_, l_, m_, float(delta), a, b))
    return out


def psp_triple_check(spec: WeightSpec, eps: float, delta: float, window: tuple[int, int] = DEFAULT_WINDOW) -> Verdict:
    """Look for ``k <= l <= m`` in the window where both (a) and (b) fall below delta."""
    if not eps > delta > 0:
        raise ValueError("need eps > delta > 0")
    (w,) = _triple_witnesses(spec, eps, [delta], window)
    ev = {"eps": eps, "delta": delta, "window": list(window)}
    if w is None:
        return Verdict(UNKNOWN, WINDOW_LIMITED, ev)
    return Verdict(FAILS, "psp-triple", {**ev, "witness": w})


def psp_search(
    spec: WeightSpec,
    eps: float,
    window: tuple[int, int] = DEFAULT_WINDOW,
    grid: Sequence[float] | None = None,
) -> tuple[float | None, Verdict]:
    """First delta of a descending grid with no witness triple in the window."""
    grid = default_grid(eps) if grid is None else list(grid)
    if not grid:
        raise ValueError("empty delta grid")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise ValueError("delta grid must be strictly descending")
    if not all(eps > d > 0 for d in grid):
        raise ValueError("every grid delta must satisfy eps > delta > 0")
    witnesses = _triple_witnesses(spec, eps, grid, window)
    ev = {"eps": eps, "window": list(window), "grid": list(grid)}
    for delta, w in zip(grid, witnesses):
        if w is None:
            tried = [x for x in witnesses if x is not None]
            return delta, Verdict(UNKNOWN, WINDOW_LIMITED, {**ev, "delta": delta, "witnesses": tried})
    return None, Verdict(FAILS, "psp-triple", {**ev, "witnesses": witnesses})


def _defects_from_chain(spec: WeightSpec, chain: Sequence[SeqVector]) -> list[SeqVector]:
    return [b - apply_backward(spec, a) for a, b in zip(chain, chain[1:])]


def _violates_condition_ii(spec, ys, eps, delta, space) -> bool:
    if not ys or any(norm(y, space) >= delta for y in ys):
        return False
    n = len(ys)
    wrap = SeqVector()
    for i in range(n):
        wrap = wrap + iterate(spec, ys[n - 1 - i], i + 1)
    if norm(wrap, space) >= delta:
        return False
    for k in range(1, n + 1):
        partial = SeqVector()
        for i in range(k):
            partial = partial + iterate(spec, ys[k - 1 - i], i)
        if norm(partial, space) >= eps:
            return True
    return False


def _ramp_chain(spec, start, eps, step, delta, space, budget):
    """Grow a single spike by ``step`` per shift until it reaches eps, then shrink it to 0."""
    chain = [SeqVector(), SeqVector({start: step})]
    x = chain[-1]
    for _ in range(budget):
        if norm(x, space) >= eps:
            break
        # a negative shrink grows the spike radially by ``step``
        x = s_delta(apply_backward(spec, x), -step, space)
        chain.append(x)
    else:
        return None
    for _ in range(budget):
        bx = apply_backward(spec, x)
        if norm(bx, space) < delta:
            chain.append(SeqVector())
            return chain
        x = s_delta(bx, step, space)
        chain.append(x)
    return None


def psp_condition_ii_falsify(
    spec: WeightSpec,
    eps: float,
    delta: float,
    window: tuple[int, int] = DEFAULT_WINDOW,
    space: SpaceNorm = C0,
    shrink: float = 1e-9,
) -> list[SeqVector] | None:
    """Search for defects ``(y_i)`` violating the bounded-partial-sum condition.

    Candidates are the step defects of spike ramps started at each window
    index and of radial-shrink bridges through witness triples, all built at
    the strictly smaller step ``delta * (1 - shrink)``.
    """
    if not eps > delta > 0:
        raise ValueError("need eps > delta > 0")
    step = delta * (1.0 - shrink)
    lo, hi = window
    budget = 4 * (hi - lo + 1) + 4 * math.ceil(eps / step) + 8
    for s in range(lo, hi + 1):
        chain = _ramp_chain(spec, s, eps, step, delta, space, budget)
        if chain is None:
            continue
        ys = _defects_from_chain(spec, chain)
        if _violates_condition_ii(spec, ys, eps, delta, space):
            return ys
    (w,) = _triple_witnesses(spec, eps, [step], window)
    if w is not None:
        bridge = gen_sdelta_bridge(spec, eps, step, w.k, w.l, w.m, space)
        ys = _defects_from_chain(spec, bridge.points)
        if _violates_condition_ii(spec, ys, eps, delta, space):
            return ys
    return None


# ---------------------------------------------------------------------------
# uniform topological expansivity (forward shift F_w)

@dataclass(frozen=True)
class Decomposition:
    """``i <= t_minus`` goes to I_-, ``i >= t_plus`` to I_+; the gap uses overrides (default I_+)."""

    t_minus: float
    t_plus: float
    overrides: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if self.t_minus > self.t_plus:
            raise ValueError("need t_minus <= t_plus")
        for i, side in self.overrides:
            if side not in "+-" or not self.t_minus < i < self.t_plus:
                raise ValueError(f"bad override {(i, side)!r}")

    @classmethod
    def all_plus(cls) -> "Decomposition":
        return cls(-math.inf, -math.inf)

    @classmethod
    def all_minus(cls) -> "Decomposition":
        return cls(math.inf, math.inf)

    @classmethod
    def split(cls, s: int) -> "Decomposition":
        """I_- = {i <= s}, I_+ = {i > s}."""
        return cls(s, s + 1)

    def in_minus(self, i: int) -> bool:
        if i <= self.t_minus:
            return True
        return self.t_minus < i < self.t_plus and dict(self.overrides).get(i) == "-"

    def in_plus(self, i: int) -> bool:
        if i >= self.t_plus:
            return True
        return self.t_minus < i < self.t_plus and dict(self.overrides).get(i, "+") == "+"

    def to_dict(self) -> dict:
        def enc(t):
            return t if math.isfinite(t) else ("-inf" if t < 0 else "inf")

        return {"t_minus": enc(self.t_minus), "t_plus": enc(self.t_plus), "overrides": [list(o) for o in self.overrides]}


Schedule = Callable[[int], float] | tuple[float, float]


def _log_schedule(schedule: Schedule, n: np.ndarray) -> np.ndarray:
    if callable(schedule):
        return np.log(np.array([schedule(int(k)) for k in n], dtype=float))
    C, rho = schedule
    return math.log(C) + n * math.log(rho)


@dataclass(frozen=True)
class EnvelopeResult:
    passed: bool
    worst_index: int | None
    worst_n: int | None
    worst_value: float | None
    envelope: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_index": self.worst_index,
            "worst_n": self.worst_n,
            "worst_value": self.worst_value,
            "envelope": list(self.envelope),
        }


def _envelope(spec, plus, minus, lo_w, hi_w, n_max, schedule, extra=None) -> EnvelopeResult:
    """Shared envelope evaluation; ``extra(idx, n, side)`` adds per-index log terms."""
    off = lo_w - n_max
    W = np.abs(spec.values(off, hi_w + n_max))
    P = np.concatenate([[0.0], np.cumsum(np.log(W))])
    ns = np.arange(1, n_max + 1)
    idx = np.concatenate([plus, minus]).astype(int)
    side = np.concatenate([np.ones(len(plus)), -np.ones(len(minus))])
    if len(idx) == 0:
        return EnvelopeResult(True, None, None, None, ())
    order = np.argsort(idx, kind="stable")
    idx, side = idx[order], side[order]
    pos = idx - off
    # rows: n, cols: indices
    fwd = P[pos[None, :] + ns[:, None]] - P[pos[None, :]]
    bwd = -(P[pos[None, :]] - P[pos[None, :] - ns[:, None]])
    growth = np.where(side[None, :] > 0, fwd, bwd)
    if extra is not None:
        growth = growth + extra(idx, ns, side)
    env_log = growth.min(axis=1)
    arg = growth.argmin(axis=1)
    sched = _log_schedule(schedule, ns)
    bad = np.nonzero(~(env_log > sched))[0]

    def value(row):
        # direct products keep dyadic envelopes exact
        if extra is not None:
            return math.exp(float(env_log[row]))
        p, n = int(pos[arg[row]]), int(ns[row])
        if side[arg[row]] > 0:
            v = float(np.prod(W[p : p + n]))
        else:
            v = 1.0 / float(np.prod(W[p - n : p]))
        return v if math.isfinite(v) and v > 0 else math.exp(float(env_log[row]))

    envelope = tuple(value(r) for r in range(n_max))
    if len(bad):
        r = int(bad[0])
        return EnvelopeResult(False, int(idx[arg[r]]), int(ns[r]), envelope[r], envelope)
    r = int(np.argmin(env_log - sched))
    return EnvelopeResult(True, int(idx[arg[r]]), int(ns[r]), envelope[r], envelope)


def ute_numeric_check(
    spec: WeightSpec,
    decomposition: Decomposition,
    window: tuple[int, int] = DEFAULT_WINDOW,
    n_max: int = DEFAULT_N_MAX,
    schedule: Schedule = (1.0, 2.0**0.5),
) -> EnvelopeResult:
    """Certify ``||F^n e_i|| > schedule(n)`` on I_+ and ``||F^{-n} e_i|| > schedule(n)`` on I_-.

    Evaluated for every window index and ``1 <= n <= n_max``; the worst index
    is the one attaining the envelope at the first violated ``n`` (or at the
    tightest ``n`` when passing).
    """
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    plus = [i for i in range(lo, hi + 1) if decomposition.in_plus(i)]
    minus = [i for i in range(lo, hi + 1) if decomposition.in_minus(i)]
    return _envelope(spec, plus, minus, lo, hi, n_max, schedule)


def koethe_ute_check(
    matrix: KoetheMatrix,
    spec: WeightSpec,
    k: int,
    l: int,
    decomposition: Decomposition,
    window: tuple[int, int] = DEFAULT_WINDOW,
    n_max: int = DEFAULT_N_MAX,
    schedule: Schedule = (1.0, 2.0**0.5),
) -> EnvelopeResult:
    """Envelope check of ``|w_{i+n-1}...w_i| a_{i+n,l} / a_{i,k}`` (and its mirror on I_-).

    Indices with ``a_{i,k} = 0`` are excluded.
    """
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    if not (matrix.contains(lo - n_max) and matrix.contains(hi + n_max)):
        raise OutOfWindowError(
            f"window [{lo}, {hi}] with n_max={n_max} needs Köthe rows "
            f"[{lo - n_max}, {hi + n_max}], matrix has [{matrix.j_lo}, {matrix.j_hi}]"
        )
    col_k = matrix.column(k)
    col_l = matrix.column(l)

    def a_k(i):
        return col_k[i - matrix.j_lo]

    keep = [i for i in range(lo, hi + 1) if a_k(i) != 0]
    plus = [i for i in keep if decomposition.in_plus(i)]
    minus = [i for i in keep if decomposition.in_minus(i)]
    with np.errstate(divide="ignore"):
        log_l = np.log(col_l)
        log_k = np.log(col_k)

    def extra(idx, ns, side):
        rows = idx - matrix.j_lo
        target = rows[None, :] + np.where(side[None, :] > 0, 1, -1) * ns[:, None]
        return log_l[target] - log_k[rows][None, :]

    return _envelope(spec, plus, minus, lo, hi, n_max, schedule, extra=extra)


def _min_window_sum(h: np.ndarray, starts: np.ndarray) -> float:
    """``min(0, min over s in starts, e >= s of h[s..e])``."""
    if len(starts) == 0:
        return 0.0
    H = np.concatenate([[0.0], np.cumsum(h)])
    suffix_min = np.minimum.accumulate(H[::-1])[::-1]
    vals = suffix_min[starts + 1] - H[starts]
    return min(0.0, float(vals.min()))


def growth_certificate(spec: WeightSpec, decomposition: Decomposition) -> tuple[float, float] | None:
    """A geometric schedule ``(C, rho)`` the decomposition must beat, or None.

    ``rho`` is the square root of the slowest asymptotic growth rate among the
    tails each side reaches; ``C`` is half of ``exp`` of the most negative
    partial log-growth against ``rho``. Windows far out in a periodic tail
    reduce to windows near the core by removing full periods, so the
    minimum is taken over a bounded region around the core and thresholds.
    """
    r = rates(spec)
    d = decomposition
    logs = []
    if d.t_plus < math.inf:
        logs.append(r.log_right)
        if d.t_plus == -math.inf:
            logs.append(r.log_left)
    if d.t_minus > -math.inf:
        logs.append(-r.log_left)
        if d.t_minus == math.inf:
            logs.append(-r.log_right)
    if not logs or min(logs) <= 0:
        return None
    log_rho = min(logs) / 2
    finite = [t for t in (d.t_minus, d.t_plus) if math.isfinite(t)]
    ql, qr = spec.q_left, spec.q_right
    A = int(min([spec.core_start, *finite])) - 2 * ql - 2
    B = int(max([spec.core_end, *finite])) + 2 * qr + 2
    lo, hi = A - 2 * ql - 2, B + 2 * qr + 2
    g = spec.log_abs(lo, hi)
    region = np.arange(A, B + 1)
    plus_starts = np.array([i - lo for i in region if d.in_plus(int(i))], dtype=int)
    m_plus = _min_window_sum(g - log_rho, plus_starts)
    # minus side: windows [i-n, i-1] read right-to-left
    rev = (-g - log_rho)[::-1]
    minus_starts = np.array([hi - (i - 1) for i in region if d.in_minus(int(i))], dtype=int)
    m_minus = _min_window_sum(rev, minus_starts)
    C = 0.5 * math.exp(min(m_plus, m_minus))
    return C, math.exp(log_rho)


def ute_classify(
    spec: WeightSpec,
    space: SpaceNorm = C0,
    window: tuple[int, int] = DEFAULT_WINDOW,
    n_max: int = DEFAULT_N_MAX,
) -> Verdict:
    """Uniform topological expansivity of ``F_w`` on ``c0`` or ``l_p`` from the side rates."""
    if space.kind not in ("c0", "lp"):
        raise ValueError("ute_classify needs a c0 or lp space")
    r = rates(spec)
    sl, sr = r.side("left"), r.side("right")
    ev = {"r_left": r.r_left, "r_right": r.r_right}
    if sl > 0 and sr > 0:
        dec = Decomposition.all_plus()
    elif sl < 0 and sr < 0:
        dec = Decomposition.all_minus()
    elif sl < 0 < sr:
        dec = Decomposition.split(spec.core_start - 1)
    else:
        return Verdict(FAILS, "rates", ev)
    C, rho = growth_certificate(spec, dec)
    check = ute_numeric_check(spec, dec, window, n_max, (C, rho))
    ev.update(decomposition=dec, schedule={"C": C, "rho": rho}, check=check)
    if not check.passed:
        return Verdict(UNKNOWN, WINDOW_LIMITED, ev)
    return Verdict(HOLDS, "rates", ev)
