"""Scripted reproductions of the two worked counterexamples.

Each function returns a list of named checks; a run passes iff all do.
"""
from __future__ import annotations

from .criteria import (
    chain_recurrence_trivial,
    default_grid,
    periodic_point_exists,
    psp_quantities,
    psp_search,
)
from .solver import FEASIBLE, INFEASIBLE, constrained_coordinates, finite_shadow_solve
from .trajectories import gen_genhyp, gen_ramp, is_valid, validate
from .weights import WeightSpec

#: w = 2 right of 0, w = 1/2 at and left of 0
GENHYP_SPEC = WeightSpec.two_sided(0.5, 2.0, first_right=1)
#: w = 1/2 for k >= 0, w = 1 for k < 0
TRIVCR_SPEC = WeightSpec.two_sided(1.0, 0.5, first_right=0)


def _check(name: str, passed: bool, **detail) -> dict:
    return {"check": name, "passed": bool(passed), "detail": detail}


def repro_genhyp(eps: float = 1.0, m: int = 3, length: int = 20, bounds=range(5, 13)) -> list[dict]:
    spec = GENHYP_SPEC
    traj = gen_genhyp(eps, m, length)
    _, defects = validate(traj, spec)
    target = eps * 2.0 ** (-m - 1)
    checks = [_check("defects-exact", all(d == target for d in defects), target=target, defects=sorted(set(defects)))]

    conflicts = {}
    ok = True
    for M in bounds:
        res = finite_shadow_solve(spec, traj, eps, mode=M)
        coord = res.certificate.get("coordinate")
        conflicts[str(M)] = coord
        ok &= res.status == INFEASIBLE and coord is not None and coord > m + 1
    checks.append(_check("support-bounded-infeasible", ok, conflict_coordinates=conflicts))

    res = finite_shadow_solve(spec, traj, eps)
    coords = constrained_coordinates(traj.points)
    gap = max(abs(res.shadow[i] - eps * 2.0 ** -abs(i)) for i in coords) if res.shadow is not None else None
    checks.append(_check("unrestricted-exact-shadow", res.status == FEASIBLE and gap is not None and gap <= 1e-9, max_gap=gap))
    return checks


def repro_trivcr(eps: float = 1.0, window=(-64, 64), grid_count: int = 12) -> list[dict]:
    spec = TRIVCR_SPEC
    cr = chain_recurrence_trivial(spec)
    sums = cr.evidence["partial_sums_iiiB"]
    exact = all(s == 1.0 - 2.0**-n for n, s in enumerate(sums, start=1))
    checks = [_check("chain-recurrence-iiiB", cr.holds and cr.reason == "iiiB" and exact, reason=cr.reason)]

    pp = periodic_point_exists(spec)
    checks.append(_check("no-periodic-points", pp.status == "fails", status=pp.status))

    ramp = gen_ramp(0.1, 11)
    top = ramp.max_norm()
    checks.append(
        _check("ramp-leaves-ball", is_valid(ramp, spec) and abs(top - 1.1) <= 1e-12 and top > eps, max_norm=top, points=len(ramp))
    )

    found, verdict = psp_search(spec, eps, window, default_grid(eps, grid_count))
    witnesses = verdict.evidence.get("witnesses", [])
    rechecked = all(
        max(psp_quantities(spec, eps, w.delta, w.k, w.l, w.m)) < w.delta for w in witnesses
    )
    checks.append(
        _check(
            "psp-triple-witnesses",
            found is None and rechecked,
            first_delta_without_witness=found,
            window=list(window),
            witnesses=[w.to_dict() for w in witnesses],
        )
    )
    return checks


CASES = {"genhyp": repro_genhyp, "trivcr": repro_trivcr}
