import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import bridge_is_monotone
from shiftlab.criteria import make_periodic_point, psp_quantities
from shiftlab.spaces import C0, SeqVector, SpaceNorm, apply_backward, iterate, norm
from shiftlab.trajectories import (
    ConstructionError,
    Pseudotrajectory,
    close_to_zero,
    gen_genhyp,
    gen_ramp,
    gen_sdelta_bridge,
    is_valid,
    renormalized_pullback_orbit,
    s_delta,
    splice_with_periodic,
    validate,
)
from shiftlab.weights import WeightSpec


@pytest.mark.parametrize("m", [0, 1, 3, 6])
def test_genhyp_defects_are_exact(genhyp_spec, m):
    traj = gen_genhyp(1.0, m, 12)
    _, defects = validate(traj, genhyp_spec)
    assert set(defects) == {2.0 ** (-m - 1)}
    assert traj.delta == 2.0**-m


def test_ramp_shape(trivcr_spec):
    traj = gen_ramp(0.1, 11)
    assert len(traj) == 23 and traj.periodic
    assert math.isclose(traj.max_norm(), 1.1, abs_tol=1e-12)
    assert is_valid(traj, trivcr_spec)


def test_s_delta_shrinks_norm():
    x = SeqVector({2: -3.0})
    assert norm(s_delta(x, 1.0)) == 2.0
    assert s_delta(SeqVector(), 1.0) == SeqVector()
    y = SeqVector({0: 3.0, 1: 4.0})
    assert math.isclose(norm(s_delta(y, 1.0, SpaceNorm.lp(2)), SpaceNorm.lp(2)), 4.0)


def test_pseudotrajectory_invariants():
    with pytest.raises(ValueError):
        Pseudotrajectory((SeqVector(),), delta=1.0)
    with pytest.raises(ValueError):
        Pseudotrajectory((SeqVector(), SeqVector()), delta=0.0)
    with pytest.raises(ValueError):
        Pseudotrajectory((SeqVector(), SeqVector({0: 1.0})), delta=1.0, periodic=True)


def test_bridge_rejects_bad_triples(trivcr_spec):
    with pytest.raises(ValueError):
        gen_sdelta_bridge(trivcr_spec, 1.0, 0.1, 2, 1, 3)
    with pytest.raises(ValueError):
        gen_sdelta_bridge(trivcr_spec, 1.0, 1.0, 0, 1, 3)


def test_bridge_on_unit_weights(trivcr_spec):
    # in the unit region the bridge is a ramp up and down in steps of delta
    eps, delta, k, l, m = 1.0, 0.25, -10, -6, -3
    bridge = gen_sdelta_bridge(trivcr_spec, eps, delta, k, l, m)
    assert len(bridge) == m - k + 3
    _, defects = validate(bridge, trivcr_spec)
    a, b = psp_quantities(trivcr_spec, eps, delta, k, l, m)
    assert math.isclose(defects[0], a, abs_tol=1e-12) and math.isclose(defects[-1], b, abs_tol=1e-12)
    assert all(math.isclose(d, delta, rel_tol=1e-12) for d in defects[1:-1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bridge_endpoints_match_quantities(seed):
    rng = np.random.default_rng(seed)
    spec = WeightSpec(0, rng.uniform(0.5, 2, 3).tolist(), rng.uniform(0.5, 2, 2).tolist(), rng.uniform(0.5, 2, 2).tolist())
    k = int(rng.integers(-6, 3))
    l = k + int(rng.integers(0, 4))
    m = l + int(rng.integers(0, 4))
    eps = float(rng.uniform(1, 3))
    delta = float(rng.uniform(0.01, 0.2))
    bridge = gen_sdelta_bridge(spec, eps, delta, k, l, m)
    _, defects = validate(bridge, spec)
    assert bridge.points[m - l + 1] == SeqVector({l: eps})
    if bridge_is_monotone(spec, bridge, delta, k, l, m):
        a, b = psp_quantities(spec, eps, delta, k, l, m)
        assert math.isclose(defects[0], a, rel_tol=1e-9, abs_tol=1e-10)
        assert math.isclose(defects[-1], b, rel_tol=1e-9, abs_tol=1e-10)
        assert all(math.isclose(d, delta, rel_tol=1e-9) for d in defects[1:-1])


def test_pullback_reversed_is_a_delta_chain(trivcr_spec):
    # unit weights on the left: each pullback step loses exactly delta of norm
    orbit = renormalized_pullback_orbit(trivcr_spec, SeqVector({-50: 1.0}), 0.1, 200)
    assert len(orbit) in (10, 11) and norm(orbit[-1]) < 0.1 + 1e-12
    chain = Pseudotrajectory(tuple(reversed(orbit)), delta=0.1)
    _, defects = validate(chain, trivcr_spec)
    assert all(math.isclose(d, 0.1, rel_tol=1e-9) for d in defects)


def _random_periodic_chain(rng, spec, delta, length):
    pts = [SeqVector({int(i): float(v) for i, v in zip(rng.integers(-4, 5, 3), rng.uniform(-1, 1, 3))})]
    for _ in range(length - 2):
        noise = SeqVector({int(rng.integers(-6, 6)): float(rng.uniform(-0.4, 0.4) * delta)})
        pts.append(apply_backward(spec, pts[-1]) + noise)
    pts.append(pts[0])
    return Pseudotrajectory(tuple(pts), delta=max(validate(Pseudotrajectory(tuple(pts), 1.0), spec)[0] * 1.01, 1e-9))


def test_close_to_zero_embeds_input(trivcr_spec):
    traj = gen_ramp(0.1, 4)
    out = close_to_zero(traj, trivcr_spec, 0.1 + 1e-9)
    assert out.points[0] == SeqVector() and out.points[-1] == SeqVector()
    cycle = traj.points[:-1]
    starts = [i for i in range(len(out) - len(cycle) + 1) if out.points[i : i + len(cycle)] == cycle]
    assert starts
    assert validate(out, trivcr_spec)[0] < 0.1 + 1e-9


def test_close_to_zero_unrotated_starts_with_input(trivcr_spec):
    traj = gen_ramp(0.1, 3)
    out = close_to_zero(traj, trivcr_spec, 0.11, rotate=False)
    assert out.points[: len(traj) - 1] == traj.points[:-1]


def test_close_to_zero_rejects_bad_input(trivcr_spec):
    with pytest.raises(ValueError):
        close_to_zero(gen_genhyp(1.0, 2, 4), trivcr_spec, 1.0)
    with pytest.raises(ValueError):
        close_to_zero(gen_ramp(0.1, 3), trivcr_spec, 0.05)


def test_splice_with_periodic_points(genhyp_spec):
    p, _ = make_periodic_point(genhyp_spec, (-30, 30))
    xs = Pseudotrajectory((p, apply_backward(genhyp_spec, p), p), delta=0.1)
    out = splice_with_periodic(xs, genhyp_spec, 0.1, [(p, 1), (p, 1)])
    assert out.periodic and out.points[: len(xs)] == xs.points
    assert validate(out, genhyp_spec)[0] < 0.1
    with pytest.raises(ValueError):
        splice_with_periodic(xs, genhyp_spec, 0.1, [(p, 1)])
    with pytest.raises(ValueError):
        splice_with_periodic(xs, genhyp_spec, 0.1, [(p + SeqVector({0: 1.0}), 1), (p, 1)])


def test_splice_rejects_non_periodic_points(genhyp_spec):
    x = SeqVector({0: 1.0})
    xs = Pseudotrajectory((x, apply_backward(genhyp_spec, x)), delta=0.1)
    with pytest.raises(ConstructionError):
        splice_with_periodic(xs, genhyp_spec, 0.1, [(x, 3)])
