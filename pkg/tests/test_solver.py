import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_instance
from shiftlab.solver import (
    brute_force_shadow,
    constrained_coordinates,
    finite_shadow_solve,
    parse_mode,
    shadow_error,
)
from shiftlab.spaces import SeqVector, SpaceNorm, apply_backward
from shiftlab.trajectories import gen_genhyp
from shiftlab.weights import WeightSpec


def test_genhyp_support_bounded_certificate(genhyp_spec):
    traj = gen_genhyp(1.0, 3, 20)
    res = finite_shadow_solve(genhyp_spec, traj, 1.0, mode="support:7")
    cert = res.certificate
    assert res.status == "infeasible" and cert["coordinate"] == 8
    assert cert["upper_constraint"] == {"support_bound": True, "lower": 0.0, "upper": 0.0}
    assert (cert["lower_constraint"]["j"], cert["lower_constraint"]["n"]) == (8, 0)
    assert cert["lower_constraint"]["lower"] > 0
    assert len(cert["endpoints"]) == 21


def test_genhyp_unrestricted_is_the_fixed_point(genhyp_spec):
    traj = gen_genhyp(1.0, 3, 20)
    res = finite_shadow_solve(genhyp_spec, traj, 1.0)
    assert res.status == "feasible" and res.error < 1.0
    for i in constrained_coordinates(traj.points):
        assert abs(res.shadow[i] - 2.0 ** -abs(i)) <= 1e-9


def test_solver_rejects_bad_input(genhyp_spec):
    traj = gen_genhyp(1.0, 3, 5)
    with pytest.raises(ValueError):
        finite_shadow_solve(genhyp_spec, traj, 0.0)
    with pytest.raises(ValueError):
        parse_mode("support:-1")
    with pytest.raises(ValueError):
        parse_mode("sometimes")


def test_zero_chain_has_zero_shadow():
    res = finite_shadow_solve(WeightSpec.constant(3.0), [SeqVector(), SeqVector()], 0.1)
    assert res.status == "feasible" and res.shadow == SeqVector() and res.error == 0.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 1.0))
def test_feasible_shadows_verify_independently(seed, eps):
    rng = np.random.default_rng(seed)
    spec, points = random_instance(rng)
    res = finite_shadow_solve(spec, points, eps)
    if res.status == "feasible":
        assert shadow_error(spec, res.shadow, points) < eps
    else:
        m = res.certificate["coordinate"]
        assert res.certificate["lower_constraint"]["lower"] > res.certificate["upper_constraint"]["upper"]
        # the oracle cannot do better on that coordinate either
        best, _, slack = brute_force_shadow(spec, points, eps, step=1e-3)
        assert best >= eps - slack


def test_lp_mode_reports_true_error():
    spec = WeightSpec.constant(1.0)
    points = [SeqVector({0: 1.0, 1: 1.0}), SeqVector({-1: 1.0, 0: 1.0})]
    res = finite_shadow_solve(spec, points, 0.5, space=SpaceNorm.lp(1))
    assert res.status == "feasible" and res.error == 0.0
    noisy = [points[0], points[1] + SeqVector({-1: 0.3, 0: -0.3})]
    res = finite_shadow_solve(spec, noisy, 0.25, space=SpaceNorm.lp(1))
    # sup-norm feasible (error 0.15) but the l1 error is 0.3
    assert res.status == "unknown" and res.certificate["sup_error"] < 0.25
    assert math.isclose(res.error, shadow_error(spec, res.shadow, noisy, SpaceNorm.lp(1)))


def test_brute_force_size_guards():
    spec = WeightSpec.constant(1.0)
    with pytest.raises(ValueError):
        brute_force_shadow(spec, [SeqVector()] * 6, 1.0)
    with pytest.raises(ValueError):
        brute_force_shadow(spec, [SeqVector({i: 1.0 for i in range(10)})] * 2, 1.0)
