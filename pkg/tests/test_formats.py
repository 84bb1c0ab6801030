import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftlab import formats
from shiftlab.spaces import KoetheMatrix, SeqVector, SpaceNorm
from shiftlab.trajectories import Pseudotrajectory, gen_ramp
from shiftlab.weights import WeightSpec

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300).filter(lambda v: abs(v) >= 1e-300)
vectors = st.dictionaries(st.integers(-10**6, 10**6), finite, max_size=6).map(SeqVector)


@given(vectors)
def test_vector_round_trip(x):
    assert formats.vector_from_text(formats.vector_to_text(x)) == x


@given(st.lists(vectors, min_size=2, max_size=5), st.floats(1e-9, 10), st.sampled_from(["c0", "lp:1", "lp:2.5"]))
def test_trajectory_round_trip(points, delta, space):
    traj = Pseudotrajectory(tuple(points), delta=delta, space=formats.parse_space(space))
    back = formats.trajectory_from_text(formats.trajectory_to_text(traj))
    assert back == traj


def test_spec_round_trip():
    spec = WeightSpec(-2, [0.1, -3.0], [1 / 3], [2.0, 0.7])
    assert formats.spec_from_text(formats.spec_to_text(spec)) == spec


def test_koethe_round_trip():
    a = KoetheMatrix.from_function(-3, 3, 2, lambda j, k: (1 + abs(j)) ** k / 3)
    assert formats.koethe_from_text(formats.koethe_to_text(a)) == a


def test_periodic_ramp_round_trip():
    traj = gen_ramp(0.1, 11)
    assert formats.trajectory_from_text(formats.trajectory_to_text(traj)) == traj


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"core_start": 0,\n "left_period": [1, 0],\n "right_period": [2]}', "line 2, field 'left_period'"),
        ('{"core_start": 0,\n "left_period": [1],\n "right_period": "x"}', "line 3, field 'right_period'"),
        ('{"core_start": 0.5, "left_period": [1], "right_period": [2]}', "field 'core_start'"),
        ('{"left_period": [1], "right_period": [2]}', "missing field 'core_start'"),
        ('{"core_start": 0,\n\n oops', "line 3"),
        ("[1, 2]", "must be a JSON object"),
    ],
)
def test_spec_diagnostics(text, fragment):
    with pytest.raises(formats.FormatError, match=fragment):
        formats.spec_from_text(text)


def test_trajectory_diagnostics():
    with pytest.raises(formats.FormatError, match="field 'points'"):
        formats.trajectory_from_text('{"delta": 0.1, "points": [[[0, "a"]]]}')
    with pytest.raises(formats.FormatError, match="bad space"):
        formats.trajectory_from_text('{"delta": 0.1, "space": "l7", "points": [[], []]}')


def test_dumps_is_deterministic_and_handles_infinity():
    text = formats.dumps({"b": float("inf"), "a": [1.5, float("-inf")]})
    assert text == formats.dumps({"a": [1.5, float("-inf")], "b": float("inf")})
    assert '"inf"' in text and '"-inf"' in text


def test_parse_space_koethe_needs_matrix():
    with pytest.raises(formats.FormatError):
        formats.parse_space("koethe:1:1")
    a = KoetheMatrix(0, 1, np.ones((2, 1)))
    assert formats.parse_space("koethe:1:0", a) == SpaceNorm.koethe(a, 1, 0.0)
