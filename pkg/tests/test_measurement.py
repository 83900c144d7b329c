import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paulirecon.constructions import GaussStateSpec, gauss_state, reflect_conjugate
from paulirecon.measurement import (
    FrameSet,
    MagnitudeProfile,
    binary_ones,
    embedding_obstruction,
    forward,
    is_member,
    residual,
)
from paulirecon.solvers import grid_frames, grid_profile
from paulirecon.statespace import CharacterFrame, GridFunction, random_frame, standard_frame


def delta_char(p):
    return FrameSet((standard_frame(p, "delta"), CharacterFrame(p)))


def test_frameset_validation():
    with pytest.raises(ValueError):
        FrameSet(())
    with pytest.raises(ValueError):
        FrameSet((standard_frame(2), standard_frame(3, "other")))
    with pytest.raises(ValueError):
        FrameSet((standard_frame(2), standard_frame(2)))


def test_profile_rejects_negative():
    with pytest.raises(ValueError):
        MagnitudeProfile([[1.0, -0.1]])


def test_forward_first_frame_vector(rng):
    fr = random_frame(4, rng)
    b = forward(fr.columns[:, 0], FrameSet((fr,)))
    np.testing.assert_allclose(b.values, [[1, 0, 0, 0]], atol=1e-14)


def test_forward_gauss_state_flat():
    b = forward(gauss_state(GaussStateSpec(5, 1)), delta_char(5))
    np.testing.assert_allclose(b.values[0], 1, atol=1e-14)
    np.testing.assert_allclose(b.values[1], 1 / math.sqrt(5), atol=1e-14)


def test_forward_phase_invariance(rng):
    fs = FrameSet((random_frame(6, rng, "a"), random_frame(6, rng, "b"), CharacterFrame(6)))
    for _ in range(100):
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        theta = rng.uniform(0, 2 * np.pi)
        d = np.abs(forward(x, fs).values - forward(np.exp(1j * theta) * x, fs).values)
        assert d.max() <= 1e-14 * max(1.0, np.linalg.norm(x))


@given(st.integers(0, 2 ** 31 - 1), st.floats(0, 2 * np.pi))
def test_forward_phase_invariance_property(seed, theta):
    r = np.random.default_rng(seed)
    x = r.standard_normal(5) + 1j * r.standard_normal(5)
    x /= np.linalg.norm(x)
    fs = FrameSet((standard_frame(5), random_frame(5, r, "r")))
    assert np.max(np.abs(forward(x, fs).values - forward(np.exp(1j * theta) * x, fs).values)) <= 1e-14


def test_forward_dimension_mismatch():
    with pytest.raises(ValueError):
        forward(np.ones(3), FrameSet((standard_frame(2),)))


def test_residual_examples():
    fs = FrameSet((standard_frame(2),))
    assert residual([1, 0], fs, forward([0, 1], fs)) == pytest.approx(math.sqrt(2))
    x = np.array([0.3, 0.4j, -0.5, 0.1 + 0.2j, 0.6, 0.2, -0.1j])
    assert residual(x, delta_char(7), forward(x, delta_char(7))) == 0


def test_residual_perturbed_plant(rng):
    fs = delta_char(7)
    x = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    x /= np.linalg.norm(x)
    b = forward(x, fs)
    eps = 1e-3
    y = x.copy()
    y[2] += eps
    # oracle: direct evaluation of the two coefficient sets
    direct = math.sqrt(
        sum((abs(y[i]) - abs(x[i])) ** 2 for i in range(7))
        + sum((abs(np.sum(y * np.exp(-2j * np.pi * j * np.arange(7) / 7)) / 7)
               - abs(np.sum(x * np.exp(-2j * np.pi * j * np.arange(7) / 7)) / 7)) ** 2 for j in range(7))
    )
    r = residual(y, fs, b)
    assert r == pytest.approx(direct, rel=1e-9)
    assert 0 < r <= 10 * eps


def test_residual_shape_mismatch():
    with pytest.raises(ValueError):
        residual(np.ones(2), FrameSet((standard_frame(2),)), MagnitudeProfile([[1, 0], [0, 1]]))


def test_residual_roundoff_bound(rng):
    for n, m in [(3, 2), (8, 3), (20, 4)]:
        fs = FrameSet(tuple(random_frame(n, rng, f"f{k}") for k in range(m)))
        for _ in range(20):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x /= np.linalg.norm(x)
            assert residual(x, fs, forward(x, fs)) <= 1e-12 * n * m


def test_profiles_are_normalized(rng):
    fs = FrameSet((standard_frame(9), random_frame(9, rng, "r")))
    x = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    x /= np.linalg.norm(x)
    assert forward(x, fs).is_normalized()


def test_is_member_examples():
    fs = delta_char(5)
    x = gauss_state(GaussStateSpec(5, 2))
    b = forward(x, fs)
    assert is_member(x, fs, b, 1e-10)
    assert not is_member(np.eye(5)[0], fs, b, 1e-10)
    with pytest.raises(ValueError):
        is_member(x, fs, b, 0)


def test_is_member_reflected_partner():
    fn = lambda x: np.exp(-x ** 2 / 2) * np.exp(1j * (x - x ** 2))  # noqa: E731
    psi = GridFunction.from_function(fn, 1024, 12.0)
    partner = reflect_conjugate(psi)
    fs = grid_frames(1024, 12.0)
    b = grid_profile(psi)
    assert residual(partner.as_state(), fs, b) < 1e-12
    assert is_member(partner.as_state(), fs, b, 1e-8)


def test_profile_csv_round_trip(rng):
    b = MagnitudeProfile(np.abs(rng.standard_normal((3, 5))))
    again = MagnitudeProfile.from_csv(b.to_csv())
    np.testing.assert_array_equal(again.values, b.values)
    assert len(b.to_csv().strip().splitlines()) == 3


@pytest.mark.parametrize("k,expected", [(0, 0), (8, 1), (11, 3), (7, 3), (2 ** 40 - 1, 40)])
def test_binary_ones(k, expected):
    assert binary_ones(k) == expected


def test_binary_ones_matches_string_count():
    for k in range(5000):
        assert binary_ones(k) == bin(k).count("1")


@pytest.mark.parametrize("n,lhs,rhs,holds", [(9, 26, 30, False), (2, 5, 2, True), (8, 23, 22, True),
                                             (5, 14, 14, False), (7, 20, 20, False)])
def test_embedding_obstruction_examples(n, lhs, rhs, holds):
    ob = embedding_obstruction(n)
    assert (ob.lhs, ob.rhs, ob.inequality_holds) == (lhs, rhs, holds)


def test_obstruction_fails_from_nine_on():
    for n in range(9, 4097):
        ob = embedding_obstruction(n)
        assert not ob.inequality_holds
        assert (n - 4 >= 2 * binary_ones(n - 1)) == (not ob.inequality_holds)


def test_obstruction_rejects_small_n():
    with pytest.raises(ValueError):
        embedding_obstruction(1)
