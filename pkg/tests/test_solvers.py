import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paulirecon import solvers as sv
from paulirecon.constructions import reflect_conjugate
from paulirecon.measurement import FrameSet, MagnitudeProfile, forward, is_member, residual
from paulirecon.statespace import (
    CharacterFrame,
    GridFunction,
    projective_distance,
    random_frame,
    standard_frame,
)


def test_config_validation():
    for kw in ({"max_iters": 0}, {"tol": 0}, {"restarts": 0}, {"distinctness_threshold": 1.0}):
        with pytest.raises(ValueError):
            sv.SolverConfig(**kw)


def test_rng_for_is_keyed():
    a = sv.rng_for(3, 1).standard_normal(4)
    np.testing.assert_array_equal(a, sv.rng_for(3, 1).standard_normal(4))
    assert not np.array_equal(a, sv.rng_for(3, 2).standard_normal(4))


def test_project_magnitudes_examples():
    fr = standard_frame(2)
    np.testing.assert_allclose(sv.project_magnitudes([1, 0], fr, [0.6, 0.8]), [0.6, 0.8])
    y = sv.project_magnitudes([1j, -2], fr, [0.6, 0.8])
    np.testing.assert_allclose(y, [0.6j, -0.8], atol=1e-15)
    with pytest.raises(ValueError):
        sv.project_magnitudes([1, 0], fr, [1.0])
    with pytest.raises(ValueError):
        sv.project_magnitudes([1, 0], fr, [1.0, -0.1])


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 12))
@settings(max_examples=100, deadline=None)
def test_project_magnitudes_attains_target_and_is_idempotent(seed, n):
    rng = np.random.default_rng(seed)
    fr = random_frame(n, rng) if seed % 2 else CharacterFrame(n)
    row = np.abs(rng.standard_normal(n))
    x = sv.random_state(n, rng)
    y = sv.project_magnitudes(x, fr, row)
    assert np.max(np.abs(np.abs(fr.analyze(y)) - row)) <= 1e-12
    z = sv.project_magnitudes(y, fr, row)
    assert np.max(np.abs(z - y)) <= 1e-12


def planted(n, seed, frames):
    x = sv.random_state(n, sv.rng_for(seed, 999))
    return x, forward(x, frames)


def test_reconstruct_planted_dim7():
    fs = sv.character_pair(7)
    x, b = planted(7, 0, fs)
    rec = sv.reconstruct(fs, b, sv.SolverConfig(seed=0))
    assert rec.converged and rec.residual <= 1e-6
    assert is_member(rec.state, fs, b, 1e-6)
    assert rec.iterations <= 500


def test_reconstruct_single_frame_converges_immediately():
    fs = FrameSet((standard_frame(4),))
    b = MagnitudeProfile([[0.5, 0.5, 0.5, 0.5]])
    rec = sv.reconstruct(fs, b)
    assert rec.converged and rec.iterations == 1 and rec.restart == 0


def test_reconstruct_infeasible_profile():
    fs = FrameSet((standard_frame(3), CharacterFrame(3)))
    # rows of norm 1 and 2 cannot come from one state
    b = MagnitudeProfile([[1.0, 0.0, 0.0], [2 / math.sqrt(3)] * 3])
    rec = sv.reconstruct(fs, b, sv.SolverConfig(restarts=3))
    assert not rec.converged
    assert rec.residual > 0.1


def test_reconstruct_shape_mismatch():
    with pytest.raises(ValueError):
        sv.reconstruct(sv.character_pair(3), MagnitudeProfile(np.ones((2, 4))))


def test_alternating_residual_is_monotone():
    fs = FrameSet((standard_frame(9), random_frame(9, np.random.default_rng(5), "r")))
    for seed in range(10):
        _, b = planted(9, seed, fs)
        run = sv._single_run(fs, b.values, sv.SolverConfig(max_iters=300, seed=seed), 0)
        t = np.array(run.trace)
        assert np.all(np.diff(t) <= 1e-12)


def test_reconstruct_is_deterministic():
    fs = sv.character_pair(7)
    _, b = planted(7, 3, fs)
    for method in ("alternating", "raar"):
        a = sv.reconstruct(fs, b, sv.SolverConfig(seed=3), method=method)
        c = sv.reconstruct(fs, b, sv.SolverConfig(seed=3), method=method)
        np.testing.assert_array_equal(a.state, c.state)
        assert (a.residual, a.iterations, a.restart) == (c.residual, c.iterations, c.restart)


def test_threads_do_not_change_result():
    fs = sv.character_pair(7)
    for seed in (1, 4, 17):
        _, b = planted(7, seed, fs)
        one = sv.reconstruct(fs, b, sv.SolverConfig(seed=seed))
        four = sv.reconstruct(fs, b, sv.SolverConfig(seed=seed), threads=4)
        np.testing.assert_array_equal(one.state, four.state)
        assert one.restart == four.restart and one.residual == four.residual


def test_raar_needs_two_frames():
    fs = FrameSet((standard_frame(3), CharacterFrame(3), random_frame(3, np.random.default_rng(0), "r")))
    with pytest.raises(ValueError):
        sv.reconstruct(fs, forward(np.ones(3), fs), method="raar")
    with pytest.raises(ValueError):
        sv.reconstruct(sv.character_pair(3), forward(np.ones(3), sv.character_pair(3)), method="newton")


def test_raar_planted_dim7():
    fs = sv.character_pair(7)
    hits = 0
    for seed in range(10):
        _, b = planted(7, seed, fs)
        rec = sv.reconstruct(fs, b, sv.SolverConfig(seed=seed), method="raar")
        hits += rec.converged
        if rec.converged:
            assert is_member(rec.state, fs, b, 1e-6)
    assert hits >= 9


def test_hand_witness_single_frame():
    fs = FrameSet((standard_frame(2),))
    x = np.array([1, 1]) / math.sqrt(2)
    y = np.array([1, 1j]) / math.sqrt(2)
    w = sv.make_witness(x, y, fs, forward(x, fs))
    assert w.distance == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert sv.certify_witness(w, fs, 1e-12)
    assert not sv.certify_witness(w, fs, 1e-12, threshold=0.8)
    rows = w.to_csv().strip().splitlines()
    assert rows[0] == "index,x_re,x_im,y_re,y_im" and len(rows) == 3


def test_certify_rejects_non_member():
    fs = sv.character_pair(5)
    x = sv.random_state(5, sv.rng_for(0))
    y = sv.random_state(5, sv.rng_for(1))
    w = sv.make_witness(x, y, fs, forward(x, fs))
    assert not sv.certify_witness(w, fs, 1e-6)


def test_ambiguity_search_single_frame_finds_pairs():
    fs = FrameSet((standard_frame(3),))
    ws = sv.ambiguity_search(fs, sv.SolverConfig(restarts=5), trials=1)
    assert ws
    assert all(sv.certify_witness(w, fs, 1e-6) for w in ws)


def test_flat_profile_members():
    members, pairs = sv.gauss_witnesses(7)
    fs = sv.character_pair(7)
    assert len(members) == 6 and len(pairs) == 15
    for w in pairs:
        assert sv.certify_witness(w, fs, 1e-12)
        assert w.distance == pytest.approx(math.sqrt(1 - 1 / 7), abs=1e-10)


def test_ambiguity_search_with_flat_profile():
    fs = sv.character_pair(7)
    members, _ = sv.gauss_witnesses(7)
    b = forward(members[0], fs)
    ws = sv.ambiguity_search(fs, sv.SolverConfig(restarts=40, max_iters=1000), profile=b, method="raar")
    assert ws
    for w in ws:
        assert sv.certify_witness(w, fs, 1e-6)
        assert w.distance >= 1e-2


def test_three_generic_frames_in_dim2_are_injective():
    rng = np.random.default_rng(11)
    fs = FrameSet(tuple(random_frame(2, rng, f"f{k}") for k in range(3)))
    ws = sv.ambiguity_search(fs, sv.SolverConfig(restarts=10, seed=2), trials=3)
    assert ws == []
    # oracle: sweep the Bloch sphere; only states near the planted ray fit its profile
    x = sv.random_state(2, sv.rng_for(2, 1 << 20, 0))
    b = forward(x, fs)
    th, ph = np.meshgrid(np.linspace(0, np.pi, 181), np.linspace(0, 2 * np.pi, 361), indexing="ij")
    far = []
    for t, p in zip(th.ravel(), ph.ravel()):
        s = np.array([math.cos(t / 2), np.exp(1j * p) * math.sin(t / 2)])
        if projective_distance(s, x) > 0.2:
            far.append(residual(s, fs, b))
    assert min(far) > 1e-2


def test_ambiguity_search_rejects_zero_trials():
    with pytest.raises(ValueError):
        sv.ambiguity_search(sv.character_pair(3), trials=0)


def gaussian_fn(x):
    return np.exp(-x ** 2 / 2) + 0j


def chirped_fn(x):
    return np.exp(-x ** 2 / 2) * np.exp(1j * x ** 2)


def shifted_fn(x):
    return np.exp(-(x - 1) ** 2 / 2) * np.exp(1j * x ** 2)


def probe(fn, restarts, method="raar"):
    psi = GridFunction.from_function(fn, 64, 6.0)
    return sv.conjecture_probe(psi, sv.SolverConfig(max_iters=2000, restarts=restarts), psi_fn=fn, method=method)


def test_grid_profile_matches_frames():
    psi = GridFunction.from_function(chirped_fn, 64, 6.0)
    fs = sv.grid_frames(64, 6.0)
    assert residual(psi.as_state(), fs, sv.grid_profile(psi)) < 1e-13


def test_probe_real_gaussian_only_psi():
    rep = probe(gaussian_fn, 10)
    assert rep.counts["psi1"] == rep.counts["other"] == 0
    assert rep.counts["psi"] >= 1
    assert rep.flagged == []


def test_probe_even_chirp_shows_both_classes():
    rep = probe(chirped_fn, 50)
    assert rep.psi1_residual < 1e-12
    assert rep.counts["psi"] >= 1 and rep.counts["psi1"] >= 1
    assert rep.counts["other"] == 0
    assert sum(rep.counts.values()) == 50
    for r in rep.runs:
        if r.label == "psi1":
            assert r.distance_psi1 < 1e-2 and r.distance_psi > 0.05


def test_probe_shifted_state_has_no_psi1():
    rep = probe(shifted_fn, 20)
    psi = GridFunction.from_function(shifted_fn, 64, 6.0)
    assert rep.psi1_residual > 1e-6
    assert rep.counts["psi1"] == 0
    assert set(r.label for r in rep.runs) <= {"psi", "other", "unconverged"}
    # x -> conj(psi(2 - x)) is a translated reflection; it shares both moduli in the continuum
    assert residual(reflect_conjugate(psi).as_state(), sv.grid_frames(64, 6.0), sv.grid_profile(psi)) > 1e-6
    assert set(rep.confirmed) <= set(rep.flagged)


def test_probe_rejects_2d():
    with pytest.raises(ValueError):
        sv.conjecture_probe(GridFunction(np.ones((4, 4)), 1.0))


def test_probe_runs_are_reproducible():
    a, b = probe(chirped_fn, 8), probe(chirped_fn, 8)
    assert [(r.label, r.residual) for r in a.runs] == [(r.label, r.residual) for r in b.runs]


def test_alternating_probe_labels_are_valid():
    rep = probe(chirped_fn, 5, method="alternating")
    assert set(r.label for r in rep.runs) <= set(sv.CLASSES)
    assert all(r.converged == (r.label != "unconverged") for r in rep.runs)
