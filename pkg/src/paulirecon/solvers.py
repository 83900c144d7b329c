"""Numerical exploration of A(b) by alternating magnitude projections.

Runs are seeded per restart from ``(seed, restart)`` through a Philox
generator, so any restart can be reproduced on its own and restarts can be
evaluated in any order.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constructions import gauss_family, reflect_conjugate
from .measurement import FrameSet, MagnitudeProfile, forward, residual
from .statespace import (
    BasisFrame,
    GridFunction,
    MomentumFrame,
    as_state,
    grid_fourier,
    projective_distance,
    standard_frame,
)

STALL_WINDOW = 50
STALL_IMPROVEMENT = 1e-14


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 500
    tol: float = 1e-6
    restarts: int = 20
    seed: int = 0
    distinctness_threshold: float = 1e-2

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not 0 < self.distinctness_threshold < 1:
            raise ValueError("distinctness_threshold must lie in (0, 1)")


def rng_for(*key: int) -> np.random.Generator:
    """Counter-based generator keyed by a tuple of nonnegative integers."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in key])))


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def project_magnitudes(x, frame: BasisFrame, row) -> np.ndarray:
    """Nearest state whose coefficient moduli in ``frame`` equal ``row``.

    Each coefficient keeps its phase; zero coefficients take phase 0.
    """
    row = np.asarray(row, dtype=float)
    a = frame.analyze(x)
    if row.shape != a.shape:
        raise ValueError(f"target row has {row.size} entries, frame has {a.size}")
    if np.any(row < 0):
        raise ValueError("target magnitudes must be nonnegative")
    mag = np.abs(a)
    phase = np.ones_like(a)
    nz = mag > 0
    phase[nz] = a[nz] / mag[nz]
    return frame.synthesize(row * phase)


@dataclass
class Reconstruction:
    state: np.ndarray
    residual: float
    iterations: int
    converged: bool
    restart: int
    trace: list[float] = field(default_factory=list, repr=False)
    total_iterations: int = 0


def _single_run(fs: FrameSet, target: np.ndarray, cfg: SolverConfig, restart: int,
                method: str = "alternating", relaxation: float = 0.9) -> Reconstruction:
    rng = rng_for(cfg.seed, restart)
    x = random_state(fs.dim, rng)
    if method == "raar":
        if len(fs) != 2:
            raise ValueError("raar needs exactly two frames")
        (f1, f2), (b1, b2) = fs.frames, target
        state = project_magnitudes(project_magnitudes(x, f2, b2), f1, b1)
    elif method == "alternating":
        state = x
    else:
        raise ValueError(f"unknown method {method!r}")
    res = best = residual(state, fs, target)
    best_state = state
    trace = [res]
    it = 0
    while it < cfg.max_iters and best > cfg.tol:
        if method == "alternating":
            for frame, row in zip(fs, target):
                state = project_magnitudes(state, frame, row)
        else:
            p2 = project_magnitudes(x, f2, b2)
            r2 = 2 * p2 - x
            r1 = 2 * project_magnitudes(r2, f1, b1) - r2
            x = 0.5 * relaxation * (r1 + x) + (1 - relaxation) * p2
            state = project_magnitudes(project_magnitudes(x, f2, b2), f1, b1)
        it += 1
        res = residual(state, fs, target)
        trace.append(res)
        if res < best:
            best, best_state = res, state
        if it >= STALL_WINDOW and min(trace[:-STALL_WINDOW]) - best < STALL_IMPROVEMENT:
            break
    return Reconstruction(best_state, best, it, best <= cfg.tol, restart, trace)


def reconstruct(fs: FrameSet, b: MagnitudeProfile, cfg: SolverConfig = SolverConfig(), threads: int = 1,
                method: str = "alternating", relaxation: float = 0.9) -> Reconstruction:
    """Search for a member of A(b) by magnitude projections.

    ``method="alternating"`` cycles :func:`project_magnitudes` over the
    frames (error reduction); for two frames its residual never increases.
    ``method="raar"`` (two frames only) iterates the relaxed averaged
    reflections ``x <- (beta/2)(R1 R2 + I) x + (1 - beta) P2 x`` with
    ``beta = relaxation`` and tracks the state ``P1 P2 x``. It is not
    monotone but escapes many of the stagnation points of plain cycling.

    Restart ``r`` starts from a complex Gaussian vector drawn from
    ``(cfg.seed, r)``. A restart stops at ``cfg.tol``, at ``cfg.max_iters``
    iterations, or when the best residual improves by less than 1e-14 over
    50 iterations. The first converged restart (by index) is returned,
    otherwise the one with the smallest residual. ``threads > 1`` evaluates
    restarts in batches and returns the same result.
    """
    if len(fs) == 0:
        raise ValueError("empty frame set")
    target = b.values if isinstance(b, MagnitudeProfile) else np.asarray(b, dtype=float)
    if target.shape != (len(fs), fs.dim):
        raise ValueError(f"profile shape {target.shape} does not match frames ({len(fs)}, {fs.dim})")

    runs: list[Reconstruction] = []
    batch = max(1, int(threads))
    pool = ThreadPoolExecutor(batch) if batch > 1 else None
    try:
        for start in range(0, cfg.restarts, batch):
            idx = range(start, min(start + batch, cfg.restarts))
            if pool is None:
                done = [_single_run(fs, target, cfg, r, method, relaxation) for r in idx]
            else:
                done = list(pool.map(lambda r: _single_run(fs, target, cfg, r, method, relaxation), idx))
            runs.extend(done)
            if any(r.converged for r in done):
                break
    finally:
        if pool is not None:
            pool.shutdown()

    converged = [r for r in runs if r.converged]
    best = converged[0] if converged else min(runs, key=lambda r: (r.residual, r.restart))
    best.total_iterations = sum(r.iterations for r in runs)
    return best


# ---------------------------------------------------------------------------
# Ambiguity witnesses


@dataclass(frozen=True, eq=False)
class AmbiguityWitness:
    x: np.ndarray
    y: np.ndarray
    profile: MagnitudeProfile
    residual_x: float
    residual_y: float
    distance: float

    def to_csv(self) -> str:
        lines = ["index,x_re,x_im,y_re,y_im"]
        for i, (u, v) in enumerate(zip(self.x, self.y)):
            lines.append(f"{i},{u.real:.17g},{u.imag:.17g},{v.real:.17g},{v.imag:.17g}")
        return "\n".join(lines) + "\n"


def make_witness(x, y, fs: FrameSet, profile: MagnitudeProfile) -> AmbiguityWitness:
    return AmbiguityWitness(
        as_state(x), as_state(y), profile,
        residual(x, fs, profile), residual(y, fs, profile), projective_distance(x, y),
    )


def certify_witness(w: AmbiguityWitness, fs: FrameSet, tol: float, threshold: float = 1e-2) -> bool:
    """Recompute both residuals and the distance from scratch."""
    rx = residual(w.x, fs, w.profile)
    ry = residual(w.y, fs, w.profile)
    return rx <= tol and ry <= tol and projective_distance(w.x, w.y) >= threshold


def _distinct_members(states, threshold):
    members: list[np.ndarray] = []
    for s in states:
        if all(projective_distance(s, m) >= threshold for m in members):
            members.append(s)
    return members


def ambiguity_search(fs: FrameSet, cfg: SolverConfig = SolverConfig(), trials: int = 1,
                     profile: MagnitudeProfile | None = None,
                     method: str = "alternating") -> list[AmbiguityWitness]:
    """Look for pairs of projectively distinct states with a common profile.

    Each trial plants a random state (or uses ``profile`` if given), then
    runs ``cfg.restarts`` independent single-start reconstructions. Every
    pair of certified, pairwise distinct members becomes a witness. An empty
    result only means none were found.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    single = SolverConfig(cfg.max_iters, cfg.tol, 1, cfg.seed, cfg.distinctness_threshold)
    witnesses: list[AmbiguityWitness] = []
    for t in range(trials):
        if profile is None:
            planted = random_state(fs.dim, rng_for(cfg.seed, 1 << 20, t))
            b = forward(planted, fs)
            found = [planted]
        else:
            b = profile
            found = []
        for r in range(cfg.restarts):
            run = _single_run(fs, b.values, single, (t << 16) + r + 1, method)
            if run.converged:
                found.append(run.state)
        members = _distinct_members(found, cfg.distinctness_threshold)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                w = make_witness(members[i], members[j], fs, b)
                if certify_witness(w, fs, cfg.tol, cfg.distinctness_threshold):
                    witnesses.append(w)
    return witnesses


def character_pair(p: int) -> FrameSet:
    from .statespace import CharacterFrame

    return FrameSet((standard_frame(p, "delta"), CharacterFrame(p)))


def gauss_witnesses(p: int) -> tuple[list[np.ndarray], list[AmbiguityWitness]]:
    """The ``p - 1`` Gauss states as members of the flat profile and all their pairs."""
    fs = character_pair(p)
    members = gauss_family(p)
    b = forward(members[0], fs)
    pairs = [make_witness(members[i], members[j], fs, b)
             for i in range(len(members)) for j in range(i + 1, len(members))]
    return members, pairs


# ---------------------------------------------------------------------------
# Position/momentum probe


def grid_frames(points: int, extent: float) -> FrameSet:
    return FrameSet((standard_frame(points, "position"), MomentumFrame(points, extent)))


def grid_profile(psi: GridFunction) -> MagnitudeProfile:
    """Position and momentum moduli of ``psi`` in the grid frames' normalization."""
    dx = psi.spacing
    dp = 2 * np.pi / (psi.points * dx)
    return MagnitudeProfile(np.vstack([
        np.abs(psi.values) * np.sqrt(dx),
        np.abs(grid_fourier(psi).values) * np.sqrt(dp),
    ]))


@dataclass
class ProbeRun:
    restart: int
    residual: float
    converged: bool
    label: str
    distance_psi: float
    distance_psi1: float


@dataclass
class ConjectureReport:
    runs: list[ProbeRun]
    counts: dict[str, int]
    psi1_residual: float
    flagged: list[int]
    confirmed: list[int]


CLASSES = ("psi", "psi1", "other", "unconverged")


def conjecture_probe(psi: GridFunction, cfg: SolverConfig = SolverConfig(), psi_fn=None,
                     flag_tol: float = 1e-8, method: str = "alternating") -> ConjectureReport:
    """Reconstruct from position and momentum moduli and classify each solution.

    Runs ``cfg.restarts`` independent single-start reconstructions. A
    converged state is labelled ``psi`` or ``psi1`` (the reflect-conjugate
    partner) when within ``cfg.distinctness_threshold`` of it, ``other``
    otherwise. Runs labelled ``other`` with residual below ``flag_tol`` are
    flagged; a flag is confirmed only if the same run reproduces an ``other``
    result on grids of 2N and 4N points, which needs ``psi_fn`` (a callable
    sampling the state). Unconfirmed flags are grid artifacts until shown
    otherwise.
    """
    if psi.dim != 1:
        raise ValueError("conjecture_probe works on 1-D grids")
    runs, psi1_res = _probe_grid(psi, cfg, method=method)
    counts = {c: sum(1 for r in runs if r.label == c) for c in CLASSES}
    flagged = [r.restart for r in runs if r.label == "other" and r.residual <= flag_tol]
    confirmed = []
    if psi_fn is not None:
        for restart in flagged:
            ok = True
            for factor in (2, 4):
                fine = GridFunction.from_function(psi_fn, psi.points * factor, psi.extent)
                sub = SolverConfig(cfg.max_iters, cfg.tol, 1, cfg.seed, cfg.distinctness_threshold)
                fine_runs, _ = _probe_grid(fine, sub, restarts=[restart], method=method)
                ok = ok and fine_runs[0].label == "other" and fine_runs[0].residual <= flag_tol
            if ok:
                confirmed.append(restart)
    return ConjectureReport(runs, counts, psi1_res, flagged, confirmed)


def _probe_grid(psi: GridFunction, cfg: SolverConfig, restarts=None, method="alternating"):
    fs = grid_frames(psi.points, psi.extent)
    b = grid_profile(psi)
    x0 = psi.as_state()
    x1 = reflect_conjugate(psi).as_state()
    psi1_res = residual(x1, fs, b)
    runs = []
    for r in (range(cfg.restarts) if restarts is None else restarts):
        run = _single_run(fs, b.values, cfg, r, method)
        d0 = projective_distance(run.state, x0)
        d1 = projective_distance(run.state, x1)
        if not run.converged:
            label = "unconverged"
        elif d0 < cfg.distinctness_threshold:
            label = "psi"
        elif d1 < cfg.distinctness_threshold and psi1_res <= cfg.tol:
            label = "psi1"
        else:
            label = "other"
        runs.append(ProbeRun(r, run.residual, run.converged, label, d0, d1))
    return runs, psi1_res
