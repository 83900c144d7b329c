"""Explicit families of distinct states sharing magnitude data, with certifiers.

Each generator is paired with a check that recomputes the magnitudes the
family is supposed to share and reports the largest deviation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statespace import (
    GridFunction,
    conjugate_extent,
    cyclic_dft,
    grid_axis,
    grid_fourier,
    projective_distance,
    reflect,
)

TINY = 1e-300


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_odd_prime(p: int) -> None:
    if not is_odd_prime(int(p)):
        raise ValueError(f"{p} is not an odd prime")


# ---------------------------------------------------------------------------
# Gauss states on Z/pZ


@dataclass(frozen=True)
class GaussStateSpec:
    p: int
    a: int

    def __post_init__(self):
        _check_odd_prime(self.p)
        if not 0 <= self.a <= self.p - 1:
            raise ValueError(f"a must lie in [0, {self.p - 1}], got {self.a}")


def gauss_state(spec: GaussStateSpec) -> np.ndarray:
    """``psi_a(m) = exp(2 pi i a m^2 / p)`` for ``m = 0..p-1``.

    The exponent is reduced mod p in integer arithmetic before the complex
    exponential is taken.
    """
    m = np.arange(spec.p, dtype=np.int64)
    return np.exp(2j * np.pi * ((spec.a * m * m) % spec.p) / spec.p)


def gauss_family(p: int) -> list[np.ndarray]:
    """The ``p - 1`` Gauss states with ``a = 1..p-1``."""
    return [gauss_state(GaussStateSpec(p, a)) for a in range(1, p)]


@dataclass(frozen=True)
class FlatnessReport:
    p: int
    max_dev_delta_basis: float
    max_dev_char_basis: float
    tol: float
    passed: bool


def verify_prop2(p: int, tol: float = 1e-12) -> FlatnessReport:
    """Check that every ``psi_a`` with ``a != 0`` is flat in both the delta and character bases.

    Delta coefficients are the values themselves and must have modulus 1;
    character coefficients must all have modulus ``1/sqrt(p)``.
    """
    _check_odd_prime(p)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    dev_b = dev_c = 0.0
    for psi in gauss_family(p):
        dev_b = max(dev_b, float(np.max(np.abs(np.abs(psi) - 1.0))))
        c = cyclic_dft(psi)
        dev_c = max(dev_c, float(np.max(np.abs(np.abs(c) - 1 / np.sqrt(p)))))
    return FlatnessReport(p, dev_b, dev_c, tol, dev_b <= tol and dev_c <= tol)


# ---------------------------------------------------------------------------
# Chirp


@dataclass(frozen=True)
class ChirpSpec:
    alpha: float

    def __post_init__(self):
        if self.alpha == 0 or not np.isfinite(self.alpha):
            raise ValueError("chirp rate must be a nonzero real")


@dataclass(frozen=True, eq=False)
class ChirpResult:
    grid: GridFunction
    alpha: float
    closed_form_magnitude: float

    def closed_form(self, p) -> np.ndarray:
        """Exact transform of the untruncated chirp (a tempered distribution, not L2).

        ``int exp(i a x^2) dx = sqrt(pi/|a|) exp(i sign(a) pi/4)``, so the
        constant prefactor has modulus ``(2|a|)^(-1/2)`` and phase ``sign(a) pi/4``.
        """
        alpha = self.alpha
        pref = np.exp(1j * np.sign(alpha) * np.pi / 4) / np.sqrt(2 * abs(alpha))
        return pref * np.exp(-1j * np.asarray(p) ** 2 / (4 * alpha))


def chirp(spec: ChirpSpec, points: int = 4096, extent: float = 40.0) -> ChirpResult:
    """Sample ``f(x) = exp(i alpha x^2)``.

    The chirp has constant modulus in both position and momentum for every
    real ``alpha`` but is not square integrable; on a finite box the
    momentum modulus is only approximately flat, and only for ``|p| <
    2 |alpha| L`` where the stationary point ``x = -p / (2 alpha)`` is inside
    the box.
    """
    grid = GridFunction.from_function(lambda x: np.exp(1j * spec.alpha * x ** 2), points, extent)
    return ChirpResult(grid, spec.alpha, float((2 * abs(spec.alpha)) ** -0.5))


@dataclass(frozen=True)
class ChirpReport:
    alpha: float
    band: float
    closed_form_magnitude: float
    max_rel_dev: float
    mean_magnitude: float


def chirp_flatness(result: ChirpResult) -> ChirpReport:
    """Qualitative report: deviation of ``|f_hat|`` from the closed form on ``|p| <= |alpha| L``.

    The band is the central half of the momenta whose stationary point lies
    inside the box. No pass/fail is attached.
    """
    g = result.grid
    mag = np.abs(grid_fourier(g).values)
    p = grid_axis(g.points, conjugate_extent(g.points, g.extent))
    band = abs(result.alpha) * g.extent
    sel = np.abs(p) <= band
    ref = result.closed_form_magnitude
    return ChirpReport(
        alpha=result.alpha,
        band=float(band),
        closed_form_magnitude=ref,
        max_rel_dev=float(np.max(np.abs(mag[sel] - ref)) / ref),
        mean_magnitude=float(np.mean(mag[sel])),
    )


# ---------------------------------------------------------------------------
# Reflection-conjugation


def reflect_conjugate(g: GridFunction) -> GridFunction:
    """Return ``psi_1(x) = |psi(x)| exp(-i arg psi(-x))`` on a 1-D centered grid.

    ``-x`` is taken on the periodic grid, so the first sample ``x = -L`` is its
    own partner. Where ``|psi(-x)|`` underflows the phase is set to zero. The
    output stores ``|psi|`` itself as its modulus, so the position moduli are
    identical by construction.
    """
    if g.dim != 1:
        raise ValueError("reflect_conjugate acts on 1-D grids")
    rho = g.magnitude()
    mirrored = reflect(g.values)
    phase = np.where(np.abs(mirrored) < TINY, 1.0 + 0j, np.exp(-1j * np.angle(mirrored)))
    return GridFunction(rho * phase, g.extent, modulus=rho)


@dataclass(frozen=True)
class PairReport:
    position_max_dev: float
    momentum_max_dev: float
    momentum_max_rel_dev: float
    distance: float
    tol: float
    passed: bool


def _pair_report(g: GridFunction, h: GridFunction, tol: float, rel_floor: float | None = None) -> PairReport:
    pos_dev = float(np.max(np.abs(g.magnitude() - h.magnitude())))
    mg, mh = np.abs(grid_fourier(g).values), np.abs(grid_fourier(h).values)
    mom_dev = float(np.max(np.abs(mg - mh)))
    floor = (1e-6 if rel_floor is None else rel_floor) * mg.max()
    sel = mg > floor
    rel = float(np.max(np.abs(mg[sel] - mh[sel]) / mg[sel])) if np.any(sel) else 0.0
    dist = projective_distance(g.values.ravel(), h.values.ravel())
    check = mom_dev if rel_floor is None else rel
    return PairReport(pos_dev, mom_dev, rel, dist, tol, pos_dev == 0.0 and check <= tol)


def certify_reflection(g: GridFunction, tol: float = 1e-8) -> PairReport:
    """Compare ``g`` with its reflect-conjugate partner in position and momentum.

    Momentum moduli are only expected to agree when ``|g|`` is even.
    """
    return _pair_report(g, reflect_conjugate(g), tol)


# ---------------------------------------------------------------------------
# Rotated chirped Gaussians in three dimensions


@dataclass(frozen=True, eq=False)
class KontsevichSpec:
    alpha1: float
    alpha2: float
    rotation: np.ndarray
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.alpha1 > 0:
            raise ValueError("alpha1 must be positive")
        if self.alpha2 == 0:
            raise ValueError("alpha2 must be nonzero")
        rot = np.asarray(self.rotation, dtype=float)
        if rot.shape != (3, 3) or np.max(np.abs(rot.T @ rot - np.eye(3))) > 1e-12:
            raise ValueError("rotation must be a 3x3 orthogonal matrix")
        object.__setattr__(self, "rotation", rot)


def rotation_x1(angle: float) -> np.ndarray:
    """Rotation by ``angle`` about the first coordinate axis."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def kontsevich_pair(spec: KontsevichSpec, points: int = 32, extent: float = 6.0) -> tuple[GridFunction, GridFunction]:
    """Sample ``psi_0`` and ``psi_sigma(x) = psi_0(sigma x)`` with
    ``psi_0(x) = a exp(-alpha1 |x|^2 - i alpha2 (x1^2 + x2^2 - x3^2))``.

    ``psi_sigma`` is evaluated at the rotated arguments, not by moving grid
    data. Both share the modulus array ``|a| exp(-alpha1 |x|^2)`` computed at
    the unrotated points.
    """
    axis = grid_axis(points, extent)
    x = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"))
    modulus = abs(spec.amplitude) * np.exp(-spec.alpha1 * np.sum(x ** 2, axis=0))
    unit = spec.amplitude / abs(spec.amplitude) if spec.amplitude != 0 else 1.0

    def phase(y):
        return np.exp(-1j * spec.alpha2 * (y[0] ** 2 + y[1] ** 2 - y[2] ** 2))

    y = np.einsum("ij,j...->i...", spec.rotation, x)
    psi0 = GridFunction(unit * modulus * phase(x), extent, modulus=modulus)
    psis = GridFunction(unit * modulus * phase(y), extent, modulus=modulus)
    return psi0, psis


def certify_kontsevich(pair, tol: float = 1e-6, rel_floor: float = 1e-6) -> PairReport:
    """Relative momentum-modulus check on samples above ``rel_floor`` of the peak."""
    return _pair_report(pair[0], pair[1], tol, rel_floor=rel_floor)


# ---------------------------------------------------------------------------
# Radial states and their conjugates


def spherical_conjugate_pair(profile, points: int = 32, extent: float = 6.0) -> tuple[GridFunction, GridFunction]:
    """``psi(x) = profile(|x|)`` and its complex conjugate on a 3-D grid.

    ``profile`` must decay at the box edge. Radial states carry no angular
    momentum, so conjugation leaves both position and momentum moduli
    unchanged.
    """
    axis = grid_axis(points, extent)
    x1, x2, x3 = np.meshgrid(axis, axis, axis, indexing="ij")
    r = np.sqrt(x1 ** 2 + x2 ** 2 + x3 ** 2)
    vals = np.asarray(profile(r), dtype=complex)
    modulus = np.abs(vals)
    return GridFunction(vals, extent, modulus=modulus), GridFunction(np.conj(vals), extent, modulus=modulus)


def certify_spherical(pair, tol: float = 1e-8) -> PairReport:
    return _pair_report(pair[0], pair[1], tol)
