"""State vectors, orthonormal frames, sampled wavefunctions and Fourier transforms.

State vectors are plain one-dimensional complex numpy arrays. Frames and grid
functions are small immutable containers around arrays.

Fourier conventions
-------------------
The continuous transform uses the analysis kernel ``exp(+i p.x)`` with the
symmetric prefactor ``(2 pi)^(-l/2)``; its inverse uses ``exp(-i p.x)``.

The cyclic transform on Z/pZ uses characters ``X_j(m) = exp(2 pi i j m / p)``
and coefficients ``c_j = (1/p) sum_m f(m) conj(X_j(m))`` so that
``f = sum_j c_j X_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

ORTHONORMAL_TOL = 1e-12
PIVOT_TOL = 1e-10


def as_state(x) -> np.ndarray:
    """Return ``x`` as a 1-D complex array, rejecting empty input."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"state must be a non-empty 1-D array, got shape {arr.shape}")
    return arr


def _check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.size} vs {y.size}")


def inner(x, y) -> complex:
    """Inner product ``sum(conj(x_i) * y_i)``, antilinear in the first slot."""
    x, y = as_state(x), as_state(y)
    _check_same_dim(x, y)
    return complex(np.vdot(x, y))


def norm(x) -> float:
    return float(np.linalg.norm(as_state(x)))


def projective_distance(x, y) -> float:
    """Distance between the rays through ``x`` and ``y``.

    Returns ``sqrt(1 - |<x, y>|^2 / (|x|^2 |y|^2))``, which lies in [0, 1] and
    vanishes exactly when ``y`` is a scalar multiple of ``x``.
    """
    x, y = as_state(x), as_state(y)
    _check_same_dim(x, y)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ValueError("projective distance is undefined for the zero vector")
    u, v = x / nx, y / ny
    # norm of the component of v orthogonal to u; avoids the cancellation in 1 - |<u, v>|^2
    d = np.linalg.norm(v - np.vdot(u, v) * u)
    return float(min(d, 1.0))


def canonical_phase(x) -> np.ndarray:
    """Normalize ``x`` and rotate it so its first non-negligible entry is real positive.

    The pivot is the first coefficient with magnitude above ``1e-10`` after
    normalization. Applying the function to its own output returns the
    output unchanged.
    """
    x = as_state(x)
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ValueError("cannot canonicalize the zero vector")
    pivot = int(np.argmax(np.abs(x) / nx > PIVOT_TOL))
    lead = x[pivot]
    if lead.imag == 0 and lead.real > 0 and abs(nx - 1.0) <= 4 * np.finfo(float).eps:
        return x.copy()
    y = x / nx
    phase = np.conj(y[pivot]) / abs(y[pivot])
    y = y * phase
    y[pivot] = abs(y[pivot])
    return y


def cyclic_dft(f, inverse: bool = False) -> np.ndarray:
    """Transform between values on Z/pZ and character coefficients.

    Forward: ``c_j = (1/p) sum_m f(m) exp(-2 pi i j m / p)``.
    Inverse: ``f(m) = sum_j c_j exp(2 pi i j m / p)``.
    """
    f = as_state(f)
    p = f.size
    if p < 2:
        raise ValueError("cyclic transform needs p >= 2")
    if inverse:
        return np.fft.ifft(f) * p
    return np.fft.fft(f) / p


# ---------------------------------------------------------------------------
# Frames


@dataclass(frozen=True, eq=False)
class BasisFrame:
    """An orthonormal basis given by the columns of a unitary matrix.

    Coefficients of a state are ``scale * <e_i, x>``. ``scale`` is 1 for the
    usual orthonormal expansion; the character frame uses ``1/sqrt(p)`` to
    reproduce the unnormalized character expansion.
    """

    columns: np.ndarray
    label: str = "frame"
    scale: float = 1.0
    eigenvalues: np.ndarray | None = None

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=complex)
        if cols.ndim != 2 or cols.shape[0] != cols.shape[1]:
            raise ValueError(f"frame must be a square matrix, got shape {cols.shape}")
        gram = cols.conj().T @ cols
        dev = np.max(np.abs(gram - np.eye(cols.shape[0])))
        if dev > ORTHONORMAL_TOL:
            raise ValueError(f"frame {self.label!r} is not orthonormal (deviation {dev:.3e})")
        object.__setattr__(self, "columns", cols)

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    def analyze(self, x) -> np.ndarray:
        x = as_state(x)
        if x.size != self.dim:
            raise ValueError(f"dimension mismatch: state {x.size}, frame {self.dim}")
        return self.scale * (self.columns.conj().T @ x)

    def synthesize(self, coeffs) -> np.ndarray:
        return self.columns @ (as_state(coeffs) / self.scale)


class CharacterFrame(BasisFrame):
    """Characters of Z/pZ; coefficients follow :func:`cyclic_dft`."""

    def __init__(self, p: int, label: str = "character"):
        m = np.arange(p)
        cols = np.exp(2j * np.pi * np.outer(m, m) / p) / np.sqrt(p)
        super().__init__(cols, label=label, scale=1 / np.sqrt(p))

    def analyze(self, x) -> np.ndarray:
        x = as_state(x)
        if x.size != self.dim:
            raise ValueError(f"dimension mismatch: state {x.size}, frame {self.dim}")
        return cyclic_dft(x)

    def synthesize(self, coeffs) -> np.ndarray:
        return cyclic_dft(coeffs, inverse=True)


class MomentumFrame(BasisFrame):
    """Plane waves on a centered grid of ``points`` samples and half-width ``extent``.

    A state here is the vector ``psi(x_k) * sqrt(dx)``; its coefficients are
    ``psi_hat(p_j) * sqrt(dp)``. The matrix is only built if ``columns`` is
    accessed; analysis and synthesis go through the FFT.
    """

    def __init__(self, points: int, extent: float, label: str = "momentum"):
        _check_grid(points, extent)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "scale", 1.0)
        object.__setattr__(self, "eigenvalues", None)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "extent", extent)

    @cached_property
    def columns(self) -> np.ndarray:  # type: ignore[override]
        return np.array([self.synthesize(e) for e in np.eye(self.points)]).T

    @property
    def dim(self) -> int:
        return self.points

    def analyze(self, x) -> np.ndarray:
        x = as_state(x)
        if x.size != self.points:
            raise ValueError(f"dimension mismatch: state {x.size}, frame {self.points}")
        return _centered_transform(x, axes=(0,), inverse=False) / np.sqrt(self.points)

    def synthesize(self, coeffs) -> np.ndarray:
        return _centered_transform(as_state(coeffs), axes=(0,), inverse=True) / np.sqrt(self.points)


def standard_frame(n: int, label: str = "standard") -> BasisFrame:
    return BasisFrame(np.eye(n, dtype=complex), label=label)


def random_frame(n: int, rng: np.random.Generator, label: str = "random") -> BasisFrame:
    """Haar-random unitary frame (QR of a complex Ginibre matrix, phases fixed)."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return BasisFrame(q, label=label)


# ---------------------------------------------------------------------------
# Grids


def _check_grid(points: int, extent: float) -> None:
    if points < 2 or points % 2:
        raise ValueError(f"grid needs an even number of points, got {points}")
    if not extent > 0:
        raise ValueError(f"grid half-width must be positive, got {extent}")


def grid_axis(points: int, extent: float) -> np.ndarray:
    """Centered samples ``x_k = (k - N/2) * 2L/N``."""
    _check_grid(points, extent)
    return (np.arange(points) - points // 2) * (2 * extent / points)


def conjugate_extent(points: int, extent: float) -> float:
    """Half-width of the momentum grid conjugate to (points, extent)."""
    return points * np.pi / (2 * extent)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A wavefunction sampled on a centered cubic grid.

    ``values`` has shape ``(N,) * dim``. ``modulus`` optionally stores the
    sampled ``|psi|`` exactly as it was generated, for constructions whose
    claim is an identity between moduli.
    """

    values: np.ndarray
    extent: float
    modulus: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim not in (1, 2, 3) or len(set(vals.shape)) != 1:
            raise ValueError(f"grid values must be a cube of dimension 1-3, got {vals.shape}")
        _check_grid(vals.shape[0], self.extent)
        object.__setattr__(self, "values", vals)
        if self.modulus is not None:
            mod = np.asarray(self.modulus, dtype=float)
            if mod.shape != vals.shape:
                raise ValueError("modulus shape does not match values")
            object.__setattr__(self, "modulus", mod)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def points(self) -> int:
        return self.values.shape[0]

    @property
    def spacing(self) -> float:
        return 2 * self.extent / self.points

    @property
    def axis(self) -> np.ndarray:
        return grid_axis(self.points, self.extent)

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.axis] * self.dim), indexing="ij")

    def magnitude(self) -> np.ndarray:
        if self.modulus is not None:
            return self.modulus
        return np.abs(self.values)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.spacing ** self.dim))

    def as_state(self) -> np.ndarray:
        """Flattened samples weighted by ``sqrt(dx^dim)`` (discrete L2 isometry)."""
        return self.values.ravel() * np.sqrt(self.spacing ** self.dim)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "extent": float(self.extent),
            "points": self.points,
            "re": self.values.real.ravel().tolist(),
            "im": self.values.imag.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridFunction":
        shape = (int(d["points"]),) * int(d["dim"])
        vals = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
        return cls(vals.reshape(shape), float(d["extent"]))

    def to_csv(self) -> str:
        """Rows of grid coordinates followed by Re and Im (C order over the axes)."""
        coords = [c.ravel() for c in self.mesh()]
        names = ["x", "y", "z"][: self.dim] if self.dim > 1 else ["x"]
        lines = [",".join(names + ["re", "im"])]
        for row in zip(*coords, self.values.real.ravel(), self.values.imag.ravel()):
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_function(cls, fn, points: int, extent: float, dim: int = 1) -> "GridFunction":
        """Sample ``fn`` on the grid; ``fn`` receives one coordinate array per axis."""
        axis = grid_axis(points, extent)
        coords = np.meshgrid(*([axis] * dim), indexing="ij")
        return cls(np.asarray(fn(*coords), dtype=complex), extent)


def _centered_transform(values: np.ndarray, axes, inverse: bool) -> np.ndarray:
    """Sum ``sum_k v_k exp(+-2 pi i (j - N/2)(k - N/2) / N)`` along each axis.

    Writing the centered exponent out gives
    ``exp(2 pi i jk/N) * (-1)^j * (-1)^k * i^N``, so the sum is a plain FFT
    sandwiched between alternating-sign masks.
    """
    out = values
    for ax in axes:
        n = values.shape[ax]
        shape = [1] * values.ndim
        shape[ax] = n
        sign = ((-1.0) ** np.arange(n)).reshape(shape)
        corner = (-1.0) ** (n // 2)
        if inverse:
            out = np.fft.fft(out * sign, axis=ax) * sign * corner
        else:
            out = np.fft.ifft(out * sign, axis=ax) * (n * corner) * sign
    return out


def grid_fourier(g: GridFunction, inverse: bool = False) -> GridFunction:
    """Approximate ``psi_hat(p) = (2 pi)^(-l/2) int psi(x) exp(i p.x) dx`` on the conjugate grid.

    The momentum grid is centered with spacing ``pi / L``; the transform is a
    unitary map of the discrete L2 norm. ``inverse=True`` uses the kernel
    ``exp(-i p.x)`` and undoes the forward transform.
    """
    n, dx = g.points, g.spacing
    dp = 2 * np.pi / (n * dx)
    axes = tuple(range(g.dim))
    factor = (dx / np.sqrt(2 * np.pi)) ** g.dim
    vals = _centered_transform(g.values, axes, inverse) * factor
    out = GridFunction(vals, conjugate_extent(n, g.extent))
    assert np.isclose(out.spacing, dp)
    return out


def reflect_indices(points: int) -> np.ndarray:
    """Index map of ``x -> -x`` on the centered periodic grid."""
    return (-np.arange(points)) % points


def reflect(values: np.ndarray) -> np.ndarray:
    """Parity reflection ``psi(x) -> psi(-x)`` applied on every axis."""
    idx = reflect_indices(values.shape[0])
    out = values
    for ax in range(values.ndim):
        out = np.take(out, idx, axis=ax)
    return out
