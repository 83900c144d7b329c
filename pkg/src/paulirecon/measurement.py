"""Magnitude profiles of states across several bases, and membership in A(b)."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .statespace import BasisFrame, as_state

NORMALIZED_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FrameSet:
    """``m`` orthonormal frames of a common dimension ``n`` with distinct labels."""

    frames: tuple[BasisFrame, ...]

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise ValueError("a frame set needs at least one frame")
        dims = {f.dim for f in frames}
        if len(dims) != 1:
            raise ValueError(f"frames have differing dimensions {sorted(dims)}")
        labels = [f.label for f in frames]
        if len(set(labels)) != len(labels):
            raise ValueError(f"frame labels must be unique, got {labels}")
        object.__setattr__(self, "frames", frames)

    @property
    def dim(self) -> int:
        return self.frames[0].dim

    @property
    def labels(self) -> list[str]:
        return [f.label for f in self.frames]

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)


@dataclass(frozen=True, eq=False)
class MagnitudeProfile:
    """Nonnegative ``m x n`` array; row ``nu`` holds ``|a_i(x)|`` in frame ``nu``."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.atleast_2d(np.asarray(self.values, dtype=float))
        if vals.ndim != 2:
            raise ValueError("profile must be two-dimensional")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("profile entries must be finite and nonnegative")
        object.__setattr__(self, "values", vals)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def is_normalized(self, tol: float = NORMALIZED_TOL) -> bool:
        return bool(np.all(np.abs(np.sum(self.values ** 2, axis=1) - 1) <= tol))

    def to_csv(self) -> str:
        buf = io.StringIO()
        np.savetxt(buf, self.values, delimiter=",", fmt="%.17g")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "MagnitudeProfile":
        return cls(np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2))


def coefficients(x, fs: FrameSet) -> np.ndarray:
    """Complex ``m x n`` array of expansion coefficients ``a_i(x)`` in each frame."""
    x = as_state(x)
    if x.size != fs.dim:
        raise ValueError(f"dimension mismatch: state {x.size}, frames {fs.dim}")
    return np.array([f.analyze(x) for f in fs])


def forward(x, fs: FrameSet) -> MagnitudeProfile:
    """Magnitudes of the coefficients of ``x`` in every frame of ``fs``."""
    return MagnitudeProfile(np.abs(coefficients(x, fs)))


def residual(x, fs: FrameSet, b: MagnitudeProfile) -> float:
    """Root-sum-square mismatch between the profile of ``x`` and ``b``.

    Zero exactly when ``x`` lies in A(b).
    """
    target = b.values if isinstance(b, MagnitudeProfile) else np.asarray(b, dtype=float)
    got = np.abs(coefficients(x, fs))
    if got.shape != target.shape:
        raise ValueError(f"profile shape {target.shape} does not match frames {got.shape}")
    return float(np.sqrt(np.sum((got - target) ** 2)))


def is_member(x, fs: FrameSet, b: MagnitudeProfile, tol: float = 1e-8) -> bool:
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    return residual(x, fs, b) <= tol


def binary_ones(k: int) -> int:
    """Number of ones in the binary expansion of ``k``."""
    if k < 0:
        raise ValueError("binary_ones needs a nonnegative integer")
    return int(k).bit_count()


@dataclass(frozen=True)
class Obstruction:
    n: int
    lhs: int
    rhs: int
    inequality_holds: bool


def embedding_obstruction(n: int) -> Obstruction:
    """Evaluate ``3n - 1 > 4(n - 1) - 2 * ones(n - 1)``.

    If the profile map on CP^(n-1) for three bases were injective it would
    give an embedding into S^(3n-1), which needs this inequality. Where it
    fails, some profile of three bases has two distinct preimages.
    """
    if n < 2:
        raise ValueError("obstruction is defined for n >= 2")
    lhs = 3 * n - 1
    rhs = 4 * (n - 1) - 2 * binary_ones(n - 1)
    return Obstruction(n, lhs, rhs, lhs > rhs)
