"""Closed-form theory for Gaussian states ``psi(x) = a exp(-x^T A x / 2)``.

``A = A1 + i A2`` is complex symmetric with ``A1`` positive definite. With the
transform ``(2 pi)^(-l/2) int psi(x) exp(i p.x) dx`` the image is again
Gaussian, with matrix ``B = A^-1`` and amplitude ``a det(A)^(-1/2)``.

Magnitude data are normalized so that ``|psi(x)| ~ exp(-x^T x / 2)`` and
``|psi_hat(p)| ~ exp(-p^T B1 p / 2)`` with ``B1 = diag(mu_j^2)``. Every
solution has ``A2 = sigma^T D sigma`` where ``D = diag(+-lambda_j)``,
``lambda_j^2 = (1 - mu_j^2) / mu_j^2`` and ``sigma`` is orthogonal and
commutes with ``B1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .statespace import GridFunction, grid_axis

SYM_TOL = 1e-12
MU_GROUP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GaussianState:
    amplitude: complex
    A1: np.ndarray
    A2: np.ndarray

    def __post_init__(self):
        a1 = np.atleast_2d(np.asarray(self.A1, dtype=float))
        a2 = np.atleast_2d(np.asarray(self.A2, dtype=float))
        if a1.shape != a2.shape or a1.shape[0] != a1.shape[1]:
            raise ValueError(f"A1 and A2 must be square of equal size, got {a1.shape}, {a2.shape}")
        for name, m in (("A1", a1), ("A2", a2)):
            if np.max(np.abs(m - m.T), initial=0.0) > SYM_TOL:
                raise ValueError(f"{name} is not symmetric")
        low = np.linalg.eigvalsh(a1).min()
        if not low > 0:
            raise ValueError(f"A1 is not positive definite (smallest eigenvalue {low:.3e})")
        object.__setattr__(self, "A1", a1)
        object.__setattr__(self, "A2", a2)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def dim(self) -> int:
        return self.A1.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self.A1 + 1j * self.A2

    def __call__(self, x) -> np.ndarray:
        """Evaluate at points ``x`` of shape ``(..., l)``."""
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        q = np.einsum("...i,ij,...j->...", x, self.matrix, x)
        return self.amplitude * np.exp(-0.5 * q)

    def norm(self) -> float:
        """``||psi||_2 = |a| (pi^l / det A1)^(1/4)``."""
        return float(abs(self.amplitude) * (np.pi ** self.dim / np.linalg.det(self.A1)) ** 0.25)

    def sample(self, points: int, extent: float) -> GridFunction:
        axis = grid_axis(points, extent)
        x = np.stack(np.meshgrid(*([axis] * self.dim), indexing="ij"), axis=-1)
        return GridFunction(self(x), extent)


def congruence_reduce(A1) -> np.ndarray:
    """Real ``C`` with ``C^T A1 C = I``; the symmetric choice ``A1^(-1/2)``."""
    A1 = np.atleast_2d(np.asarray(A1, dtype=float))
    if A1.shape[0] != A1.shape[1] or np.max(np.abs(A1 - A1.T), initial=0.0) > SYM_TOL:
        raise ValueError("congruence_reduce needs a symmetric matrix")
    w, v = np.linalg.eigh(A1)
    if not w.min() > 0:
        raise ValueError(f"matrix is not positive definite: eigenvalue {w.min():.6g}")
    return (v / np.sqrt(w)) @ v.T


def sqrt_det(A) -> complex:
    """``det(A)^(1/2)`` on the branch continuous from ``det(I)^(1/2) = 1``.

    With ``C^T A1 C = I``, ``C^T A C = I + i S`` for real symmetric ``S``; its
    eigenvalues ``1 + i s_j`` lie in the right half-plane where the principal
    square root is continuous, and ``det A = det(I + iS) / det(C)^2``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    C = congruence_reduce(A.real)
    s = np.linalg.eigvalsh(C.T @ A.imag @ C)
    return complex(np.prod(np.sqrt(1 + 1j * s)) / abs(np.linalg.det(C)))


def gaussian_fourier(G: GaussianState) -> GaussianState:
    """Exact transform: matrix ``A^-1`` and amplitude ``a det(A)^(-1/2)``.

    The inverse is formed in reduced coordinates, ``A^-1 = C (I + iS)^-1 C^T``,
    where the reduced matrix is diagonalized by a real orthogonal matrix.
    """
    C = congruence_reduce(G.A1)
    S = C.T @ G.A2 @ C
    s, v = np.linalg.eigh((S + S.T) / 2)
    reduced_inv = (v / (1 + 1j * s)) @ v.T
    B = C @ reduced_inv @ C.T
    B = (B + B.T) / 2
    amp = G.amplitude / sqrt_det(G.matrix)
    return GaussianState(amp, B.real, B.imag)


def rescale(G: GaussianState, C) -> GaussianState:
    """``psi_C(x) = psi(C x)``, a Gaussian with matrix ``C^T A C``."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    A1 = C.T @ G.A1 @ C
    A2 = C.T @ G.A2 @ C
    return GaussianState(G.amplitude, (A1 + A1.T) / 2, (A2 + A2.T) / 2)


@dataclass(frozen=True)
class ScalingReport:
    norm_rel_dev: float
    transform_rel_dev: float
    passed: bool


def scaling_lemma_check(G: GaussianState, C, n_probe: int = 16, seed: int = 0, tol: float = 1e-10) -> ScalingReport:
    """Check ``(psi_C)^(p) = |det C|^-1 psi^((C^-1)^T p)`` and ``||psi_C|| = |det C|^(-1/2) ||psi||``.

    Both sides are closed-form Gaussians. The transform identity is compared
    through the matrices, the amplitudes, and values at ``n_probe`` random
    momenta.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape != (G.dim, G.dim):
        raise ValueError(f"C must be {G.dim}x{G.dim}")
    detC = np.linalg.det(C)
    if abs(detC) < 1e-300 or np.linalg.cond(C) > 1e14:
        raise ValueError("C is singular")
    GC = rescale(G, C)
    norm_dev = abs(GC.norm() - abs(detC) ** -0.5 * G.norm()) / G.norm() / abs(detC) ** -0.5

    lhs = gaussian_fourier(GC)
    rhs = gaussian_fourier(G)
    Cinv_T = np.linalg.inv(C).T
    # rhs as a function of p: |det C|^-1 psi_hat(C^-T p), i.e. matrix C^-1 B C^-T
    rhs_matrix = Cinv_T.T @ rhs.matrix @ Cinv_T
    rhs_amp = rhs.amplitude / abs(detC)
    scale = max(1.0, np.max(np.abs(rhs_matrix)))
    devs = [
        np.max(np.abs(lhs.matrix - rhs_matrix)) / scale,
        abs(lhs.amplitude - rhs_amp) / abs(rhs_amp),
    ]
    rng = np.random.default_rng(seed)
    p = rng.standard_normal((n_probe, G.dim))
    left = lhs(p)
    right = rhs(p @ Cinv_T.T) / abs(detC)
    peak = abs(rhs_amp)
    devs.append(np.max(np.abs(left - right)) / peak)
    trans_dev = float(max(devs))
    return ScalingReport(float(norm_dev), trans_dev, bool(norm_dev <= tol and trans_dev <= tol))


# ---------------------------------------------------------------------------
# Magnitude data and the solution set


@dataclass(frozen=True, eq=False)
class GaussianMagnitudeData:
    """Position modulus ``pi^(-l/2) exp(-x^T x / 2)``, momentum width ``B1 = diag(mu^2)``.

    ``b`` is the ratio of the momentum and position probability densities at
    the origin, ``|psi_hat(0)|^2 / |psi(0)|^2``, which equals ``prod(mu)``;
    the ratio of the moduli themselves is its square root.
    """

    mu: np.ndarray
    b: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        if mu.ndim != 1 or mu.size == 0:
            raise ValueError("mu must be a non-empty list")
        if np.any(mu <= 0) or np.any(mu > 1):
            raise ValueError(f"every mu_j must lie in (0, 1], got {mu.tolist()}")
        object.__setattr__(self, "mu", mu)
        if self.b is None:
            object.__setattr__(self, "b", float(np.prod(mu)))

    @property
    def dim(self) -> int:
        return self.mu.size

    @property
    def B1(self) -> np.ndarray:
        return np.diag(self.mu ** 2)

    @property
    def lam(self) -> np.ndarray:
        return np.sqrt((1 - self.mu ** 2) / self.mu ** 2)

    @property
    def target(self) -> np.ndarray:
        """Right-hand side ``(I - B1) B1^-1`` of ``A2^2 = C``."""
        return np.diag((1 - self.mu ** 2) / self.mu ** 2)


@dataclass(frozen=True)
class CommutantBlock:
    indices: tuple[int, ...]
    mu: float
    lam: float

    @property
    def group_dim(self) -> int:
        """Dimension of O(d) for a block of size d."""
        d = len(self.indices)
        return d * (d - 1) // 2


@dataclass(frozen=True, eq=False)
class OrbitSet:
    data: GaussianMagnitudeData
    representatives: list[np.ndarray]
    sign_patterns: list[tuple[int, ...]]
    commutant_blocks: list[CommutantBlock]

    def orbit_dimension(self, k: int) -> int:
        """Dimension of the orbit of representative ``k`` under the commutant of B1.

        Within a block of size ``d`` holding ``s`` plus and ``d - s`` minus
        signs the orbit is a Grassmannian of dimension ``s (d - s)``; blocks
        with ``lambda = 0`` contribute nothing.
        """
        signs = self.sign_patterns[k]
        total = 0
        for blk in self.commutant_blocks:
            if blk.lam == 0:
                continue
            plus = sum(1 for i in blk.indices if signs[i] > 0)
            total += plus * (len(blk.indices) - plus)
        return total

    def member(self, k: int, sigma) -> np.ndarray:
        """``sigma^T D_k sigma`` for an orthogonal ``sigma`` commuting with B1."""
        sigma = np.asarray(sigma, dtype=float)
        B1 = self.data.B1
        if np.max(np.abs(sigma.T @ sigma - np.eye(self.data.dim))) > 1e-10:
            raise ValueError("sigma is not orthogonal")
        if np.max(np.abs(sigma @ B1 - B1 @ sigma)) > 1e-10:
            raise ValueError("sigma does not commute with B1")
        D = self.representatives[k]
        return sigma.T @ D @ sigma

    def random_commutant(self, rng: np.random.Generator) -> np.ndarray:
        """Haar-random element of the commutant group (block-diagonal orthogonal)."""
        sigma = np.zeros((self.data.dim, self.data.dim))
        for blk in self.commutant_blocks:
            d = len(blk.indices)
            q, r = np.linalg.qr(rng.standard_normal((d, d)))
            q = q * np.sign(np.diag(r))
            idx = np.array(blk.indices)
            sigma[np.ix_(idx, idx)] = q
        return sigma


def _commutant_blocks(mu: np.ndarray, lam: np.ndarray) -> list[CommutantBlock]:
    blocks: list[list[int]] = []
    for i in np.argsort(mu, kind="stable"):
        if blocks and abs(mu[blocks[-1][0]] - mu[i]) <= MU_GROUP_TOL:
            blocks[-1].append(int(i))
        else:
            blocks.append([int(i)])
    blocks.sort(key=lambda b: min(b))
    return [CommutantBlock(tuple(sorted(b)), float(mu[b[0]]), float(lam[b[0]])) for b in blocks]


def solve_gaussian_pauli(data: GaussianMagnitudeData) -> OrbitSet:
    """Enumerate ``diag(+-lambda_j)``, one representative per orbit.

    Indices with ``mu_j = 1`` have ``lambda_j = 0`` and contribute one sign
    choice, so there are ``2^k`` representatives with ``k = #{mu_j < 1}``.
    """
    lam = data.lam
    choices = [(1,) if lam_j == 0 else (1, -1) for lam_j in lam]
    patterns = list(itertools.product(*choices))
    reps = [np.diag(np.array(s) * lam) for s in patterns]
    return OrbitSet(data, reps, patterns, _commutant_blocks(data.mu, lam))


@dataclass(frozen=True)
class GaussianVerification:
    matrix_residual: float
    amplitude_ratio: float
    amplitude_dev: float
    relation_residual: float
    passed: bool


def check_gaussian_solution(A2, data: GaussianMagnitudeData, tol: float = 1e-10) -> GaussianVerification:
    """Forward-evaluate the candidate ``A2`` against the magnitude data.

    Builds ``psi = pi^(-l/2) exp(-x^T (I + i A2) x / 2)``, transforms it
    exactly, and compares ``Re B`` with ``diag(mu^2)`` and the density ratio
    ``|psi_hat(0)|^2 / |psi(0)|^2`` with ``b``. Also reports the residual of
    ``B1 - A2 B2 = I`` and ``A2 B1 + B2 = 0``.
    """
    A2 = np.atleast_2d(np.asarray(A2, dtype=float))
    l = data.dim
    if A2.shape != (l, l):
        raise ValueError(f"A2 must be {l}x{l}")
    psi = GaussianState(np.pi ** (-l / 2), np.eye(l), A2)
    hat = gaussian_fourier(psi)
    mat_res = float(np.max(np.abs(hat.A1 - data.B1)))
    ratio = abs(hat.amplitude) ** 2 / abs(psi.amplitude) ** 2
    amp_dev = abs(ratio - data.b)
    B1, B2 = hat.A1, hat.A2
    rel = max(
        np.max(np.abs(B1 - A2 @ B2 - np.eye(l))),
        np.max(np.abs(A2 @ B1 + B2)),
    )
    return GaussianVerification(mat_res, float(ratio), float(amp_dev), float(rel),
                                bool(mat_res <= tol and amp_dev <= tol))


def verify_gaussian_solution(A2, data: GaussianMagnitudeData, tol: float = 1e-10) -> bool:
    return check_gaussian_solution(A2, data, tol).passed
