"""Dense complex linear algebra for small two-port coupler networks.

Everything operates on plain numpy ``complex128`` arrays and is pure:
inputs are validated, never mutated, and every function returns fresh
values. Dimensions are capped at ``DIM_CAP``; the interesting physics
lives at very small d (the worked cases are scalar).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

DIM_CAP = 64

# pivots below this magnitude are treated as exact zeros
PIVOT_FLOOR = 1e-300
# pivot-ratio condition estimates above this are rejected as singular
CONDITION_CAP = 1e12


class SingularMatrixError(Exception):
    """Raised when a matrix cannot be inverted reliably."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


def as_operator(a, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite square complex matrix, checking dimensions."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    if not 1 <= n <= DIM_CAP:
        raise ValueError(f"operator dimension must be in [1, {DIM_CAP}], got {n}")
    if dim is not None and n != dim:
        raise ValueError(f"operator dimension mismatch: {n} != {dim}")
    if not np.isfinite(arr).all():
        raise ValueError("operator entries must be finite")
    return arr


def as_state(v, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite complex amplitude vector, checking dimensions."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"state must be a 1-d vector, got shape {arr.shape}")
    n = arr.shape[0]
    if not 1 <= n <= DIM_CAP:
        raise ValueError(f"state dimension must be in [1, {DIM_CAP}], got {n}")
    if dim is not None and n != dim:
        raise ValueError(f"state dimension mismatch: {n} != {dim}")
    if not np.isfinite(arr).all():
        raise ValueError("state entries must be finite")
    return arr


def readonly_copy(a: np.ndarray) -> np.ndarray:
    """Defensive copy with the write flag cleared."""
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def norm_sq(v) -> float:
    """Squared Euclidean norm sum_i |v_i|^2."""
    arr = np.asarray(v, dtype=complex)
    return float(np.real(np.vdot(arr, arr)))


def mat_mul(a, b) -> np.ndarray:
    """Matrix product with dimension checking."""
    a = as_operator(a)
    b = as_operator(b, a.shape[0])
    return a @ b


def mat_vec(a, v) -> np.ndarray:
    """Matrix-vector product with dimension checking."""
    a = as_operator(a)
    v = as_state(v, a.shape[0])
    return a @ v


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_operator(a).conj().T


def invert(a) -> tuple[np.ndarray, float]:
    """Invert a square matrix by LU factorization with partial pivoting.

    Returns ``(inverse, condition)`` where ``condition`` is the cheap
    pivot-ratio estimate max|u_ii| / min|u_ii| (adequate at the small
    dimensions this package works at). Raises :class:`SingularMatrixError`
    when a pivot underflows or the estimate exceeds ``CONDITION_CAP``.
    """
    a = as_operator(a)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    pivots = np.abs(np.diagonal(lu))
    smallest = float(pivots.min())
    if smallest < PIVOT_FLOOR:
        raise SingularMatrixError("matrix is singular (zero pivot)", condition=math.inf)
    condition = float(pivots.max()) / smallest
    if condition > CONDITION_CAP:
        raise SingularMatrixError(
            f"matrix is numerically singular (pivot-ratio condition {condition:.3e})",
            condition=condition,
        )
    inverse = lu_solve((lu, piv), np.eye(a.shape[0], dtype=complex), check_finite=False)
    return inverse, condition


def is_unitary(a, tol: float = 1e-12) -> bool:
    """True iff ||A^H A - I||_max <= tol."""
    a = as_operator(a)
    gram = a.conj().T @ a
    return bool(np.max(np.abs(gram - np.eye(a.shape[0]))) <= tol)


def spectral_radius(a, iterations: int = 100, seed: int = 0) -> float:
    """Power-iteration estimate of the largest eigenvalue magnitude.

    Deterministic for a fixed seed. Returns the best estimate after the
    iteration budget, or 0.0 when the iterate collapses to zero (nilpotent
    maps do this within d steps).
    """
    a = as_operator(a)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max(1, iterations)):
        w = a @ v
        scale = float(np.linalg.norm(w))
        if scale == 0.0:
            return 0.0
        estimate = scale
        v = w / scale
    return estimate


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary from QR of a seeded complex Gaussian matrix.

    The diagonal of R is phase-normalized so the distribution is genuinely
    Haar rather than an artifact of the QR sign convention.
    """
    if not 1 <= dim <= DIM_CAP:
        raise ValueError(f"dim must be in [1, {DIM_CAP}], got {dim}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


@dataclass(frozen=True)
class SplitterParams:
    """Coupler amplitude pair (alpha, beta) with alpha^2 + beta^2 = 1.

    alpha is the straight-through amplitude, beta the cross amplitude; the
    cross leg always carries a -i phase so the two-port map stays unitary.
    The direct constructor rejects non-normalized pairs; use
    :meth:`from_alpha` / :meth:`from_beta` to derive the missing member.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0) or not (0.0 <= self.beta <= 1.0):
            raise ValueError("alpha and beta must lie in [0, 1]")
        if abs(self.alpha * self.alpha + self.beta * self.beta - 1.0) > 1e-12:
            raise ValueError("alpha^2 + beta^2 must equal 1 within 1e-12")

    @classmethod
    def from_alpha(cls, alpha: float) -> "SplitterParams":
        alpha = float(alpha)
        return cls(alpha=alpha, beta=math.sqrt(max(0.0, 1.0 - alpha * alpha)))

    @classmethod
    def from_beta(cls, beta: float) -> "SplitterParams":
        beta = float(beta)
        return cls(alpha=math.sqrt(max(0.0, 1.0 - beta * beta)), beta=beta)


def coupler_matrix(params: SplitterParams) -> np.ndarray:
    """The 2x2 unitary [[alpha, -i beta], [-i beta, alpha]] mixing a channel pair."""
    a, b = params.alpha, params.beta
    return np.array([[a, -1j * b], [-1j * b, a]], dtype=complex)


def couple(params: SplitterParams, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Apply the two-port coupler: (alpha x - i beta y, alpha y - i beta x).

    The same map serves both couplers of a network, only the channel pair
    fed into it changes.
    """
    x = as_state(x)
    y = as_state(y, x.shape[0])
    a, b = params.alpha, params.beta
    return a * x - 1j * b * y, a * y - 1j * b * x
