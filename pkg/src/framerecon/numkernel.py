"""Dense complex matrix kernels.

Every routine accepts array-likes, embeds them as ``complex128`` and
rejects non-finite entries. Rank decisions go through a
:class:`ToleranceProfile` so the cut-off used by ``pinv`` is the same one
used by the PSD functional calculus and by ``condition_number``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractViolation, NumericalFailure

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class ToleranceProfile:
    """Rank and equality tolerances.

    Parameters
    ----------
    rank_rel_tol : float or None
        Singular values (or eigenvalues) at or below
        ``rank_rel_tol * max`` are treated as zero. ``None`` selects the
        standard numerical rank cut-off ``max(rows, cols) * eps`` for the
        matrix at hand.
    equality_tol : float
        Tolerance for symmetry checks and invariant assertions.
    """

    rank_rel_tol: Optional[float] = None
    equality_tol: float = 1e-10

    def __post_init__(self):
        if self.rank_rel_tol is not None and not self.rank_rel_tol >= 0:
            raise ContractViolation("rank_rel_tol must be nonnegative")
        if not self.equality_tol >= 0:
            raise ContractViolation("equality_tol must be nonnegative")

    def rank_tol(self, shape) -> float:
        if self.rank_rel_tol is not None:
            return self.rank_rel_tol
        return max(shape) * EPS


DEFAULT_TOL = ToleranceProfile()


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array (vectors become columns)."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ContractViolation(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation(f"{name} has non-finite entries")
    return arr


def _as_vector(b, name="vector") -> np.ndarray:
    arr = np.asarray(b, dtype=np.complex128)
    if arr.ndim != 1:
        raise ContractViolation(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation(f"{name} has non-finite entries")
    return arr


def _check_hermitian(h: np.ndarray, tol: ToleranceProfile) -> None:
    if h.shape[0] != h.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > tol.equality_tol * scale:
        raise ContractViolation("matrix is not Hermitian within equality_tol")


def svd(a):
    """Thin SVD ``a = u @ diag(s) @ vh`` with nonincreasing ``s``.

    Returns ``(u, s, v)`` where ``v = vh^*`` so that ``a = u diag(s) v^*``.
    """
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return u, s, vh.conj().T


def hermitian_eig(h, tol: ToleranceProfile = DEFAULT_TOL):
    """Eigenvalues (ascending, real) and unitary eigenvectors of a Hermitian matrix."""
    h = as_matrix(h)
    _check_hermitian(h, tol)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition did not converge: {exc}") from exc
    return w, v


def pinv(a, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with singular values below the rank cut-off dropped."""
    a = as_matrix(a)
    u, s, v = svd(a)
    if s.size == 0 or s[0] == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    keep = s > tol.rank_tol(a.shape) * s[0]
    return (v[:, keep] / s[keep]) @ u[:, keep].conj().T


def psd_spectrum(h, tol: ToleranceProfile = DEFAULT_TOL):
    """Eigendecomposition of a PSD matrix with roundoff-negative eigenvalues clamped to 0."""
    w, v = hermitian_eig(h, tol)
    top = max(float(w[-1]), 0.0)
    if w[0] < -tol.equality_tol * top:
        raise ContractViolation(
            f"matrix is not positive semidefinite (smallest eigenvalue {w[0]:.3e})"
        )
    return np.clip(w, 0.0, None), v


def psd_function(w, v, func, tol: ToleranceProfile, drop_null=True) -> np.ndarray:
    """Apply ``func`` to a clamped PSD spectrum ``(w, v)``.

    With ``drop_null`` the eigenvalues at or below the rank cut-off map to
    zero instead of being passed to ``func``.
    """
    top = float(w[-1]) if w.size else 0.0
    if drop_null:
        keep = w > tol.rank_tol((w.size, w.size)) * top
        if top <= 0:
            keep = np.zeros_like(w, dtype=bool)
        fw = np.zeros_like(w)
        fw[keep] = func(w[keep])
    else:
        fw = func(w)
    return (v * fw) @ v.conj().T


def psd_pinv_sqrt(h, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """``(H^dagger)^{1/2}`` of a Hermitian PSD matrix, via its eigendecomposition."""
    w, v = psd_spectrum(h, tol)
    return psd_function(w, v, lambda x: 1.0 / np.sqrt(x), tol)


def psd_sqrt(h, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix."""
    w, v = psd_spectrum(h, tol)
    return psd_function(w, v, np.sqrt, tol, drop_null=False)


def spectral_norm(a) -> float:
    a = as_matrix(a)
    return float(np.linalg.norm(a, 2))


def condition_number(a, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    """``s_max / s_min`` over the ``min(rows, cols)`` singular values.

    Returns ``inf`` when the smallest one falls below the rank cut-off.
    """
    a = as_matrix(a)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    if s[0] == 0 or s[-1] <= tol.rank_tol(a.shape) * s[0]:
        return float("inf")
    return float(s[0] / s[-1])


def lstsq_minnorm(a, b, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Minimum-norm minimizer of ``||a x - b||_2``, i.e. ``pinv(a) @ b``."""
    a = as_matrix(a)
    b = _as_vector(b, "b")
    if b.shape[0] != a.shape[0]:
        raise ContractViolation(f"dimension mismatch: A is {a.shape}, b has length {b.shape[0]}")
    return pinv(a, tol) @ b
