"""Perfect reconstruction operators ``Q_lambda`` and their diagnostics.

``Q_lambda = T C`` where the coefficient matrix is

    C = (W X)^dagger W,    W = (lambda I + (1 - lambda) G)^{dagger/2}.

``lambda = 1`` is ordinary least squares (smallest operator norm),
``lambda = 0`` uses the pseudoinverse square root of the sampling
Gramian (smallest quasi-optimality constant). Every quantity below is a
finite matrix computation on a :class:`~framerecon.framekit.GramModel`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from . import numkernel as nk
from .errors import ContractViolation, ConvergenceError, IllPosedError
from .framekit import GramModel, TargetData, check_lambda, sigma_lambda

CG_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class ReconstructionOperator:
    """``Q_lambda`` in reconstruction coordinates: ``c_hat = coeff_matrix @ d``."""

    lam: float
    coeff_matrix: np.ndarray
    source: GramModel


@dataclass(frozen=True)
class Diagnostics:
    op_norm: float
    quasi_opt: float
    cos_angle: float
    kappa: float
    quasi_bound: float
    kappa_bound: float


def _require_angle(model: GramModel) -> float:
    cos_phi = model.cos_angle
    if cos_phi <= 10 * model.tol.rank_tol(model.x_cross.shape):
        raise IllPosedError(
            f"reconstruction space is (numerically) not seen by the samples: cos(phi) = {cos_phi:.3e}",
            cos_angle=cos_phi,
        )
    return cos_phi


def build_qlambda(model: GramModel, lam: float) -> ReconstructionOperator:
    """Coefficient matrix of ``Q_lambda``; raises :class:`IllPosedError` if cos(phi) ~ 0."""
    check_lambda(lam)
    _require_angle(model)
    w = model.sigma_pinv_sqrt(lam)
    c = nk.pinv(w @ model.x_cross, model.tol) @ w
    return ReconstructionOperator(float(lam), c, model)


def apply(q: ReconstructionOperator, d) -> np.ndarray:
    d = np.asarray(d, dtype=np.complex128)
    if d.shape != (q.coeff_matrix.shape[1],):
        raise ContractViolation(
            f"data has shape {d.shape}, expected ({q.coeff_matrix.shape[1]},)"
        )
    return q.coeff_matrix @ d


def solve_normal_equations(model: GramModel, lam: float, d, method: str = "direct") -> np.ndarray:
    """Coefficients from ``X^* S^{-1} X c = X^* S^{-1} d`` with ``S = sigma_lambda(G, lam)``.

    ``method`` is ``"direct"`` (Cholesky) or ``"iterative"``/``"cg"``
    (conjugate gradients on the normal equations, relative residual
    ``1e-12``, at most ``10 m`` iterations). ``lam = 0`` has no invertible
    weight and falls back to building the operator.
    """
    check_lambda(lam)
    if method not in ("direct", "iterative", "cg"):
        raise ContractViolation(f"unknown method {method!r}")
    d = np.asarray(d, dtype=np.complex128)
    if d.shape != (model.n,):
        raise ContractViolation(f"data has shape {d.shape}, expected ({model.n},)")
    if lam == 0.0:
        return apply(build_qlambda(model, 0.0), d)
    _require_angle(model)

    x = model.x_cross
    sigma_factor = scipy.linalg.cho_factor(sigma_lambda(model.g_u, lam))
    rhs = x.conj().T @ scipy.linalg.cho_solve(sigma_factor, d)

    if method == "direct":
        r = x.conj().T @ scipy.linalg.cho_solve(sigma_factor, x)
        r = 0.5 * (r + r.conj().T)
        return scipy.linalg.solve(r, rhs, assume_a="pos")

    def matvec(c):
        return x.conj().T @ scipy.linalg.cho_solve(sigma_factor, x @ c)

    m = model.m
    op = scipy.sparse.linalg.LinearOperator((m, m), matvec=matvec, dtype=np.complex128)
    maxiter = 10 * m
    c, info = scipy.sparse.linalg.cg(op, rhs, rtol=CG_RTOL, atol=0.0, maxiter=maxiter)
    bnorm = np.linalg.norm(rhs)
    residual = np.linalg.norm(matvec(c) - rhs) / bnorm if bnorm > 0 else 0.0
    if info != 0:
        raise ConvergenceError(
            f"conjugate gradients stopped after {maxiter} iterations, relative residual {residual:.3e}",
            residual=residual, iterations=maxiter,
        )
    return c


def operator_norm(q: ReconstructionOperator) -> float:
    """``||Q||`` from ``||T c||^2 = c^* g_t c``."""
    return nk.spectral_norm(q.source.g_t_sqrt @ q.coeff_matrix)


def quasi_optimality(q: ReconstructionOperator) -> float:
    """``mu(Q) = ||Q U^*||``.

    Equal to ``sqrt(lambda_max(M G M^*))`` with ``M = g_t^{1/2} C``; taken
    as the largest singular value of ``M G^{1/2}`` so the square root of the
    Gramian meets ``C`` before any squaring.
    """
    model = q.source
    return nk.spectral_norm(model.g_t_sqrt @ q.coeff_matrix @ model.gram_sqrt)


def lsq_condition(model: GramModel, lam: float) -> float:
    """Condition number of the weighted least squares matrix ``W X``."""
    return nk.condition_number(model.sigma_pinv_sqrt(lam) @ model.x_cross, model.tol)


def _frame_ratio(a, b, lam):
    return b * (lam + a * (1.0 - lam)) / (a * (lam + b * (1.0 - lam)))


def quasi_bound(model: GramModel, lam: float) -> float:
    """Upper bound on ``mu(Q_lambda)`` from the frame bounds and the angle."""
    check_lambda(lam)
    a, b = model.bounds
    return float(np.sqrt(_frame_ratio(a, b, lam)) / _require_angle(model))


def kappa_bound(model: GramModel, lam: float) -> float:
    """Upper bound on ``kappa(X^* S^{-1} X) = lsq_condition**2``.

    Only valid for an orthonormal reconstruction basis.
    """
    check_lambda(lam)
    if not model.orthonormal_recon:
        raise ContractViolation("kappa_bound requires an orthonormal reconstruction basis (g_t = I)")
    a, b = model.bounds
    return float(_frame_ratio(a, b, lam) / _require_angle(model) ** 2)


def perfectness_defect(q: ReconstructionOperator) -> float:
    """``||C X - I||``; zero exactly when ``Q U^* g = g`` on the reconstruction space."""
    cx = q.coeff_matrix @ q.source.x_cross
    return nk.spectral_norm(cx - np.eye(cx.shape[0]))


def error_norms(coefficients, target: TargetData, model: GramModel):
    """Absolute and relative error ``||f - T c||`` from Gram data only."""
    c = np.asarray(coefficients, dtype=np.complex128)
    tau = target.t_coeffs
    err_sq = target.norm_sq - 2.0 * np.real(np.vdot(c, tau)) + np.real(np.vdot(c, model.g_t @ c))
    abs_err = float(np.sqrt(max(err_sq, 0.0)))
    return abs_err, abs_err / float(np.sqrt(target.norm_sq))


def error_bound(q: ReconstructionOperator, target: TargetData, noise_norm: float,
                mu: float | None = None, op_norm: float | None = None) -> float:
    """Right-hand side ``mu ||f - P_T f|| + ||Q|| ||noise||`` of the stability estimate."""
    mu = quasi_optimality(q) if mu is None else mu
    op_norm = operator_norm(q) if op_norm is None else op_norm
    return mu * target.best_approx_error(q.source) + op_norm * noise_norm


def diagnostics(q: ReconstructionOperator) -> Diagnostics:
    model = q.source
    kb = kappa_bound(model, q.lam) if model.orthonormal_recon else float("nan")
    return Diagnostics(
        op_norm=operator_norm(q),
        quasi_opt=quasi_optimality(q),
        cos_angle=model.cos_angle,
        kappa=lsq_condition(model, q.lam),
        quasi_bound=quasi_bound(model, q.lam),
        kappa_bound=kb,
    )


def ambient_matrix(q: ReconstructionOperator, sampling, recon) -> np.ndarray:
    """``Q U^*`` as an ``N x N`` matrix, given the explicit frames behind the model."""
    return recon.vectors @ q.coeff_matrix @ sampling.vectors.conj().T
