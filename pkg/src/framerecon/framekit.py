"""Gram-level encoding of a sampling/reconstruction pair, plus a concrete
finite-dimensional frame world used as a brute-force oracle.

A :class:`GramModel` never needs the ambient Hilbert space: the sampling
Gramian ``g_u = U*U``, the cross-Gramian ``x_cross = U*T`` and the
reconstruction Gramian ``g_t = T*T`` carry everything the operators and
their diagnostics depend on. :class:`FiniteFrame` holds explicit column
vectors in ``C^N`` so that projectors and frame operators can be formed
directly and compared against the Gram route.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import numkernel as nk
from .errors import ContractViolation, DegenerateFrameError, IllPosedError
from .numkernel import DEFAULT_TOL, ToleranceProfile


@dataclass(frozen=True, eq=False)
class GramModel:
    """Finite encoding of ``(u_j)_{j<n}`` and ``(t_k)_{k<m}``.

    Attributes
    ----------
    g_u : (n, n) complex array
        ``g_u[j, k] = <u_k, u_j>``.
    x_cross : (n, m) complex array
        ``x_cross[j, k] = <t_k, u_j>``.
    g_t : (m, m) complex array
        Gramian of the reconstruction vectors; must be positive definite.
    """

    g_u: np.ndarray
    x_cross: np.ndarray
    g_t: np.ndarray
    tol: ToleranceProfile = field(default=DEFAULT_TOL)

    def __post_init__(self):
        g_u = nk.as_matrix(self.g_u, "g_u")
        x = nk.as_matrix(self.x_cross, "x_cross")
        g_t = nk.as_matrix(self.g_t, "g_t")
        n, m = x.shape
        if g_u.shape != (n, n):
            raise ContractViolation(f"g_u has shape {g_u.shape}, expected {(n, n)}")
        if g_t.shape != (m, m):
            raise ContractViolation(f"g_t has shape {g_t.shape}, expected {(m, m)}")
        object.__setattr__(self, "g_u", g_u)
        object.__setattr__(self, "x_cross", x)
        object.__setattr__(self, "g_t", g_t)
        # Both checks raise ContractViolation on non-Hermitian / non-PSD input.
        self.gram_spectrum
        w_t, _ = nk.hermitian_eig(g_t, self.tol)
        if w_t[0] <= self.tol.rank_tol(g_t.shape) * max(w_t[-1], 0.0):
            raise ContractViolation("g_t must be positive definite (reconstruction vectors a Riesz basis)")

    @property
    def n(self) -> int:
        return self.x_cross.shape[0]

    @property
    def m(self) -> int:
        return self.x_cross.shape[1]

    @cached_property
    def gram_spectrum(self):
        """Clamped eigendecomposition ``(w, v)`` of ``g_u`` (ascending)."""
        return nk.psd_spectrum(self.g_u, self.tol)

    @cached_property
    def g_t_sqrt(self) -> np.ndarray:
        return nk.psd_sqrt(self.g_t, self.tol)

    @cached_property
    def g_t_inv_sqrt(self) -> np.ndarray:
        return nk.psd_pinv_sqrt(self.g_t, self.tol)

    @property
    def orthonormal_recon(self) -> bool:
        return bool(np.max(np.abs(self.g_t - np.eye(self.m))) <= self.tol.equality_tol)

    def sigma_pinv_sqrt(self, lam: float) -> np.ndarray:
        """``psd_pinv_sqrt(sigma_lambda(g_u, lam))`` from the cached spectrum.

        ``lam * I + (1 - lam) * g_u`` shares the eigenvectors of ``g_u``, so
        a single eigendecomposition serves the whole lambda grid.
        """
        check_lambda(lam)
        cache = self.__dict__.setdefault("_weight_cache", {})
        if lam not in cache:
            w, v = self.gram_spectrum
            weight = nk.psd_function(lam + (1.0 - lam) * w, v, lambda x: 1.0 / np.sqrt(x), self.tol)
            weight.setflags(write=False)
            cache[lam] = weight
        return cache[lam]

    @cached_property
    def gram_sqrt(self) -> np.ndarray:
        w, v = self.gram_spectrum
        return nk.psd_function(w, v, np.sqrt, self.tol, drop_null=False)

    @cached_property
    def bounds(self):
        """Frame bounds ``(A, B)`` of the sampling system."""
        return _bounds_from_spectrum(self.gram_spectrum[0], self.tol)

    @cached_property
    def cos_angle(self) -> float:
        return subspace_angle(self)

    def to_json(self) -> str:
        def enc(a):
            return {"rows": a.shape[0], "cols": a.shape[1],
                    "data": [[float(z.real), float(z.imag)] for z in a.ravel()]}

        return json.dumps({
            "n": self.n, "m": self.m,
            "g_u": enc(self.g_u), "x_cross": enc(self.x_cross), "g_t": enc(self.g_t),
            "rank_rel_tol": self.tol.rank_rel_tol, "equality_tol": self.tol.equality_tol,
        })

    @classmethod
    def from_json(cls, text: str) -> "GramModel":
        obj = json.loads(text)

        def dec(d):
            data = np.array(d["data"], dtype=float).reshape(-1, 2)
            return (data[:, 0] + 1j * data[:, 1]).reshape(d["rows"], d["cols"])

        tol = ToleranceProfile(obj.get("rank_rel_tol"), obj.get("equality_tol", 1e-10))
        return cls(dec(obj["g_u"]), dec(obj["x_cross"]), dec(obj["g_t"]), tol)


@dataclass(frozen=True, eq=False)
class TargetData:
    """What is known about a target ``f``.

    ``measurements`` are the exact samples ``<f, u_j>``, ``t_coeffs`` the
    inner products ``<f, t_k>`` and ``norm_sq`` is ``||f||^2``.
    """

    measurements: np.ndarray
    t_coeffs: np.ndarray
    norm_sq: float

    def __post_init__(self):
        object.__setattr__(self, "measurements", np.asarray(self.measurements, dtype=np.complex128))
        object.__setattr__(self, "t_coeffs", np.asarray(self.t_coeffs, dtype=np.complex128))
        if not self.norm_sq >= 0:
            raise ContractViolation("norm_sq must be nonnegative")

    def best_approx_error(self, model: GramModel) -> float:
        """``||f - P_T f||`` by Pythagoras: ``||f||^2 - tau^* g_t^{-1} tau``."""
        tau = self.t_coeffs
        proj = np.real(np.vdot(tau, np.linalg.solve(model.g_t, tau)))
        return float(np.sqrt(max(self.norm_sq - proj, 0.0)))


@dataclass(frozen=True, eq=False)
class FiniteFrame:
    """Explicit frame vectors: the columns of ``vectors`` (shape ``N x k``)."""

    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vectors", nk.as_matrix(self.vectors, "vectors"))

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    def analysis(self, f) -> np.ndarray:
        return self.vectors.conj().T @ f

    def synthesis(self, c) -> np.ndarray:
        return self.vectors @ c

    def gram(self) -> np.ndarray:
        return self.vectors.conj().T @ self.vectors

    def frame_operator(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T


def check_lambda(lam):
    if not 0.0 <= lam <= 1.0:
        raise ContractViolation(f"lambda must lie in [0, 1], got {lam}")


def frame_bounds(g, tol: ToleranceProfile = DEFAULT_TOL):
    """Frame bounds ``(A, B)`` of the spanned subspace from a Gramian.

    ``B`` is the largest eigenvalue; ``A`` the smallest one above the rank
    cut-off. Zero eigenvalues belong to the synthesis null space and are
    ignored.
    """
    w, _ = nk.psd_spectrum(nk.as_matrix(g, "g"), tol)
    return _bounds_from_spectrum(w, tol)


def _bounds_from_spectrum(w, tol):
    top = float(w[-1])
    if top <= 0.0:
        raise DegenerateFrameError("all Gramian eigenvalues vanish")
    nonzero = w[w > tol.rank_tol((w.size, w.size)) * top]
    return float(nonzero[0]), top


def subspace_angle(model: GramModel) -> float:
    """``cos`` of the angle from the reconstruction space to the sampling space.

    Computed as the smallest singular value of ``G^{dagger/2} X G_T^{-1/2}``,
    i.e. ``inf ||P_U g||`` over unit ``g`` in the reconstruction space.
    """
    w_half = model.sigma_pinv_sqrt(0.0)
    y = w_half @ model.x_cross @ model.g_t_inv_sqrt
    if model.m > model.n:
        return 0.0
    s = np.linalg.svd(y, compute_uv=False)
    return float(min(max(s[-1], 0.0), 1.0))


def sigma_lambda(g, lam: float) -> np.ndarray:
    """``lam * I + (1 - lam) * g``."""
    check_lambda(lam)
    g = nk.as_matrix(g, "g")
    return lam * np.eye(g.shape[0]) + (1.0 - lam) * g


def projected_frame_gram(model: GramModel) -> np.ndarray:
    """Gram matrix of ``(P_T u_j)``: ``X g_t^{-1} X^*``."""
    x = model.x_cross
    return x @ np.linalg.solve(model.g_t, x.conj().T)


def from_finite_frame(sampling: FiniteFrame, recon: FiniteFrame,
                      tol: ToleranceProfile = DEFAULT_TOL) -> GramModel:
    if sampling.ambient_dim != recon.ambient_dim:
        raise ContractViolation("sampling and reconstruction frames live in different spaces")
    u, t = sampling.vectors, recon.vectors
    return GramModel(u.conj().T @ u, u.conj().T @ t, t.conj().T @ t, tol)


def orthogonal_projector(frame: FiniteFrame, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the span of the frame vectors."""
    v = frame.vectors
    return v @ nk.pinv(v, tol)


def oblique_projector(range_basis, kernel_complement_basis,
                      tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Projector with range ``span(R)`` and null space ``span(K)^perp``.

    Formed as ``R (K^* R)^dagger K^*`` after replacing both bases by
    orthonormal ones. Requires the direct sum
    ``span(R) + span(K)^perp`` to be the whole space, which fails when
    ``K^* R`` loses rank relative to ``R``.
    """
    r = nk.as_matrix(range_basis, "range_basis")
    k = nk.as_matrix(kernel_complement_basis, "kernel_complement_basis")
    # The projector depends only on the two spans; orthonormal bases keep
    # K^*R as well conditioned as the angle allows.
    qr, qk = _orth(r, tol), _orth(k, tol)
    kr = qk.conj().T @ qr
    s_kr = np.linalg.svd(kr, compute_uv=False)
    if qk.shape[1] == 0 or s_kr.size < qr.shape[1] or s_kr[-1] <= 10 * tol.rank_tol(kr.shape):
        raise IllPosedError("range and kernel do not form a direct sum (angle is zero)")
    return qr @ nk.pinv(kr, tol) @ qk.conj().T


def _orth(a, tol):
    u, s, _ = nk.svd(a)
    keep = s > tol.rank_tol(a.shape) * s[0] if s.size and s[0] > 0 else np.zeros(s.size, bool)
    return u[:, keep]


def regularized_frame(frame: FiniteFrame, lam: float,
                      tol: ToleranceProfile = DEFAULT_TOL) -> FiniteFrame:
    """Vectors ``M_lam^{-1/2} u_j`` with ``M_lam = lam I + (1 - lam) S``.

    At ``lam = 0`` the pseudoinverse square root of the frame operator is
    used, which yields the canonical tight frame (a Parseval frame).
    """
    m_lam = sigma_lambda(frame.frame_operator(), lam)
    return FiniteFrame(nk.psd_pinv_sqrt(m_lam, tol) @ frame.vectors)


def lambda_projector_oracle(sampling: FiniteFrame, recon: FiniteFrame, lam: float,
                            tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Oblique projector onto ``span(recon)`` along ``S_lam(T)^perp``.

    ``S_lam`` is the frame operator of :func:`regularized_frame`; it is
    ``S`` at ``lam = 1`` and ``P_U`` at ``lam = 0``. Built from explicit
    vectors only, independent of any Gram-level formula.
    """
    s_lam = regularized_frame(sampling, lam, tol).frame_operator()
    return oblique_projector(recon.vectors, s_lam @ recon.vectors, tol)
