"""Nonuniform Fourier sampling of functions supported on [-1/2, 1/2].

Sampling vectors are ``u_j(x) = exp(2 pi i w_j x)`` on the unit interval,
reconstruction vectors the integer-frequency exponentials ``t_k``,
``k = -m..m``. With the transform ``F f(xi) = int f(x) exp(-2 pi i x xi) dx``
every inner product is a sinc value:

    <u_k, u_j> = sinc(w_j - w_k),    <t_k, u_j> = sinc(w_j - k).

The target is ``f(x) = e^x`` on the interval. All randomness comes from
explicit ``numpy.random.Generator`` streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .framekit import GramModel, TargetData
from .numkernel import DEFAULT_TOL, ToleranceProfile

JITTER = 2.0
SINC_SMALL = 1e-8
EXP_NORM_SQ = math.sinh(1.0)


def sinc(x):
    """``sin(pi x) / (pi x)`` with a Taylor branch for ``|x| < 1e-8``."""
    x = np.asarray(x, dtype=float)
    px = np.pi * x
    small = np.abs(x) < SINC_SMALL
    safe = np.where(small, 1.0, px)
    return np.where(small, 1.0 - px * px / 6.0, np.sin(safe) / safe)


@dataclass(frozen=True, eq=False)
class SamplingScheme:
    """Frequencies ``omegas[j + n]`` for ``j = -n..n``."""

    n: int
    omegas: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        if om.shape != (2 * self.n + 1,):
            raise ContractViolation(f"expected {2 * self.n + 1} frequencies, got {om.shape}")
        object.__setattr__(self, "omegas", om)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float = math.inf
    seed: int = 0


@dataclass(frozen=True)
class BiasSpec:
    snr_db: float = math.inf
    coeff_count: int = 0
    seed: int = 0


def draw_frequencies(n: int, rng) -> SamplingScheme:
    """``w_j = j / 2 + delta_j`` with ``delta_j`` uniform on ``[-2, 2)``."""
    if n < 0:
        raise ContractViolation("n must be nonnegative")
    j = np.arange(-n, n + 1)
    delta = np.asarray(rng.uniform(-JITTER, JITTER, size=j.size), dtype=float)
    return SamplingScheme(n, j / 2.0 + delta)


def build_fourier_model(scheme: SamplingScheme, m: int,
                        tol: ToleranceProfile = DEFAULT_TOL) -> GramModel:
    om = scheme.omegas
    k = np.arange(-m, m + 1)
    g_u = sinc(om[:, None] - om[None, :])
    x = sinc(om[:, None] - k[None, :])
    return GramModel(g_u, x, np.eye(2 * m + 1), tol)


def fhat_exp(omega):
    """Fourier transform of ``e^x`` restricted to ``[-1/2, 1/2]``.

    ``2 sinh(z / 2) / z`` with ``z = 1 - 2 pi i omega``.
    """
    z = 1.0 - 2j * np.pi * np.asarray(omega, dtype=float)
    return 2.0 * np.sinh(z / 2.0) / z


def exp_target(scheme: SamplingScheme, m: int) -> TargetData:
    k = np.arange(-m, m + 1)
    return TargetData(fhat_exp(scheme.omegas), fhat_exp(k), EXP_NORM_SQ)


def snr_variance(snr_db: float, count: int, norm_sq: float) -> float:
    """Per-entry power ``norm_sq / (count * 10^(snr/10))``; zero at infinite SNR."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return norm_sq / (count * 10.0 ** (snr_db / 10.0))


def complex_gaussian(rng, size: int, variance: float) -> np.ndarray:
    """Circularly-symmetric complex Gaussian with ``E|z|^2 = variance``."""
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def add_noise(d, spec: NoiseSpec, norm_sq: float, rng=None) -> np.ndarray:
    """Add i.i.d. noise at the given SNR; ``rng`` defaults to one seeded by ``spec.seed``."""
    d = np.asarray(d, dtype=np.complex128)
    var = snr_variance(spec.snr_db, d.size, norm_sq)
    if var == 0.0:
        return d.copy()
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    return d + complex_gaussian(rng, d.size, var)


def draw_bias(spec: BiasSpec, n: int, norm_sq: float, rng=None) -> np.ndarray:
    """Coefficients ``a_j``, ``j = -n/2..n/2``, of a trigonometric perturbation.

    Scaled so that ``norm_sq / E||Delta f||^2 = 10^(snr/10)``.
    """
    if n % 2:
        raise ContractViolation(f"bias polynomial needs an even n, got {n}")
    count = n + 1
    if spec.coeff_count not in (0, count):
        raise ContractViolation(f"coeff_count {spec.coeff_count} does not match n + 1 = {count}")
    var = snr_variance(spec.snr_db, count, norm_sq)
    if var == 0.0:
        return np.zeros(count, dtype=np.complex128)
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    return complex_gaussian(rng, count, var)


def bias_measurements(scheme: SamplingScheme, a) -> np.ndarray:
    """Samples ``sum_j a_j sinc(w_k - j)`` of the perturbation's transform."""
    a = np.asarray(a, dtype=np.complex128)
    half = (a.size - 1) // 2
    j = np.arange(-half, half + 1)
    return sinc(scheme.omegas[:, None] - j[None, :]) @ a
