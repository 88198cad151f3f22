import math

import numpy as np
import pytest
from scipy import integrate

from framerecon import fouriersim as fs
from framerecon.errors import ContractViolation

# Gauss-Legendre rule on [-1/2, 1/2]; 2048 nodes resolve frequencies far beyond 100.
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(2048)
XQ, WQ = _NODES / 2, _WEIGHTS / 2


class ZeroRng:
    def uniform(self, low, high, size):
        return np.zeros(size)


def exponentials(freqs):
    """Columns exp(2 pi i w x) sampled at the quadrature nodes."""
    return np.exp(2j * np.pi * np.outer(XQ, freqs))


def test_sinc_values():
    assert fs.sinc(0.0) == 1.0
    assert fs.sinc(1e-9) == pytest.approx(1.0)
    assert abs(fs.sinc(3.0)) < 1e-15
    assert fs.sinc(0.5) == pytest.approx(2 / np.pi)
    x = 1e-8 * 0.99
    assert fs.sinc(x) == pytest.approx(np.sin(np.pi * x) / (np.pi * x), rel=1e-15)


def test_draw_frequencies():
    scheme = fs.draw_frequencies(5, ZeroRng())
    assert np.array_equal(scheme.omegas, np.arange(-5, 6) / 2)
    rng = np.random.default_rng(3)
    scheme = fs.draw_frequencies(90, rng)
    j = scheme.indices
    assert np.all(np.abs(scheme.omegas - j / 2) <= 2)
    a = fs.draw_frequencies(90, np.random.default_rng(11)).omegas
    b = fs.draw_frequencies(90, np.random.default_rng(11)).omegas
    assert np.array_equal(a, b)


def test_scheme_shape_checked():
    with pytest.raises(ContractViolation):
        fs.SamplingScheme(2, np.zeros(4))


def test_model_structure():
    model = fs.build_fourier_model(fs.draw_frequencies(10, ZeroRng()), 3)
    assert np.allclose(np.diag(model.g_u), 1)
    x = model.x_cross.real
    j = np.arange(-10, 11)
    for col, k in enumerate(range(-3, 4)):
        even = j % 2 == 0
        expected = (j[even] == 2 * k).astype(float)
        assert np.allclose(x[even, col], expected, atol=1e-15)
    assert np.array_equal(model.g_t, np.eye(7))


def test_gram_matches_quadrature():
    scheme = fs.draw_frequencies(30, np.random.default_rng(5))
    model = fs.build_fourier_model(scheme, 8)
    u = exponentials(scheme.omegas)
    t = exponentials(np.arange(-8, 9))
    # entry (j, k) = <v_k, u_j> = int v_k conj(u_j)
    g = u.conj().T @ (WQ[:, None] * u)
    x = u.conj().T @ (WQ[:, None] * t)
    assert np.abs(model.g_u - g).max() < 1e-12
    assert np.abs(model.x_cross - x).max() < 1e-12
    assert np.allclose(model.g_u, model.g_u.conj().T)


def _quad_fhat(w):
    k = 2 * np.pi * w
    if k == 0:
        return integrate.quad(np.exp, -0.5, 0.5, epsabs=1e-14, epsrel=1e-13)[0] + 0j
    re = integrate.quad(np.exp, -0.5, 0.5, weight="cos", wvar=k, epsabs=1e-14, epsrel=1e-13)[0]
    im = integrate.quad(np.exp, -0.5, 0.5, weight="sin", wvar=k, epsabs=1e-14, epsrel=1e-13)[0]
    return re - 1j * im


def test_fhat_examples():
    assert fs.fhat_exp(0.0) == pytest.approx(1.0421906109874948, abs=1e-12)
    assert fs.fhat_exp(0.5) == pytest.approx(0.6518252767201776 - 0.20748242964451757j, abs=1e-12)
    for w in (0.3, 2.7, 19.1):
        assert fs.fhat_exp(-w) == pytest.approx(np.conj(fs.fhat_exp(w)), abs=1e-15)


def test_fhat_against_adaptive_quadrature():
    grid = np.linspace(-50, 50, 100)
    for w in grid:
        assert abs(fs.fhat_exp(w) - _quad_fhat(w)) < 1e-10


def test_exp_target():
    scheme = fs.draw_frequencies(6, np.random.default_rng(2))
    target = fs.exp_target(scheme, 4)
    assert target.norm_sq == pytest.approx(1.175201194, abs=1e-9)
    assert target.norm_sq == pytest.approx(np.sum(WQ * np.exp(2 * XQ)), rel=1e-14)
    assert target.t_coeffs[4] == pytest.approx(1.042190610, abs=1e-9)
    assert np.array_equal(target.measurements, fs.fhat_exp(scheme.omegas))


def test_snr_variance():
    assert fs.snr_variance(20.0, 181, math.sinh(1)) == pytest.approx(6.492824274275146e-05, rel=1e-12)
    assert fs.snr_variance(math.inf, 181, 1.0) == 0.0


def test_add_noise():
    d = np.arange(5) + 0j
    assert np.array_equal(fs.add_noise(d, fs.NoiseSpec(), 1.0), d)
    var = 6.492824274275146e-05
    big = np.zeros(100_000, dtype=complex)
    noise = fs.add_noise(big, fs.NoiseSpec(20.0 + 10 * np.log10(181 / 100_000), seed=4), math.sinh(1))
    assert np.mean(np.abs(noise) ** 2) == pytest.approx(var, rel=0.02)
    # real and imaginary parts carry equal power
    assert np.var(noise.real) == pytest.approx(np.var(noise.imag), rel=0.03)
    again = fs.add_noise(big, fs.NoiseSpec(20.0 + 10 * np.log10(181 / 100_000), seed=4), math.sinh(1))
    assert np.array_equal(noise, again)


def test_draw_bias():
    assert np.array_equal(fs.draw_bias(fs.BiasSpec(), 90, 1.0), np.zeros(91))
    sigma2 = fs.snr_variance(20.0, 91, math.sinh(1))
    assert sigma2 == pytest.approx(1.29143e-4, rel=1e-5)
    a = np.concatenate([fs.draw_bias(fs.BiasSpec(20.0, 91, seed=s), 90, math.sinh(1)) for s in range(300)])
    # Parseval: expected energy of the polynomial equals (n + 1) sigma^2
    assert np.mean(np.abs(a) ** 2) == pytest.approx(sigma2, rel=0.03)
    with pytest.raises(ContractViolation):
        fs.draw_bias(fs.BiasSpec(10.0), 9, 1.0)
    with pytest.raises(ContractViolation):
        fs.draw_bias(fs.BiasSpec(10.0, coeff_count=5), 8, 1.0)


def test_bias_measurements_examples():
    scheme = fs.SamplingScheme(2, np.array([-2.0, -1.0, 0.0, 1.0, 2.0]))
    assert np.allclose(fs.bias_measurements(scheme, np.zeros(3)), 0)
    a = np.zeros(3, dtype=complex)
    a[2] = 1.0  # j = 1
    out = fs.bias_measurements(scheme, a)
    assert out[3] == pytest.approx(1.0)
    assert np.allclose(np.delete(out, 3), 0, atol=1e-15)


def test_bias_measurements_against_quadrature():
    rng = np.random.default_rng(8)
    scheme = fs.draw_frequencies(20, rng)
    a = fs.draw_bias(fs.BiasSpec(0.0, 21), 20, 1.0, rng)
    j = np.arange(-10, 11)
    delta_f = exponentials(j) @ a
    # <f + df, u_k> - <f, u_k> = int df(x) exp(-2 pi i w_k x) dx
    quad = exponentials(scheme.omegas).conj().T @ (WQ * delta_f)
    assert np.abs(fs.bias_measurements(scheme, a) - quad).max() < 1e-8
    assert np.sum(WQ * np.abs(delta_f) ** 2) == pytest.approx(np.sum(np.abs(a) ** 2), rel=1e-8)


def test_gram_psd_over_random_schemes():
    rng = np.random.default_rng(17)
    for _ in range(500):
        n = int(rng.integers(1, 91))
        scheme = fs.draw_frequencies(n, rng)
        om = scheme.omegas
        g = fs.sinc(om[:, None] - om[None, :])
        w = np.linalg.eigvalsh(g)
        assert w[0] >= -1e-10 * w[-1]


def test_angle_is_tiny():
    rng = np.random.default_rng(23)
    good = 0
    for _ in range(1000):
        model = fs.build_fourier_model(fs.draw_frequencies(90, rng), 40)
        good += model.cos_angle >= 0.999
    assert good >= 990
