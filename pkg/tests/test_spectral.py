import numpy as np
import pytest

from folcalc.spectral import (BandLimitInvalid, FourierSpectrum, SphereSpectrum,
                              _goldberg_values)


class TestFourier:
    def test_modes_and_zero(self):
        sp = FourierSpectrum(2, 3)
        assert sp.total == 49
        assert sp.key_index[(0, 0)] == sp.zero_index

    def test_conj_involution(self):
        sp = FourierSpectrum(1, 5)
        rng = np.random.default_rng(0)
        arr = rng.standard_normal(sp.total) + 1j * rng.standard_normal(sp.total)
        out, w = sp.conj(0, arr)
        back, _ = sp.conj(w, out)
        assert np.allclose(back, arr)

    def test_product_matches_pointwise(self):
        # convolution of coefficients = product of trigonometric polynomials
        sp = FourierSpectrum(1, 8)
        rng = np.random.default_rng(1)
        a = sp.random_coeffs(rng, 3)
        b = sp.random_coeffs(rng, 4)
        c, truncated = sp.product(0, a, 0, b)
        assert not truncated
        t = np.linspace(0, 1, 101)[:-1]
        basis = np.exp(2j * np.pi * np.outer(t, sp.modes[:, 0]))
        assert np.allclose((basis @ a) * (basis @ b), basis @ c, atol=1e-12)

    def test_product_truncation_flag(self):
        sp = FourierSpectrum(1, 2)
        a = sp.random_coeffs(np.random.default_rng(2), 2)
        _, truncated = sp.product(0, a, 0, a)
        assert truncated

    def test_integral_is_mean(self):
        sp = FourierSpectrum(1, 4)
        f = sp.constant(3.5)
        f[sp.key_index[2]] = 1.0
        assert np.isclose(sp.integral(f), 3.5)

    def test_band_limit_validation(self):
        with pytest.raises(BandLimitInvalid):
            FourierSpectrum(1, 0)


@pytest.fixture(scope="module")
def sphere():
    return SphereSpectrum(6, radius=0.5)


class TestSphere:
    def test_low_degree_values(self):
        theta = np.array([0.3, 1.1, 2.0])
        y00 = _goldberg_values(0, 0, 0, theta)
        assert np.allclose(y00, np.sqrt(1 / (4 * np.pi)))
        y10 = _goldberg_values(0, 1, 0, theta)
        assert np.allclose(y10, np.sqrt(3 / (4 * np.pi)) * np.cos(theta))
        ym11 = _goldberg_values(-1, 1, 0, theta)
        assert np.allclose(ym11, -np.sqrt(3 / (8 * np.pi)) * np.sin(theta))

    @pytest.mark.parametrize("w", [-2, -1, 0, 1, 2])
    def test_quadrature_gram_identity(self, sphere, w):
        B = sphere._basis[w]
        G = (B * sphere.quad_w[:, None]).conj().T @ B
        assert np.abs(G - np.eye(G.shape[0])).max() < 1e-12

    def test_mass(self, sphere):
        # area of the radius-1/2 sphere
        assert np.isclose(sphere.mass, np.pi)
        assert np.isclose(sphere.integral(sphere.constant(2.0)), 2.0 * np.pi)

    @pytest.mark.parametrize("w", [-1, 0, 1])
    def test_conj_matches_grid(self, sphere, w):
        rng = np.random.default_rng(3)
        arr = sphere.random_coeffs(rng, 4, weight=w)
        out, wc = sphere.conj(w, arr)
        assert wc == -w
        assert np.allclose(sphere.synthesize(-w, out),
                           np.conj(sphere.synthesize(w, arr)), atol=1e-11)

    def test_ladder_on_grid(self, sphere):
        # derivative along Vbar of Y10-type data agrees with the analytic
        # gradient; Vbar_1 = (E_theta + i E_phi)/sqrt(2) scaled by 1/radius
        rho = sphere.radius
        arr = np.zeros(sphere.space(0).total, dtype=complex)
        arr[sphere._lm_index[0][(1, 0)]] = 1.0
        src, dst, fac, w_to = sphere.ladder(0, raising=False)
        out = np.zeros(sphere.space(w_to).total, dtype=complex)
        out[dst] = arr[src] * fac
        # d/dtheta of Y10/rho divided by rho (unit frame), times 1/sqrt(2)
        expect = (1 / (rho * np.sqrt(2))) * (-np.sqrt(3 / (4 * np.pi)) * np.sin(sphere.theta)) / rho
        assert np.allclose(sphere.synthesize(w_to, out), expect, atol=1e-11)

    def test_product_exactness(self, sphere):
        rng = np.random.default_rng(5)
        a = sphere.random_coeffs(rng, 3, weight=1)
        b = sphere.random_coeffs(rng, 3, weight=-1)
        c, truncated = sphere.product(1, a, -1, b)
        assert not truncated
        assert np.allclose(sphere.synthesize(0, c),
                           sphere.synthesize(1, a) * sphere.synthesize(-1, b),
                           atol=1e-10)

    def test_product_truncation_flag(self, sphere):
        rng = np.random.default_rng(6)
        a = sphere.random_coeffs(rng, sphere.L, weight=0)
        _, truncated = sphere.product(0, a, 0, a)
        assert truncated
