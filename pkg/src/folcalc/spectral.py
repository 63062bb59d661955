"""Spectral realizations of the basic-function algebra.

Every shipped transverse geometry admits a countable orthonormal basis
of basic functions on which all frame derivations act block-diagonally:

* Fourier lattices (hyperbolic-torus flow, flat torus products): one
  block per lattice mode, dimension 1, derivations act as constant
  multipliers, products are lattice convolutions.

* Round sphere: one block per spherical-harmonic degree ``l`` with
  multiplicity ``2l + 1``.  Form coefficients carry a frame weight
  (spin): under a rotation of the unitary frame by ``psi`` a weight-w
  coefficient scales by ``exp(i w psi)``.  Each weight has its own
  orthonormal basis; covariant derivatives along the unitary frame act
  as degree-preserving ladder maps between adjacent weights, and
  pointwise products are evaluated on a quadrature grid exact for all
  band-limited integrands that arise.

Coefficient arrays always keep the spectral index on axis -1 (or -2
when a trailing ensemble axis is present); all maps here broadcast over
leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np
from scipy.signal import fftconvolve

TRUNCATION_RTOL = 1e-10


class BandLimitInvalid(ValueError):
    pass


@dataclass(frozen=True)
class SpectralSpace:
    """Block layout of one coefficient space: keys, dims, offsets."""

    keys: tuple
    dims: tuple

    @property
    def offsets(self):
        out = np.zeros(len(self.dims) + 1, dtype=int)
        np.cumsum(self.dims, out=out[1:])
        return out

    @property
    def total(self):
        return int(sum(self.dims))

    def block_slice(self, i):
        off = self.offsets
        return slice(int(off[i]), int(off[i + 1]))


class FourierSpectrum:
    """Integer Fourier lattice in d axes, modes -N..N per axis.

    Weight functional is the mean over the unit torus, so the modes
    ``exp(2 pi i k.x)`` are orthonormal and the zero mode carries the
    integral.
    """

    kind = "fourier"

    def __init__(self, d, band_limit):
        if band_limit < 1:
            raise BandLimitInvalid(f"band limit must be >= 1, got {band_limit}")
        self.d = d
        self.N = band_limit
        self.shape = (2 * band_limit + 1,) * d
        grids = np.indices(self.shape).reshape(d, -1) - band_limit
        self.modes = grids.T.copy()  # (total, d), C order of the lattice
        self.total = self.modes.shape[0]
        keys = [tuple(int(x) for x in m) if d > 1 else int(m[0]) for m in self.modes]
        self._space = SpectralSpace(tuple(keys), (1,) * self.total)
        self.key_index = {k: i for i, k in enumerate(keys)}
        self.zero_index = self.key_index[tuple([0] * d) if d > 1 else 0]
        # conjugation sends mode k to -k
        flipped = [tuple(int(x) for x in (-m)) if d > 1 else int(-m[0]) for m in self.modes]
        self.conj_perm = np.array([self.key_index[k] for k in flipped], dtype=int)

    def space(self, weight=0):
        return self._space

    def coordinate_multiplier(self, axis):
        """Multiplier of the coordinate derivative d/dx_axis on each mode."""
        return 2j * np.pi * self.modes[:, axis].astype(float)

    def conj(self, weight, arr):
        return np.conj(np.take(arr, self.conj_perm, axis=-1)), -weight

    def constant(self, value=1.0):
        out = np.zeros(self.total, dtype=complex)
        out[self.zero_index] = value
        return out

    def integral(self, arr):
        return np.asarray(arr)[..., self.zero_index]

    def random_coeffs(self, rng, bandwidth, lead_shape=()):
        if bandwidth > self.N:
            raise BandLimitInvalid("bandwidth exceeds the band limit")
        out = np.zeros(lead_shape + (self.total,), dtype=complex)
        mask = np.all(np.abs(self.modes) <= bandwidth, axis=1)
        k = int(mask.sum())
        vals = rng.standard_normal(lead_shape + (k,)) + 1j * rng.standard_normal(lead_shape + (k,))
        out[..., mask] = vals
        return out

    def product(self, w1, arr1, w2, arr2):
        """Pointwise product via lattice convolution, cropped to the band.

        Returns (coefficients, truncated flag); the flag reports mass lost
        outside the band.
        """
        a = np.asarray(arr1).reshape(self.shape)
        b = np.asarray(arr2).reshape(self.shape)
        full = fftconvolve(a, b, mode="full")
        lost = 0.0
        sl = tuple(slice(self.N, 3 * self.N + 1) for _ in range(self.d))
        core = full[sl]
        total = float(np.vdot(full, full).real)
        kept = float(np.vdot(core, core).real)
        lost = max(total - kept, 0.0)
        truncated = lost > TRUNCATION_RTOL * (total + 1e-300)
        return core.reshape(-1).copy(), truncated

    def bandwidth_of(self, arr):
        nz = np.abs(np.asarray(arr)) > 0
        if not nz.any():
            return 0
        return int(np.abs(self.modes[np.nonzero(nz.reshape(-1, self.total).any(0))[0]]).max())


def _goldberg_values(s, l, m, theta):
    """Spin-s spherical harmonic theta-part on the unit sphere (no exp(i m phi))."""
    if l < abs(s) or abs(m) > l:
        return np.zeros_like(theta)
    pref = (-1.0) ** m * np.sqrt((2 * l + 1) / (4 * np.pi))
    pref *= np.sqrt(factorial(l + m) * factorial(l - m)
                    / (factorial(l + s) * factorial(l - s)))
    half = theta / 2.0
    sh, ch = np.sin(half), np.cos(half)
    out = np.zeros_like(theta)
    for r in range(max(0, m - s), min(l - s, l + m) + 1):
        k_cos = 2 * r + s - m
        out = out + (comb(l - s, r) * comb(l + s, r + s - m) * (-1.0) ** (l - r - s)
                     * sh ** (2 * l - k_cos) * ch ** k_cos)
    return pref * out


class SphereSpectrum:
    """Spin-weighted spherical-harmonic spaces on a round sphere.

    Weight-w coefficients expand in the basis dual to a unitary frame
    rotation charge of w; internally these are spin-(-w) harmonics in the
    classical convention, normalized against the transverse area measure
    ``radius^2 dOmega``.  Quadrature (Gauss-Legendre in colatitude x
    trapezoid in longitude) is exact for triple products of band-limited
    basis functions.
    """

    kind = "sphere"
    max_weight = 2

    def __init__(self, band_limit, radius):
        if band_limit < 2:
            raise BandLimitInvalid(f"degree band limit must be >= 2, got {band_limit}")
        self.L = band_limit
        self.radius = radius
        n_theta = (3 * band_limit) // 2 + 4
        n_phi = 3 * band_limit + 4
        x, wq = np.polynomial.legendre.leggauss(n_theta)
        theta = np.arccos(x)
        phi = np.arange(n_phi) * (2 * np.pi / n_phi)
        self.theta = np.repeat(theta, n_phi)
        self.phi = np.tile(phi, n_theta)
        # area weights for radius^2 * dOmega
        self.quad_w = np.repeat(wq, n_phi) * (2 * np.pi / n_phi) * radius ** 2
        self.mass = float(self.quad_w.sum())

        self._spaces = {}
        self._basis = {}
        for w in range(-self.max_weight, self.max_weight + 1):
            keys, dims, cols = [], [], []
            for l in range(abs(w), band_limit + 1):
                keys.append(l)
                dims.append(2 * l + 1)
                for m in range(-l, l + 1):
                    vals = (_goldberg_values(-w, l, m, self.theta)
                            * np.exp(1j * m * self.phi) / radius)
                    cols.append(vals)
            self._spaces[w] = SpectralSpace(tuple(keys), tuple(dims))
            self._basis[w] = np.array(cols).T if cols else np.zeros((self.theta.size, 0))
        self._lm = {w: [(l, m) for l in range(abs(w), band_limit + 1)
                        for m in range(-l, l + 1)]
                    for w in range(-self.max_weight, self.max_weight + 1)}
        self._lm_index = {w: {lm: i for i, lm in enumerate(self._lm[w])}
                          for w in self._lm}

    def space(self, weight):
        if abs(weight) > self.max_weight:
            raise ValueError(f"frame weight {weight} outside the supported range")
        return self._spaces[weight]

    def _transfer(self, w_from, w_to, factors_lm):
        """Index arrays + factors moving (l, m) entries between weight spaces."""
        src, dst, fac = [], [], []
        for i, (l, m) in enumerate(self._lm[w_from]):
            j = self._lm_index[w_to].get((l, m))
            if j is None:
                continue
            src.append(i)
            dst.append(j)
            fac.append(factors_lm(l, m))
        return np.array(src, dtype=int), np.array(dst, dtype=int), np.array(fac)

    def ladder(self, weight, raising):
        """(src, dst, factors, new_weight) for the frame covariant derivative.

        raising=True is the derivative along V_1 (weight +1), False along
        Vbar_1 (weight -1); factors include the U(1) connection so the
        map is the full covariant derivative on weight-w coefficients.
        """
        scale = 1.0 / (self.radius * np.sqrt(2.0))
        if raising:
            w_to = weight + 1
            fac = lambda l, m: scale * np.sqrt(max((l - weight) * (l + weight + 1), 0.0))
        else:
            w_to = weight - 1
            fac = lambda l, m: -scale * np.sqrt(max((l + weight) * (l - weight + 1), 0.0))
        src, dst, factors = self._transfer(weight, w_to, fac)
        return src, dst, factors, w_to

    def conj(self, weight, arr):
        """Conjugate coefficients: weight w -> -w, (l, m) -> (l, -m)."""
        arr = np.asarray(arr)
        out = np.zeros(arr.shape[:-1] + (self.space(-weight).total,), dtype=complex)
        for i, (l, m) in enumerate(self._lm[weight]):
            j = self._lm_index[-weight][(l, -m)]
            out[..., j] = (-1.0) ** (weight + m) * np.conj(arr[..., i])
        return out, -weight

    def constant(self, value=1.0):
        out = np.zeros(self.space(0).total, dtype=complex)
        out[self._lm_index[0][(0, 0)]] = value * self.radius * np.sqrt(4 * np.pi)
        return out

    def integral(self, arr):
        c00 = np.asarray(arr)[..., self._lm_index[0][(0, 0)]]
        return c00 * self.radius * np.sqrt(4 * np.pi)

    def random_coeffs(self, rng, bandwidth, lead_shape=(), weight=0):
        if bandwidth > self.L:
            raise BandLimitInvalid("bandwidth exceeds the degree band limit")
        space = self.space(weight)
        out = np.zeros(lead_shape + (space.total,), dtype=complex)
        mask = np.array([l <= bandwidth for (l, m) in self._lm[weight]])
        k = int(mask.sum())
        vals = rng.standard_normal(lead_shape + (k,)) + 1j * rng.standard_normal(lead_shape + (k,))
        out[..., mask] = vals
        return out

    def synthesize(self, weight, arr):
        return np.asarray(arr) @ self._basis[weight].T

    def analyze(self, weight, values):
        return (values * self.quad_w) @ np.conj(self._basis[weight])

    def product(self, w1, arr1, w2, arr2):
        w = w1 + w2
        if abs(w) > self.max_weight:
            raise ValueError("product weight outside the supported range")
        vals = self.synthesize(w1, arr1) * self.synthesize(w2, arr2)
        coeffs = self.analyze(w, vals)
        total = float((np.abs(vals) ** 2 * self.quad_w).sum())
        kept = float(np.vdot(coeffs, coeffs).real)
        truncated = (total - kept) > TRUNCATION_RTOL * (total + 1e-300)
        return coeffs, truncated

    def bandwidth_of(self, arr, weight=0):
        nz = np.abs(np.asarray(arr)).reshape(-1, self.space(weight).total).any(0)
        degs = [l for i, (l, m) in enumerate(self._lm[weight]) if nz[i]]
        return max(degs) if degs else 0
