"""Centered discrete Fourier transforms and band-limited resampling.

All transforms use the convention ``f_hat(xi) = integral f(x) e^{-2 pi i x xi} dx``
discretized on centered grids ``x_k = (k - N/2) d`` with dual spacing
``1/(N d)``.  For ``N`` divisible by 4 the centered transform is exactly
``fftshift . fft . ifftshift`` scaled by ``d``; the general even-N constant is
kept explicit so ``N = 2 mod 4`` would still be correct.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "centered_dft",
    "centered_idft",
    "centered_dft_axis",
    "centered_idft_axis",
    "upsample2",
    "interpolate_bandlimited",
    "energy_radius",
    "spectral_mass_beyond",
]


def _constant(N):
    # exp(-i pi N / 2): +1 for N % 4 == 0, -1 for N % 4 == 2
    return 1.0 if N % 4 == 0 else -1.0


def centered_dft_axis(arr, axis, d):
    """Centered DFT with measure ``d`` along one axis of an nd array."""
    N = arr.shape[axis]
    out = np.fft.ifftshift(arr, axes=axis)
    out = np.fft.fft(out, axis=axis)
    out = np.fft.fftshift(out, axes=axis)
    return out * (d * _constant(N))


def centered_idft_axis(arr, axis, d):
    """Inverse of :func:`centered_dft_axis` (same spatial measure ``d``)."""
    N = arr.shape[axis]
    out = np.fft.ifftshift(arr, axes=axis)
    out = np.fft.ifft(out, axis=axis)
    out = np.fft.fftshift(out, axes=axis)
    return out * (_constant(N) / d)


def centered_dft(values, d):
    return centered_dft_axis(np.asarray(values, dtype=complex), 0, d)


def centered_idft(values, d):
    return centered_idft_axis(np.asarray(values, dtype=complex), 0, d)


def upsample2(values, d):
    """Band-limited x2 upsample on the same span (spacing ``d/2``).

    The unpaired Nyquist coefficient is split evenly between ``+-N/2`` so real
    signals stay real and the map is an isometry on to its range.
    """
    values = np.asarray(values, dtype=complex)
    N = values.size
    spec = centered_dft(values, d)
    spec2 = np.zeros(2 * N, dtype=complex)
    spec2[N // 2:N // 2 + N] = spec
    spec2[N // 2] *= 0.5
    spec2[N // 2 + N] = spec2[N // 2]
    return centered_idft(spec2, d / 2.0)


def interpolate_bandlimited(values, d, points, pad=2):
    """Evaluate the zero-padded trigonometric interpolant at arbitrary points.

    The signal is zero-extended to ``pad * N`` samples (period ``pad * N * d``)
    before building the interpolant, which pushes circular wrap-around out to
    ``pad`` times the original span.
    """
    values = np.asarray(values, dtype=complex)
    N = values.size
    M = pad * N
    padded = np.zeros(M, dtype=complex)
    lo = (M - N) // 2
    padded[lo:lo + N] = values
    spec = centered_dft(padded, d)
    dnu = 1.0 / (M * d)
    nu = (-M / 2.0 + np.arange(M)) * dnu
    points = np.asarray(points, dtype=float)
    # f(x) = dnu * sum_j spec[j] e^{2 pi i nu_j x}
    kernel = np.exp(2j * np.pi * np.outer(points, nu))
    return dnu * (kernel @ spec)


def energy_radius(values, coords, fraction=0.99):
    """Smallest radius containing ``fraction`` of the discrete energy."""
    p = np.abs(np.asarray(values)) ** 2
    total = p.sum()
    if total == 0:
        return 0.0
    r = np.abs(np.asarray(coords))
    order = np.argsort(r)
    mass = np.cumsum(p[order])
    idx = int(np.searchsorted(mass, fraction * total))
    idx = min(idx, r.size - 1)
    return float(r[order][idx])


def spectral_mass_beyond(values, d, cutoff):
    """Fraction of spectral energy at frequencies ``|nu| > cutoff``."""
    spec = centered_dft(values, d)
    N = spec.size
    nu = (-N / 2.0 + np.arange(N)) / (N * d)
    p = np.abs(spec) ** 2
    total = p.sum()
    if total == 0:
        return 0.0
    return float(p[np.abs(nu) > cutoff].sum() / total)
