"""Sampled signals on centered uniform grids, plus the fixed test corpus.

A :class:`Signal` holds ``N`` complex samples at ``x_k = x0 + k dx`` with
``x0 = -N dx / 2``.  The *standard* grid uses ``dx = 1/sqrt(N)`` so that the
grid is self-dual: the centered discrete Fourier transform maps a signal onto
the same grid, which is what lets metaplectic factor words compose without
regridding.  (``N = 256`` gives the familiar ``dx = 1/16``, ``x`` in
``[-8, 8)``.)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError

__all__ = [
    "Signal",
    "standard_dx",
    "make_signal",
    "gaussian",
    "hermite",
    "chirp_gaussian",
    "rect",
    "two_gaussians",
    "corpus_signal",
    "CORPUS_NAMES",
    "random_bandlimited",
    "save_signal_csv",
    "load_signal_csv",
    "save_signal_raw",
    "load_signal_raw",
]


def standard_dx(N):
    """Self-dual grid spacing ``1/sqrt(N)``."""
    return 1.0 / np.sqrt(N)


@dataclass(frozen=True)
class Signal:
    """Complex samples on a centered uniform grid."""

    samples: np.ndarray
    dx: float

    def __post_init__(self):
        arr = np.ascontiguousarray(self.samples, dtype=complex)
        if arr.ndim != 1:
            raise ValueError("samples must be a 1-D vector")
        if arr.size < 8 or arr.size % 4:
            raise ValueError("N must be >= 8 and divisible by 4")
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        object.__setattr__(self, "samples", arr)

    @property
    def N(self):
        return self.samples.size

    @property
    def x0(self):
        return -self.N * self.dx / 2.0

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(self.N)

    @property
    def dxi(self):
        return 1.0 / (self.N * self.dx)

    @property
    def xi(self):
        return -self.N * self.dxi / 2.0 + self.dxi * np.arange(self.N)

    def is_self_dual(self, tol=1e-12):
        return abs(self.N * self.dx * self.dx - 1.0) < tol

    def norm(self):
        """Continuum-normalized L2 norm ``(dx * sum |f|^2)^(1/2)``."""
        return float(np.sqrt(self.dx * np.sum(np.abs(self.samples) ** 2)))

    def inner(self, other):
        self.check_same_grid(other)
        return complex(self.dx * np.vdot(other.samples, self.samples))

    def check_same_grid(self, other):
        if self.N != other.N or abs(self.dx - other.dx) > 1e-14:
            raise GridMismatchError("signals live on different grids")

    def with_samples(self, samples):
        return Signal(samples, self.dx)


def make_signal(values, N=None, dx=None):
    """Signal from raw values, defaulting to the standard self-dual grid."""
    arr = np.asarray(values, dtype=complex)
    if dx is None:
        dx = standard_dx(arr.size if N is None else N)
    return Signal(arr, dx)


def _std_x(N, dx):
    dx = standard_dx(N) if dx is None else dx
    return (-N * dx / 2.0 + dx * np.arange(N)), dx


# -- fixed corpus -----------------------------------------------------------


def gaussian(N=256, dx=None):
    """``exp(-pi x^2)``, the Fourier-invariant unit Gaussian."""
    x, dx = _std_x(N, dx)
    return Signal(np.exp(-np.pi * x ** 2).astype(complex), dx)


def hermite(n, N=256, dx=None):
    """L2-normalized Hermite function ``h_n`` (2*pi Fourier convention)."""
    x, dx = _std_x(N, dx)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    vals = np.polynomial.hermite.hermval(np.sqrt(2 * np.pi) * x, coeffs) * np.exp(-np.pi * x ** 2)
    vals = vals / np.sqrt(dx * np.sum(np.abs(vals) ** 2))
    return Signal(vals.astype(complex), dx)


def chirp_gaussian(N=256, dx=None, q=1.0):
    """Linear chirp ``exp(i pi q x^2)`` times the unit Gaussian."""
    x, dx = _std_x(N, dx)
    return Signal(np.exp(1j * np.pi * q * x ** 2) * np.exp(-np.pi * x ** 2), dx)


def rect(N=256, dx=None, half_width=1.0):
    """Indicator of ``[-w, w]`` with midpoint values at the jumps."""
    x, dx = _std_x(N, dx)
    vals = np.where(np.abs(x) < half_width, 1.0, 0.0)
    vals[np.isclose(np.abs(x), half_width)] = 0.5
    return Signal(vals.astype(complex), dx)


def two_gaussians(N=256, dx=None, x0=2.0):
    """Gaussian bumps at ``+-x0``."""
    x, dx = _std_x(N, dx)
    vals = np.exp(-np.pi * (x - x0) ** 2) + np.exp(-np.pi * (x + x0) ** 2)
    return Signal(vals.astype(complex), dx)


CORPUS_NAMES = (
    "gaussian", "hermite0", "hermite1", "hermite2", "hermite3",
    "chirp", "rect", "two-gaussians",
)


def corpus_signal(name, N=256, dx=None):
    """Deterministically regenerate a named corpus signal."""
    if name == "gaussian":
        return gaussian(N, dx)
    if name.startswith("hermite"):
        return hermite(int(name[len("hermite"):]), N, dx)
    if name == "chirp":
        return chirp_gaussian(N, dx)
    if name == "rect":
        return rect(N, dx)
    if name == "two-gaussians":
        return two_gaussians(N, dx)
    raise ValueError(f"unknown corpus signal {name!r}")


def smooth_corpus(N=256, dx=None):
    """The rapidly-decaying corpus members (no sharp truncation)."""
    return [corpus_signal(n, N, dx) for n in
            ("gaussian", "hermite1", "hermite2", "hermite3", "chirp", "two-gaussians")]


def random_bandlimited(rng, N=256, dx=None, band_frac=0.25):
    """Random smooth decaying signal, localized in both domains.

    The spectrum is drawn inside ``band_frac`` of Nyquist and the result is
    enveloped by a Gaussian covering the central third of the grid, so random
    test signals behave like the smooth corpus.  ``rng`` is a
    ``numpy.random.Generator``; output has unit L2 norm.
    """
    dx = standard_dx(N) if dx is None else dx
    spec = np.zeros(N, dtype=complex)
    half = max(2, int(N * band_frac / 2))
    idx = np.arange(-half, half + 1)
    taper = np.exp(-(idx / (0.6 * half)) ** 2)
    spec[(idx + N // 2)] = (rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)) * taper
    vals = np.fft.ifft(np.fft.ifftshift(spec))
    x = -N * dx / 2.0 + dx * np.arange(N)
    vals = vals * np.exp(-np.pi * (x / (N * dx / 6.0)) ** 2)
    vals = vals / np.sqrt(dx * np.sum(np.abs(vals) ** 2))
    return Signal(vals, dx)


# -- serialization -----------------------------------------------------------


def save_signal_csv(path, sig):
    """CSV rows ``k,x,re,im`` with 17 significant digits."""
    with open(path, "w") as fh:
        fh.write("k,x,re,im\n")
        for k, (xv, v) in enumerate(zip(sig.x, sig.samples)):
            fh.write("%d,%.17g,%.17g,%.17g\n" % (k, xv, v.real, v.imag))


def load_signal_csv(path):
    ks, xs, res, ims = [], [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0].isalpha() or line.startswith("#"):
                continue
            k, xv, re, im = line.split(",")
            ks.append(int(k))
            xs.append(float(xv))
            res.append(float(re))
            ims.append(float(im))
    order = np.argsort(ks)
    xs = np.asarray(xs)[order]
    vals = (np.asarray(res) + 1j * np.asarray(ims))[order]
    dx = float(xs[1] - xs[0])
    sig = Signal(vals, dx)
    if abs(sig.x0 - xs[0]) > 1e-9 * max(1.0, abs(xs[0])):
        raise ValueError("signal grid is not centered at the origin")
    return sig


def save_signal_raw(path, sig):
    """Little-endian: u64 sample count, then interleaved (re, im) f64."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", sig.N))
        inter = np.empty(2 * sig.N)
        inter[0::2] = sig.samples.real
        inter[1::2] = sig.samples.imag
        fh.write(inter.astype("<f8").tobytes())


def load_signal_raw(path, dx=None):
    """Read the raw format; the grid defaults to the standard one for N."""
    with open(path, "rb") as fh:
        (N,) = struct.unpack("<Q", fh.read(8))
        inter = np.frombuffer(fh.read(16 * N), dtype="<f8")
    vals = inter[0::2] + 1j * inter[1::2]
    return Signal(vals, standard_dx(N) if dx is None else dx)
