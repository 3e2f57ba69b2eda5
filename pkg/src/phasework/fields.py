"""Phase-space fields on centered 2-D grids and exact lattice transforms.

The workhorses here are circular FFT shears: for a field ``F(x, xi)`` the map
``F -> F(x + a xi, xi)`` is a diagonal phase in the mixed (u, xi) domain, hence
exactly unitary on the lattice and free of interpolation error for
band-limited content.  Axis flips and transposes are exact index maps on the
centered grid.  Together with 1-D band-limited axis scalings these assemble
pullbacks through arbitrary invertible 2x2 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import GridMismatchError

__all__ = [
    "PhaseSpaceField",
    "axis_coords",
    "shear_axis",
    "flip_axis",
    "pullback_steps",
    "apply_pullback_steps",
    "pullback_gl2",
    "pullback_sl2_field",
    "save_field_csv",
    "load_field_csv",
    "save_field_pgm",
]


@dataclass(frozen=True)
class PhaseSpaceField:
    """Complex values on the centered grid ``(x_m, xi_k)``, ``dxi = 1/(N dx)``."""

    values: np.ndarray
    dx: float

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("field must be square (N x N)")
        object.__setattr__(self, "values", arr)

    @property
    def N(self):
        return self.values.shape[0]

    @property
    def dxi(self):
        return 1.0 / (self.N * self.dx)

    @property
    def x(self):
        return (-self.N / 2.0 + np.arange(self.N)) * self.dx

    @property
    def xi(self):
        return (-self.N / 2.0 + np.arange(self.N)) * self.dxi

    @property
    def cell(self):
        return self.dx * self.dxi

    def norm2(self):
        """Squared L2 mass ``sum |F|^2 dx dxi``."""
        return float(np.sum(np.abs(self.values) ** 2) * self.cell)

    def inner(self, other):
        self.check_same_grid(other)
        return complex(np.vdot(other.values, self.values) * self.cell)

    def check_same_grid(self, other):
        if self.N != other.N or abs(self.dx - other.dx) > 1e-14:
            raise GridMismatchError("fields live on different grids")

    def with_values(self, values):
        return PhaseSpaceField(values, self.dx)


def axis_coords(shape, axis, d):
    N = shape[axis]
    return (-N / 2.0 + np.arange(N)) * d


def _broadcast(vec, ndim, axis):
    shape = [1] * ndim
    shape[axis] = vec.size
    return vec.reshape(shape)


def shear_axis(arr, axis_move, axis_coord, coeff, d_move, d_coord):
    """Circular pullback ``G(.., t_move + coeff * t_coord, ..) = F``.

    Implemented as FFT along ``axis_move`` and a unimodular phase
    ``exp(2 pi i u coeff t)``; exactly unitary.
    """
    if coeff == 0:
        return arr
    spec = spectral.centered_dft_axis(arr, axis_move, d_move)
    u = _broadcast(axis_coords(arr.shape, axis_move, 1.0 / (arr.shape[axis_move] * d_move)),
                   arr.ndim, axis_move)
    t = _broadcast(axis_coords(arr.shape, axis_coord, d_coord), arr.ndim, axis_coord)
    spec = spec * np.exp(2j * np.pi * coeff * u * t)
    return spectral.centered_idft_axis(spec, axis_move, d_move)


def flip_axis(arr, axis):
    """Exact circular reflection ``t -> -t`` on a centered grid."""
    return np.roll(np.flip(arr, axis=axis), 1, axis=axis)


def translate_axis(arr, axis, shift, d):
    """Circular band-limited translation ``G(t) = F(t + shift)``."""
    if shift == 0:
        return arr
    spec = spectral.centered_dft_axis(arr, axis, d)
    u = _broadcast(axis_coords(arr.shape, axis, 1.0 / (arr.shape[axis] * d)), arr.ndim, axis)
    spec = spec * np.exp(2j * np.pi * shift * u)
    return spectral.centered_idft_axis(spec, axis, d)


def scale_axis(arr, axis, s, d, pad=2):
    """Band-limited axis scaling ``G(t) = F(s t)`` (1-D resample per line)."""
    if s == 1.0:
        return arr
    if s == -1.0:
        return flip_axis(arr, axis)
    N = arr.shape[axis]
    coords = axis_coords(arr.shape, axis, d)
    moved = np.moveaxis(arr, axis, -1)
    flat = moved.reshape(-1, N)
    out = np.empty_like(flat)
    # one interpolation matrix serves every line
    M = pad * N
    padded = np.zeros((flat.shape[0], M), dtype=complex)
    lo = (M - N) // 2
    padded[:, lo:lo + N] = flat
    spec = spectral.centered_dft_axis(padded, 1, d)
    dnu = 1.0 / (M * d)
    nu = (-M / 2.0 + np.arange(M)) * dnu
    kernel = np.exp(2j * np.pi * np.outer(s * coords, nu)) * dnu
    out = spec @ kernel.T
    return np.moveaxis(out.reshape(moved.shape), -1, axis)


# -- pullbacks through 2x2 matrices -------------------------------------------


def pullback_steps(M, tol=1e-12):
    """Factor ``M`` into elementary pullback steps (applied first-to-last).

    Writes ``M = [P] L D U`` with a lower shear ``L``, diagonal ``D`` and an
    upper shear ``U`` (a leading axis swap ``P`` when ``M[0,0] = 0``), so that
    the pullback ``F -> F o M`` is the step sequence
    ``[swap?], sheary(c), scale/flip(x), scale/flip(y), shearx(b)``.
    Shears, flips and swaps are exact on the lattice; axis scalings appear
    only for non-unit diagonal entries.
    """
    M = np.array(M, dtype=float)
    if abs(np.linalg.det(M)) < tol:
        raise ValueError("pullback matrix must be invertible")
    steps = []
    if abs(M[0, 0]) < tol * max(1.0, abs(M).max()):
        steps.append(("swap",))
        M = M[::-1].copy()  # M = P (P M); the swap-pullback is applied first
    det = np.linalg.det(M)
    m11 = M[0, 0]
    c = M[1, 0] / m11
    b = M[0, 1] / m11
    s2 = det / m11
    if abs(c) > tol:
        steps.append(("sheary", float(c)))
    for s, name in ((m11, "x"), (s2, "y")):
        if abs(s - 1.0) < tol:
            continue
        if abs(s + 1.0) < tol:
            steps.append(("flip", name))
        else:
            steps.append((f"scale{name}", float(s)))
    if abs(b) > tol:
        steps.append(("shearx", float(b)))
    return steps


def apply_pullback_steps(arr, steps, axes, spacings, pad=2):
    """Apply pullback steps on an axis pair of an nd array.

    ``axes = (ax_x, ax_y)`` names the pair; ``spacings`` their grid steps.
    Returns the transformed array (the coordinate grids are unchanged).
    """
    ax, ay = axes
    dx, dy = spacings
    for step in steps:
        kind = step[0]
        if kind == "swap":
            if abs(dx - dy) > 1e-14:
                raise ValueError("axis swap needs equal spacings")
            arr = np.swapaxes(arr, ax, ay)
        elif kind == "flip":
            arr = flip_axis(arr, ax if step[1] == "x" else ay)
        elif kind == "shearx":
            arr = shear_axis(arr, ax, ay, step[1], dx, dy)
        elif kind == "sheary":
            arr = shear_axis(arr, ay, ax, step[1], dy, dx)
        elif kind == "scalex":
            arr = scale_axis(arr, ax, step[1], dx, pad=pad)
        elif kind == "scaley":
            arr = scale_axis(arr, ay, step[1], dy, pad=pad)
        else:
            raise ValueError(f"unknown step {step!r}")
    return arr


def pullback_gl2(arr, M, axes, spacings, pad=2, unitary_weight=True):
    """Pullback ``G(X) = |det M|^(1/2) F(M X)`` on an axis pair."""
    steps = pullback_steps(M)
    out = apply_pullback_steps(arr, steps, axes, spacings, pad=pad)
    if unitary_weight:
        out = out * np.sqrt(abs(np.linalg.det(np.array(M, dtype=float))))
    return out


def pullback_sl2_field(field, M, pad=2):
    """Pullback of a phase-space field through ``M`` (no amplitude weight).

    Zero-pads the field by ``pad`` on both axes before the circular steps so
    that wrap-around lands outside the original window, then crops back.
    """
    M = np.array(M, dtype=float)
    N = field.N
    big = np.zeros((pad * N, pad * N), dtype=complex)
    lo = (pad * N - N) // 2
    big[lo:lo + N, lo:lo + N] = field.values
    steps = pullback_steps(M)
    big = apply_pullback_steps(big, steps, axes=(0, 1), spacings=(field.dx, field.dxi), pad=2)
    return field.with_values(big[lo:lo + N, lo:lo + N])


# -- serialization ------------------------------------------------------------


def save_field_csv(path, field):
    """CSV rows ``m,k,x,xi,re,im``."""
    with open(path, "w") as fh:
        fh.write("m,k,x,xi,re,im\n")
        x, xi = field.x, field.xi
        for m in range(field.N):
            for k in range(field.N):
                v = field.values[m, k]
                fh.write("%d,%d,%.17g,%.17g,%.17g,%.17g\n" % (m, k, x[m], xi[k], v.real, v.imag))


def load_field_csv(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0].isalpha() or line.startswith("#"):
                continue
            rows.append(line.split(","))
    if not rows:
        raise ValueError("empty field file")
    N = int(round(np.sqrt(len(rows))))
    vals = np.zeros((N, N), dtype=complex)
    xs = np.zeros(N)
    for m_, k_, xv, xiv, re, im in rows:
        m, k = int(m_), int(k_)
        vals[m, k] = float(re) + 1j * float(im)
        xs[m] = float(xv)
    dx = float(xs[1] - xs[0])
    return PhaseSpaceField(vals, dx)


def save_field_pgm(path, field):
    """Magnitude heatmap as binary 16-bit PGM (P5), max-normalized."""
    mag = np.abs(field.values)
    peak = mag.max()
    if peak > 0:
        mag = mag / peak
    img = np.round(mag * 65535).astype(">u2")
    # rows are xi (top = largest xi) so the picture reads like a spectrogram
    img = img.T[::-1]
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n65535\n" % (img.shape[1], img.shape[0]))
        fh.write(img.tobytes())
