"""Weyl quantization of bounded symbols and quadratic-phase Fourier integral
operators, plus the doubled-variable lifted symbols.

The Weyl operator of a symbol ``a(x, xi)`` is assembled as an explicit
``N x N`` kernel ``k_a(x, y) = int a((x+y)/2, xi) e^{2 pi i (x-y) xi} d xi``;
midpoints land on the half-step grid, so the symbol is evaluated there either
analytically (when the field carries its defining function) or by
interpolation matched to the smoothness tag.  The same midpoint/lag
construction with a coarse frequency quadrature powers Weyl operators acting
on phase-space fields, which is how the lifted-symbol identities are checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import AliasingRiskError, GridMismatchError
from .grids import chirp_gaussian, gaussian, hermite
from .metaplectic import apply_inverse, apply_metaplectic, factorize
from .sympmat import SympMat

__all__ = [
    "SymbolField",
    "SymbolField4D",
    "weyl_matrix",
    "weyl_apply",
    "operator_norm_estimate",
    "weyl_metaplectic_conjugation_check",
    "lift_symbols",
    "weyl_apply_field",
    "QuadraticFIOSpec",
    "fio_apply",
]


@dataclass(frozen=True)
class SymbolField:
    """Phase-space symbol samples with an optional defining function.

    ``values[m, k] = a(x_m, xi_k)`` on the signal grid; ``func(x, xi)``, when
    present, provides exact off-grid evaluation.  ``smoothness_tag`` is a
    caller assertion (``s000``, ``quadratic`` or ``other``); for ``s000``
    symbols :meth:`gradient_bounded` offers a documented heuristic check.
    """

    values: np.ndarray
    dx: float
    smoothness_tag: str = "s000"
    func: object = None

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("symbol grid must be square")
        if not np.all(np.isfinite(arr)):
            raise ValueError("symbol values must be finite")
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

    @classmethod
    def from_function(cls, func, N, dx=None, smoothness_tag="s000"):
        dx = 1.0 / np.sqrt(N) if dx is None else dx
        x = (-N / 2.0 + np.arange(N)) * dx
        xi = (-N / 2.0 + np.arange(N)) / (N * dx)
        vals = np.asarray(func(x[:, None], xi[None, :]), dtype=complex)
        vals = np.broadcast_to(vals, (N, N)).copy()
        return cls(vals, dx, smoothness_tag=smoothness_tag, func=func)

    @classmethod
    def constant(cls, value, N, dx=None):
        return cls.from_function(
            lambda x, xi: np.full(np.broadcast(x, xi).shape, complex(value)),
            N, dx, smoothness_tag="s000")

    def gradient_bounded(self, factor=10.0):
        """Heuristic: discrete gradient below ``factor * max|a| / cell``."""
        peak = float(np.max(np.abs(self.values)))
        if peak == 0:
            return True
        gx = np.max(np.abs(np.diff(self.values, axis=0))) / self.dx
        gxi = np.max(np.abs(np.diff(self.values, axis=1))) / self.dxi
        bound = factor * peak / min(self.dx, self.dxi)
        return bool(max(gx, gxi) <= bound)


def _midpoint_values(symbol):
    """Symbol on the x half-step grid: rows ``s = m + j`` at ``(x_m + x_j)/2``."""
    N = symbol.N
    if symbol.func is not None:
        s = np.arange(2 * N - 1)
        xf = (s / 2.0 - N / 2.0) * symbol.dx  # (x_m + x_j)/2 at s = m + j
        vals = np.asarray(symbol.func(xf[:, None], symbol.xi[None, :]), dtype=complex)
        return np.broadcast_to(vals, (2 * N - 1, N)).copy()
    if symbol.smoothness_tag == "quadratic":
        # 4-point Lagrange midpoints: exact through cubic polynomials
        v = symbol.values
        out = np.empty((2 * N - 1, N), dtype=complex)
        out[0::2] = v
        vm1 = np.vstack([v[:1], v[:-2]])
        v0 = v[:-1]
        vp1 = v[1:]
        vp2 = np.vstack([v[2:], v[-1:]])
        out[1::2] = (-vm1 + 9 * v0 + 9 * vp1 - vp2) / 16.0
        return out
    fine = np.empty((2 * N, N), dtype=complex)
    for k in range(N):
        fine[:, k] = spectral.upsample2(symbol.values[:, k], symbol.dx)
    return fine[:-1]


def _weyl_lag_table(a_mid, dxi):
    """``tab[s, r] = dxi sum_k a_mid[s, k] (-1)^r e^{2 pi i r k / N}``."""
    N = a_mid.shape[1]
    tab = np.fft.ifft(a_mid, axis=1) * (N * dxi)
    return tab * ((-1.0) ** np.arange(N))[None, :]


def weyl_matrix(symbol):
    """Dense kernel matrix ``K[m, j]`` of the Weyl operator (acts with ``dx``).

    Midpoint rule on the half-step grid, lag transform by inverse DFT; a
    constant symbol quantizes exactly to that constant times the identity.
    """
    N = symbol.N
    tab = _weyl_lag_table(_midpoint_values(symbol), symbol.dxi)
    m = np.arange(N)
    s_idx = m[:, None] + m[None, :]
    r_idx = (m[:, None] - m[None, :]) % N
    return tab[s_idx, r_idx]


def weyl_apply(symbol, f):
    """Apply the Weyl operator of ``symbol`` to a signal on the same grid."""
    if symbol.N != f.N or abs(symbol.dx - f.dx) > 1e-14:
        raise GridMismatchError("symbol and signal grids differ")
    return f.with_samples(weyl_matrix(symbol) @ f.samples * f.dx)


def operator_norm_estimate(symbol, iterations=60, seed=0):
    """L2 operator norm of the quantized symbol by power iteration."""
    K = weyl_matrix(symbol) * symbol.dx
    rng = np.random.default_rng(seed)
    v = rng.normal(size=symbol.N) + 1j * rng.normal(size=symbol.N)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iterations):
        w = K.conj().T @ (K @ v)
        lam = float(np.linalg.norm(w))
        v = w / lam
    return float(np.sqrt(lam))


def weyl_metaplectic_conjugation_check(symbol, S, signals=None):
    """Max relative residual of ``S_hat^{-1} Op(a) S_hat = Op(a o S)``.

    ``a o S`` is sampled analytically when the symbol carries its function,
    otherwise by band-limited pullback of the sample grid.
    """
    S = S if isinstance(S, SympMat) else SympMat(S, check=False)
    Sf = S.as_float_array()
    if symbol.func is not None:
        base = symbol.func
        comp = SymbolField.from_function(
            lambda x, xi: base(Sf[0, 0] * x + Sf[0, 1] * xi,
                               Sf[1, 0] * x + Sf[1, 1] * xi),
            symbol.N, symbol.dx, smoothness_tag=symbol.smoothness_tag)
    else:
        from .fields import pullback_gl2
        vals = pullback_gl2(symbol.values, Sf, axes=(0, 1),
                            spacings=(symbol.dx, symbol.dxi), unitary_weight=False)
        comp = SymbolField(vals, symbol.dx, smoothness_tag=symbol.smoothness_tag)
    if signals is None:
        N = symbol.N
        signals = [gaussian(N), hermite(2, N), chirp_gaussian(N)]
    word = factorize(S)
    worst = 0.0
    for f in signals:
        lhs = apply_inverse(word, weyl_apply(symbol, apply_metaplectic(word, f)))
        rhs = weyl_apply(comp, f)
        num = np.sqrt(np.sum(np.abs(lhs.samples - rhs.samples) ** 2) * f.dx)
        den = max(np.sqrt(np.sum(np.abs(rhs.samples) ** 2) * f.dx), 1e-300)
        worst = max(worst, float(num / den))
    return worst


# -- lifted symbols on doubled phase space ------------------------------------


@dataclass(frozen=True)
class SymbolField4D:
    """Bounded symbol on doubled phase space ``(z, w)`` with ``z, w`` in R^2.

    ``values`` has shape ``(Nc, Nc, Nc, Nc)`` over the coarse product grid
    ``z1 x z2 x w1 x w2`` (z axes subsample the field grid, w axes its dual);
    ``func`` evaluates off-grid.
    """

    values: np.ndarray
    z_spacings: tuple
    w_spacings: tuple
    func: object = None

    @property
    def Nc(self):
        return self.values.shape[0]

    def evaluate(self, z1, z2, w1, w2):
        if self.func is None:
            raise ValueError("sampled-only 4-D symbols cannot be evaluated off-grid")
        return self.func(z1, z2, w1, w2)


def _coarse_axes(N_field, dx, Nc):
    """Coarse 4-D axes: z subsamples the field grid, w its dual grid."""
    if N_field % Nc:
        raise ValueError("coarse axis count must divide the field size")
    stride = N_field // Nc
    dxi = 1.0 / (N_field * dx)
    z_spacings = (dx * stride, dxi * stride)
    w_spacings = (dxi * stride, dx * stride)
    return z_spacings, w_spacings


def lift_symbols(symbol, A, Nc=32):
    """Lifted symbols ``(b, b_tilde, c)`` of a 1-D symbol through ``A``.

    With ``sigma(r, y, rho, eta) = a(r, rho)`` and
    ``sigma_tilde(r, y, rho, eta) = conj(a)(y, -eta)``, returns
    ``b = sigma o A^{-1}``, ``b_tilde = sigma_tilde o A^{-1}`` and the product
    ``c = b b_tilde``, sampled on the coarse 4-D grid and carrying exact
    evaluators; ``b, b_tilde, c`` inherit boundedness from ``a``.
    """
    if symbol.func is None:
        raise ValueError("lifted symbols need a function-backed 1-D symbol")
    A = A if isinstance(A, SympMat) else SympMat(A, check=False)
    if A.n != 2:
        raise ValueError("lifting needs A in Sp(2, R) (4 x 4)")
    Ainv = np.linalg.inv(A.as_float_array())
    a = symbol.func

    def row(i, z1, z2, w1, w2):
        return Ainv[i, 0] * z1 + Ainv[i, 1] * z2 + Ainv[i, 2] * w1 + Ainv[i, 3] * w2

    def b_func(z1, z2, w1, w2):
        return a(row(0, z1, z2, w1, w2), row(2, z1, z2, w1, w2))

    def bt_func(z1, z2, w1, w2):
        return np.conj(a(row(1, z1, z2, w1, w2), -row(3, z1, z2, w1, w2)))

    def c_func(z1, z2, w1, w2):
        return b_func(z1, z2, w1, w2) * bt_func(z1, z2, w1, w2)

    z_sp, w_sp = _coarse_axes(symbol.N, symbol.dx, Nc)
    axes = [(-Nc / 2.0 + np.arange(Nc)) * d for d in (*z_sp, *w_sp)]
    G = np.meshgrid(*axes, indexing="ij")
    out = []
    for fn in (b_func, bt_func, c_func):
        vals = np.asarray(fn(*G), dtype=complex)
        out.append(SymbolField4D(vals, z_sp, w_sp, func=fn))
    return tuple(out)


def weyl_apply_field(c4, field, q_box=2):
    """Apply the Weyl operator of a 4-D symbol to a phase-space field.

    ``(Op(c) F)(X) = sum_Y sum_Z c((X+Y)/2, Z) e^{2 pi i (X-Y).Z} F(Y) dY dZ``
    where the frequency quadrature keeps the coarse grid's native step (so the
    kernel lag period stays at ``Nc`` lattice steps) but integrates over
    ``q_box`` dual cells: lifted symbols carry frequency support shifted by
    the field coordinate, and the wider window captures it at the cost of
    extra function evaluations only.
    """
    if c4.func is None:
        raise ValueError("field-level quantization needs a function-backed symbol")
    N = field.N
    dx, dxi = field.dx, field.dxi
    dw1, dw2 = c4.w_spacings
    M1 = int(round(1.0 / (dw1 * dx)))
    M2 = int(round(1.0 / (dw2 * dxi)))
    if abs(M1 * dw1 * dx - 1.0) > 1e-9 or abs(M2 * dw2 * dxi - 1.0) > 1e-9:
        raise GridMismatchError("4-D symbol grid incommensurate with the field grid")
    L1, L2 = q_box * M1, q_box * M2
    w1 = (-L1 / 2.0 + np.arange(L1)) * dw1
    w2 = (-L2 / 2.0 + np.arange(L2)) * dw2
    W1, W2 = np.meshgrid(w1, w2, indexing="ij")
    n_mid = 2 * N - 1
    mid_x = (np.arange(n_mid) / 2.0 - N / 2.0) * dx
    mid_xi = (np.arange(n_mid) / 2.0 - N / 2.0) * dxi
    # lag table, M-periodic in the lag:
    #   tab[s1, s2, r1 % M1, r2 % M2] = dw1 dw2 sgn1(r1) sgn2(r2)
    #       * sum_{p, q} c(mid, w_p, w_q) e^{2 pi i (r1 p / M1 + r2 q / M2)}
    sgn1 = np.exp(-1j * np.pi * np.arange(M1) * (L1 / M1))
    sgn2 = np.exp(-1j * np.pi * np.arange(M2) * (L2 / M2))
    tab = np.empty((n_mid, n_mid, M1, M2), dtype=complex)
    block = max(1, int(4e6 // (L1 * L2)))
    pairs = [(i, j) for i in range(n_mid) for j in range(n_mid)]
    for start in range(0, len(pairs), block):
        chunk = pairs[start:start + block]
        z1 = np.array([mid_x[i] for i, _ in chunk])[:, None, None]
        z2 = np.array([mid_xi[j] for _, j in chunk])[:, None, None]
        cz = np.asarray(c4.func(z1, z2, W1[None], W2[None]), dtype=complex)
        # fold the window onto one lag period per axis
        cz = cz.reshape(len(chunk), L1 // M1, M1, L2).sum(axis=1)
        cz = cz.reshape(len(chunk), M1, L2 // M2, M2).sum(axis=2)
        loc = np.fft.ifft2(cz, axes=(1, 2)) * (M1 * M2 * dw1 * dw2)
        loc *= sgn1[None, :, None] * sgn2[None, None, :]
        tab[[i for i, _ in chunk], [j for _, j in chunk]] = loc
    # blocked application
    out = np.empty((N, N), dtype=complex)
    j_idx = np.arange(N)
    r1_mod = (np.arange(N)[:, None] - j_idx[None, :]) % M1
    r2_mod = (np.arange(N)[:, None] - j_idx[None, :]) % M2
    s_sum = np.arange(N)[:, None] + j_idx[None, :]
    F = field.values
    for m in range(N):
        T = tab[s_sum[m][None, :, None], s_sum[:, None, :],
                r1_mod[m][None, :, None], r2_mod[:, None, :]]
        out[m] = np.einsum("kjl,jl->k", T, F)
    return field.with_values(out * field.cell)


# -- quadratic-phase Fourier integral operators --------------------------------


@dataclass(frozen=True)
class QuadraticFIOSpec:
    """Quadratic FIO data: symplectic ``S`` with invertible upper-left block
    and a bounded amplitude."""

    S: object
    amplitude: SymbolField

    def __post_init__(self):
        S = self.S if isinstance(self.S, SympMat) else SympMat(self.S, check=False)
        object.__setattr__(self, "S", S)
        if S.n != 1:
            raise ValueError("numeric FIOs are n = 1 only")
        if abs(S.as_float_array()[0, 0]) < 1e-10:
            raise ValueError("FIO needs an invertible upper-left block")

    def phase_coefficients(self):
        """(CA^-1, A^-1, A^-1 B) for ``Phi = CA^-1 x^2/2 + A^-1 x xi - A^-1 B xi^2/2``."""
        m = self.S.as_float_array()
        a, b, c = m[0, 0], m[0, 1], m[1, 0]
        return c / a, 1.0 / a, b / a


def fio_apply(spec, f):
    """Apply a quadratic FIO: ``int e^{2 pi i Phi(x, xi)} a(x, xi) f_hat(xi) d xi``.

    Direct quadrature over the frequency grid after one FFT; guards reject
    chirp rates that would alias on the occupied part of the grid.
    """
    amp = spec.amplitude
    if amp.N != f.N or abs(amp.dx - f.dx) > 1e-14:
        raise GridMismatchError("amplitude and signal grids differ")
    ca, ainv, ainvb = spec.phase_coefficients()
    fhat = spectral.centered_dft(f.samples, f.dx)
    x = f.x[:, None]
    xi = f.xi[None, :]
    # aliasing guards on both quadratic phase factors
    nyq_x = 1.0 / (2.0 * f.dx)
    p = np.abs(f.samples) ** 2
    tot = max(float(p.sum()), 1e-300)
    if ca != 0:
        frac = float(p[np.abs(f.x) > nyq_x / abs(ca)].sum() / tot)
        if frac > 2e-2:
            raise AliasingRiskError("output chirp rate C A^-1 exceeds Nyquist on the grid")
    ph = np.abs(fhat) ** 2
    ptot = max(float(ph.sum()), 1e-300)
    if ainvb != 0:
        nyq_xi = 1.0 / (2.0 * f.dxi)
        frac = float(ph[np.abs(f.xi[0] + f.dxi * np.arange(f.N)) > nyq_xi / abs(ainvb)].sum() / ptot)
        if frac > 2e-2:
            raise AliasingRiskError("frequency chirp rate A^-1 B exceeds Nyquist on the grid")
    phase = np.exp(2j * np.pi * (0.5 * ca * x * x + ainv * x * xi - 0.5 * ainvb * xi * xi))
    out = np.sum(phase * amp.values * fhat[None, :], axis=1) * f.dxi
    return f.with_samples(out)
