"""Discrete time-frequency representations of metaplectic type.

Every representation here is the composition of an exact lattice transform of
the outer product ``f (x) conj(g)`` (shears, flips, swaps) with a centered DFT
in the second variable:

* cross-Wigner and the full two-parameter tau family,
* the short-time Fourier transform (integer-lattice sliding product),
* matrix-Wigner distributions for arbitrary invertible 2x2 matrices,
* covariant representations, realized as a chirp filter of the Wigner
  distribution with the quadratic form read off the doubled projection.

Because shears and the DFT are unitary on the lattice, Moyal's identity holds
for these discretizations to machine precision; agreement with the continuum
formulas is governed by the signals' decay on the grid.
"""

from __future__ import annotations

import numpy as np

from . import spectral
from .errors import GridMismatchError, NotCovariantError
from .fields import PhaseSpaceField, pullback_gl2, pullback_sl2_field
from .grids import Signal, gaussian
from .metaplectic import apply_metaplectic, factorize
from .sympmat import SympMat, covariance_matrix

__all__ = [
    "TFRKind",
    "cross_wigner",
    "tau_wigner",
    "stft",
    "matrix_wigner",
    "covariant_wa",
    "husimi",
    "tfr_bilinear",
    "symplectic_covariance_check",
    "e_tau_matrix",
    "E_STANDARD",
]

E_STANDARD = np.array([[0.0, 1.0], [-1.0, 1.0]])


def e_tau_matrix(tau):
    """``E_tau = (1, tau; 1, tau - 1)``; ``tau = 1/2`` is the Wigner case."""
    return np.array([[1.0, tau], [1.0, tau - 1.0]])


class TFRKind:
    """Tagged family of bilinear representations ``(f, g) -> A_hat(f (x) conj g)``."""

    def __init__(self, tag, tau=None, window=None, M=None, A=None):
        self.tag = tag
        self.tau = tau
        self.window = window
        self.M = M
        self.A = A

    @classmethod
    def wigner(cls):
        return cls("wigner")

    @classmethod
    def tau_kind(cls, tau):
        return cls("tau", tau=float(tau))

    @classmethod
    def stft(cls, window=None):
        """STFT kind; ``window`` is the default second slot for unary use."""
        return cls("stft", window=window)

    @classmethod
    def matrix(cls, M):
        M = np.array(M, dtype=float)
        if abs(np.linalg.det(M)) < 1e-12:
            raise ValueError("matrix kind needs det M != 0")
        return cls("matrix", M=M)

    @classmethod
    def covariant(cls, A):
        if covariance_matrix(A if isinstance(A, SympMat) else SympMat(A, check=False)) is None:
            raise NotCovariantError("matrix does not have the covariant block form")
        return cls("covariant", A=A if isinstance(A, SympMat) else SympMat(A, check=False))

    def __repr__(self):
        extra = {"tau": self.tau, "matrix": "M", "stft": "", "wigner": "", "covariant": "A"}[self.tag]
        return f"TFRKind({self.tag}{', ' + str(extra) if extra else ''})"


def _outer(f, g):
    f.check_same_grid(g)
    return np.outer(f.samples, np.conj(g.samples))


def _matrix_tfr(f, g, M):
    """``F_2 T_M (f (x) conj g)`` on the signal grid."""
    P = _outer(f, g)
    P = pullback_gl2(P, M, axes=(0, 1), spacings=(f.dx, f.dx), unitary_weight=True)
    W = spectral.centered_dft_axis(P, 1, f.dx)
    return PhaseSpaceField(W, f.dx)


def cross_wigner(f, g=None):
    """Cross-Wigner distribution ``W(f, g)`` on the N x N phase-space grid."""
    g = f if g is None else g
    return _matrix_tfr(f, g, e_tau_matrix(0.5))


def tau_wigner(f, g, tau):
    """Two-sided tau-Wigner family; ``tau = 1/2`` delegates to cross_wigner."""
    if tau == 0.5:
        return cross_wigner(f, g)
    return _matrix_tfr(f, g, e_tau_matrix(tau))


def stft(f, window):
    """Short-time Fourier transform ``V_g f`` with window ``g``.

    Integer-lattice sliding products plus one centered DFT; exact covariance
    under on-grid time-frequency shifts.
    """
    f.check_same_grid(window)
    if not np.any(window.samples):
        raise ValueError("window must be nonzero")
    N = f.N
    offs = np.arange(N) - N // 2
    idx = (np.arange(N)[None, :] - offs[:, None]) % N
    T = f.samples[None, :] * np.conj(window.samples[idx])
    V = spectral.centered_dft_axis(T, 1, f.dx)
    return PhaseSpaceField(V, f.dx)


def matrix_wigner(f, g, M):
    """Matrix-Wigner distribution for invertible ``M`` (general LDU route)."""
    M = np.array(M, dtype=float)
    if abs(np.linalg.det(M)) < 1e-12:
        raise ValueError("matrix-Wigner needs det M != 0")
    return _matrix_tfr(f, g, M)


def _chirp_on_dual(field, B, sign=-1.0):
    """Multiply the 2-D spectrum by ``exp(i pi sign <B Z, Z>)`` and invert."""
    B = np.asarray(B, dtype=float)
    spec = spectral.centered_dft_axis(field.values, 0, field.dx)
    spec = spectral.centered_dft_axis(spec, 1, field.dxi)
    u = field.xi[:, None]  # dual of the x axis has spacing dxi
    v = field.x[None, :]   # dual of the xi axis has spacing dx
    quad = B[0, 0] * u * u + 2.0 * B[0, 1] * u * v + B[1, 1] * v * v
    spec = spec * np.exp(1j * np.pi * sign * quad)
    out = spectral.centered_idft_axis(spec, 1, field.dxi)
    out = spectral.centered_idft_axis(out, 0, field.dx)
    return field.with_values(out)


def covariant_wa(f, g, A):
    """Covariant metaplectic representation via its chirp-filter normal form.

    Requires the projection ``A`` to pass the covariance template; the result
    is the Wigner distribution filtered by the chirp of ``-B_A`` on the dual
    grid.  ``A = A_(1/2)`` has ``B_A = 0`` and reduces to ``cross_wigner``.
    """
    A = A if isinstance(A, SympMat) else SympMat(A, check=False)
    B = covariance_matrix(A)
    if B is None:
        raise NotCovariantError("matrix does not have the covariant block form")
    B = np.array([[float(x) for x in row] for row in np.asarray(B)])
    W = cross_wigner(f, g)
    if not np.any(B):
        return W
    return _chirp_on_dual(W, B, sign=-1.0)


def husimi(f):
    """Gaussian-smoothed Wigner distribution (Husimi picture).

    Convolves ``W f`` with ``Phi(X) = 2^(1/2) exp(-2 pi |X|^2)`` through the
    analytic Fourier factor ``2^(-1/2) exp(-pi |Z|^2 / 2)``.
    """
    W = cross_wigner(f, f)
    spec = spectral.centered_dft_axis(W.values, 0, W.dx)
    spec = spectral.centered_dft_axis(spec, 1, W.dxi)
    u = W.xi[:, None]
    v = W.x[None, :]
    spec = spec * (2.0 ** -0.5 * np.exp(-np.pi * (u * u + v * v) / 2.0))
    out = spectral.centered_idft_axis(spec, 1, W.dxi)
    out = spectral.centered_idft_axis(out, 0, W.dx)
    return W.with_values(out)


def tfr_bilinear(f, g, kind):
    """Dispatch a :class:`TFRKind` as a bilinear map of ``(f, g)``."""
    if kind.tag == "wigner":
        return cross_wigner(f, g)
    if kind.tag == "tau":
        return tau_wigner(f, g, kind.tau)
    if kind.tag == "stft":
        return stft(f, g)
    if kind.tag == "matrix":
        return matrix_wigner(f, g, kind.M)
    if kind.tag == "covariant":
        return covariant_wa(f, g, kind.A)
    raise ValueError(f"unknown kind {kind.tag!r}")


def tfr_unary(f, kind):
    """``W_A f``: the bilinear form on the diagonal (STFT uses its window)."""
    if kind.tag == "stft":
        window = kind.window if kind.window is not None else gaussian(f.N, f.dx)
        return stft(f, window)
    return tfr_bilinear(f, f, kind)


def symplectic_covariance_check(f, g, S):
    """Relative L2 residual of the Wigner covariance under ``S_hat``.

    Compares ``W(S_hat f, S_hat g)`` with the pullback ``W(f, g) o S^{-1}``
    computed by band-limited lattice steps.
    """
    S = S if isinstance(S, SympMat) else SympMat(S, check=False)
    word = factorize(S)
    Sf = apply_metaplectic(word, f)
    Sg = apply_metaplectic(word, g) if g is not f else Sf
    W1 = cross_wigner(Sf, Sg)
    W0 = cross_wigner(f, g)
    pulled = pullback_sl2_field(W0, np.linalg.inv(S.as_float_array()))
    num = np.sqrt(np.sum(np.abs(W1.values - pulled.values) ** 2))
    den = np.sqrt(np.sum(np.abs(W1.values) ** 2))
    return float(num / den) if den > 0 else 0.0
