"""Discrete unitary realizations of 2x2 symplectic matrices on sampled signals.

A target matrix is factored into a short word in three elementary unitaries:

* ``Fourier`` - the centered DFT (projection ``J``),
* ``Dilation(e)`` - ``f(x) -> sqrt|e| f(e x)`` by band-limited resampling
  (projection ``D_e = diag(1/e, e)``),
* ``Chirp(q)`` - pointwise ``exp(i pi q x^2)`` (projection ``V_q``).

Words act right-to-left.  The global phase of a factorization is pinned on a
reference grid so that the unit Gaussian has a nonnegative real inner product
with its image; identities involving two different words are only ever checked
up to a unit phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import AliasingRiskError, NotSymplecticError
from .grids import Signal, gaussian
from .sympmat import SympMat, hamilton_flow

__all__ = [
    "Fourier",
    "Dilation",
    "Chirp",
    "MetaplecticFactorization",
    "factorize",
    "apply_metaplectic",
    "apply_inverse",
    "propagator_quadratic",
]

# guard thresholds: reject when more than this energy fraction would alias
CHIRP_ALIAS_FRACTION = 2e-2
DILATION_TAIL_FRACTION = 1e-4


@dataclass(frozen=True)
class Fourier:
    def projection(self):
        return np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Dilation:
    e: float

    def projection(self):
        return np.array([[1.0 / self.e, 0.0], [0.0, self.e]])


@dataclass(frozen=True)
class Chirp:
    q: float

    def projection(self):
        return np.array([[1.0, 0.0], [self.q, 1.0]])


@dataclass(frozen=True)
class MetaplecticFactorization:
    """Ordered factor word with a scalar phase; factors apply right-to-left."""

    factors: tuple
    phase: complex = 1.0 + 0.0j

    def projection(self):
        out = np.eye(2)
        for f in self.factors:
            out = out @ f.projection()
        return out

    def __len__(self):
        return len(self.factors)


def _simplify(factors):
    out = []
    for f in factors:
        if isinstance(f, Chirp) and f.q == 0:
            continue
        if isinstance(f, Dilation) and f.e == 1:
            continue
        out.append(f)
    return tuple(out)


_REFERENCE_GAUSSIAN = None


def _reference_gaussian():
    global _REFERENCE_GAUSSIAN
    if _REFERENCE_GAUSSIAN is None:
        _REFERENCE_GAUSSIAN = gaussian(N=256)
    return _REFERENCE_GAUSSIAN


def _base_words(a, b, c, d):
    words = []
    if abs(b) < 1e-14:
        # lower-triangular, exact two-factor word
        words.append((Chirp(c / a), Dilation(1.0 / a)))
        return words
    # the generic word V_{d/b} D_{1/b} J V_{a/b}
    words.append((Chirp(d / b), Dilation(1.0 / b), Fourier(), Chirp(a / b)))
    # shear sandwich V_q1 U_b V_q2 with the middle shear Fourier-conjugated;
    # parameters stay small near the identity where the generic word blows up
    words.append((
        Chirp((d - 1.0) / b), Fourier(), Dilation(-1.0), Chirp(-b), Fourier(),
        Chirp((a - 1.0) / b),
    ))
    if abs(c) < 1e-14:
        # upper-triangular: frequency-side chirp, exact for wideband signals
        words.append((Dilation(1.0 / a), Fourier(), Dilation(-1.0), Chirp(-b / a), Fourier()))
    return words


def _word_conditioning(word):
    worst = 0.0
    for f in word:
        if isinstance(f, Chirp):
            worst = max(worst, abs(f.q))
        elif isinstance(f, Dilation):
            worst = max(worst, abs(f.e), 1.0 / abs(f.e))
    return worst


def factorize(S, n=1):
    """Factor ``S`` in ``Sp(1, R)`` into a short word of elementary unitaries.

    For block entries ``S = (a, b; c, d)`` with ``b != 0`` the default word
    realizes ``S = V_{d/b} D_{1/b} J V_{a/b}``; for ``b = 0`` (then
    ``a d = 1``) the two-factor word ``V_{c/a} D_{1/a}`` is exact.  When the
    default word is badly conditioned (entries of order ``1/b`` for small
    ``b``, e.g. rotations near the identity or near a half turn) an
    equivalent word with Fourier-conjugated shears, possibly prefixed by the
    exact parity factor ``D_{-1}``, is selected instead.  The phase is fixed
    against the unit Gaussian on a reference grid.
    """
    if n != 1:
        raise NotImplementedError("numeric factorization is n = 1 only")
    mat = S.as_float_array() if isinstance(S, SympMat) else np.array(S, dtype=float)
    if mat.shape != (2, 2) or abs(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0] - 1.0) > 1e-9:
        raise NotSymplecticError("factorize needs a 2x2 matrix with det 1")
    a, b, c, d = mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]
    candidates = [_simplify(w) for w in _base_words(a, b, c, d)]
    candidates += [_simplify((Dilation(-1.0),) + w) for w in _base_words(-a, -b, -c, -d)]
    fine = [w for w in candidates if _word_conditioning(w) <= 2.0]

    def _resamples(word):
        return sum(1 for f in word if isinstance(f, Dilation) and abs(f.e) != 1.0)

    if fine:
        factors = min(fine, key=lambda w: (_resamples(w), len(w)))
    else:
        factors = min(candidates, key=lambda w: (_word_conditioning(w), _resamples(w), len(w)))
    word = MetaplecticFactorization(factors)
    ref = _reference_gaussian()
    img = _apply_word(word.factors, ref, guard=False)
    ip = img.inner(ref).conjugate()
    phase = ip / abs(ip) if abs(ip) > 1e-12 else 1.0 + 0.0j
    return MetaplecticFactorization(factors, phase)


def propagator_quadratic(qform, t):
    """Factorization of the classical flow ``exp(2 t J Q)``."""
    return factorize(hamilton_flow(qform, t))


# -- application -------------------------------------------------------------


def _chirp_guard(q, sig):
    """Reject chirps whose instantaneous frequency `q x` exceeds Nyquist
    where the signal actually carries energy (beyond a small tail mass)."""
    if q == 0:
        return
    nyquist = 1.0 / (2.0 * sig.dx)
    p = np.abs(sig.samples) ** 2
    total = max(float(p.sum()), 1e-300)
    frac = float(p[np.abs(sig.x) > nyquist / abs(q)].sum() / total)
    if frac > CHIRP_ALIAS_FRACTION:
        raise AliasingRiskError(
            f"chirp rate {q:g} drives the instantaneous frequency past "
            f"Nyquist {nyquist:g} on {frac:.2%} of the signal energy; refine the grid")


def _apply_chirp(q, sig):
    _chirp_guard(q, sig)
    return sig.with_samples(np.exp(1j * np.pi * q * sig.x ** 2) * sig.samples)


def _apply_fourier(sig):
    if not sig.is_self_dual():
        raise AliasingRiskError("metaplectic application needs a self-dual grid (dx = 1/sqrt(N))")
    return sig.with_samples(spectral.centered_dft(sig.samples, sig.dx))


def _dilation_guard(e, sig):
    ae = abs(e)
    p = np.abs(sig.samples) ** 2
    total = max(float(p.sum()), 1e-300)
    if ae > 1.0:
        # spatial compression stretches the spectrum by |e|
        nyquist = 1.0 / (2.0 * sig.dx)
        frac = spectral.spectral_mass_beyond(sig.samples, sig.dx, nyquist / ae)
        if frac > DILATION_TAIL_FRACTION:
            raise AliasingRiskError(
                f"dilation by {e:g} would push {frac:.2%} of the spectrum past Nyquist")
    else:
        # spatial stretch by 1/|e| must stay on the grid
        frac = float(p[np.abs(sig.x) > ae * abs(sig.x0)].sum() / total)
        if frac > DILATION_TAIL_FRACTION:
            raise AliasingRiskError(
                f"dilation by {e:g} would stretch {frac:.2%} of the energy off the grid")


def _apply_dilation(e, sig, guard=True):
    if e == 0:
        raise ValueError("dilation factor must be nonzero")
    if e == 1.0:
        return sig
    if e == -1.0:
        return sig.with_samples(1j * np.roll(sig.samples[::-1], 1))
    if guard:
        _dilation_guard(e, sig)
    # pad so the evaluation points |e| x_max stay inside the interpolant period
    pad = max(2, int(np.ceil(abs(e))) + 1)
    vals = spectral.interpolate_bandlimited(sig.samples, sig.dx, e * sig.x, pad=pad)
    vals = np.sqrt(abs(e)) * vals
    if e < 0:
        vals = 1j * vals  # Maslov factor for negative determinant
    return sig.with_samples(vals)


def _apply_word(factors, sig, guard=True):
    for f in reversed(factors):
        if isinstance(f, Fourier):
            sig = _apply_fourier(sig)
        elif isinstance(f, Chirp):
            if guard:
                sig = _apply_chirp(f.q, sig)
            else:
                sig = sig.with_samples(np.exp(1j * np.pi * f.q * sig.x ** 2) * sig.samples)
        elif isinstance(f, Dilation):
            sig = _apply_dilation(f.e, sig, guard=guard)
        else:
            raise TypeError(f"unknown factor {f!r}")
    return sig


def apply_metaplectic(word, sig):
    """Apply a factor word (right-to-left) to a signal on a self-dual grid."""
    if not sig.is_self_dual():
        raise AliasingRiskError("metaplectic application needs a self-dual grid (dx = 1/sqrt(N))")
    out = _apply_word(word.factors, sig)
    return out.with_samples(word.phase * out.samples)


def apply_inverse(word, sig):
    """Apply the inverse word (each factor inverted, order reversed)."""
    if not sig.is_self_dual():
        raise AliasingRiskError("metaplectic application needs a self-dual grid (dx = 1/sqrt(N))")
    for f in word.factors:
        if isinstance(f, Fourier):
            sig = sig.with_samples(spectral.centered_idft(sig.samples, sig.dx))
        elif isinstance(f, Chirp):
            sig = _apply_chirp(-f.q, sig)
        elif isinstance(f, Dilation):
            sig = _apply_dilation(1.0 / f.e, sig)
            if f.e < 0:
                sig = sig.with_samples(-sig.samples)  # undo the two i factors
        else:
            raise TypeError(f"unknown factor {f!r}")
    return sig.with_samples(np.conj(word.phase) * sig.samples)
