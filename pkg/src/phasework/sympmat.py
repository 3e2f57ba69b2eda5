"""Exact and floating-point symplectic linear algebra.

Matrices are stored either with exact rational entries (gmpy2 ``mpq``, falling
back to ``fractions.Fraction``) or as float64.  All block-level identities used
elsewhere in the workbench (tensor products, conjugation, variable doubling,
covariance and shift-invertibility templates, interaction matrices) live here,
together with the Hamilton flow of a real quadratic form.

Conventions: a ``SympMat`` of half dimension ``n`` is a ``2n x 2n`` matrix
acting on phase-space vectors ordered ``(x_1..x_n, xi_1..xi_n)``.  Matrices of
half dimension ``2n`` are additionally viewed through ``n x n`` quarter blocks
``A[i][j]``, ``i, j = 1..4``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import NotSymplecticError

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _rational

__all__ = [
    "SympMat",
    "QuadraticForm",
    "rational",
    "is_symplectic",
    "j_matrix",
    "dilation",
    "shear",
    "generator",
    "tensor",
    "conjugate",
    "doubling",
    "doubling_closed_form",
    "covariance_matrix",
    "shift_invertibility",
    "interaction_matrix",
    "hamilton_flow",
    "expm_taylor",
    "random_symplectic",
    "a_tau",
    "a_standard",
    "a_ft2",
    "covariant_template",
    "save_matrix_csv",
    "load_matrix_csv",
]

SYMPLECTIC_TOL = 1e-12
_HALF = _rational(1, 2)


def rational(p, q=1):
    """Exact rational scalar of the active backend."""
    return _rational(p, q)


def _as_entry(x, exact):
    if exact:
        if isinstance(x, (float, np.floating)):
            if float(x) != int(x):
                raise TypeError("non-integral float in exact mode; pass rationals")
            return _rational(int(x))
        if isinstance(x, (int, np.integer)):
            return _rational(int(x))
        return _rational(x)
    return float(x)


def _obj_array(rows):
    n = len(rows)
    m = len(rows[0])
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            out[i, j] = rows[i][j]
    return out


def _zeros(n, m, exact):
    if exact:
        zero = _rational(0)
        return _obj_array([[zero] * m for _ in range(n)])
    return np.zeros((n, m))


def _eye(n, exact):
    out = _zeros(n, n, exact)
    one = _rational(1) if exact else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def _det_exact(mat):
    """Determinant of a small exact matrix by fraction-free elimination."""
    a = [list(row) for row in mat]
    n = len(a)
    det = _rational(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return _rational(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / inv
            if f != 0:
                a[r] = [a[r][k] - f * a[col][k] for k in range(n)]
    return det


class SympMat:
    """A ``2n x 2n`` matrix claimed symplectic, exact or float.

    Parameters
    ----------
    mat : array_like
        Square matrix of even dimension.  Entries must be ints/rationals in
        exact mode, anything float-convertible otherwise.
    exact : bool
        Scalar mode.  Exact matrices verify the symplectic condition with zero
        tolerance, float matrices to ``1e-12`` entrywise.
    check : bool
        Verify ``S^T J S = J`` on construction (default True).
    """

    __slots__ = ("mat", "exact", "n")

    def __init__(self, mat, exact=False, check=True):
        if isinstance(mat, SympMat):
            exact = exact or mat.exact
            mat = mat.mat
        if exact:
            rows = [[_as_entry(x, True) for x in row] for row in np.asarray(mat, dtype=object)]
            arr = _obj_array(rows)
        else:
            arr = np.array(mat, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        if arr.shape[0] % 2:
            raise ValueError("matrix dimension must be even")
        self.mat = arr
        self.exact = exact
        self.n = arr.shape[0] // 2
        if check and not self.is_symplectic():
            raise NotSymplecticError("matrix fails S^T J S = J")

    # -- basic algebra -------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, SympMat):
            if self.exact != other.exact:
                raise ValueError("cannot mix exact and float symplectic matrices")
            return SympMat(self.mat @ other.mat, exact=self.exact, check=False)
        return self.mat @ other

    def __eq__(self, other):
        if not isinstance(other, SympMat):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.mat == other.mat))

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"SympMat(n={self.n}, {mode})\n{self.mat}"

    @property
    def shape(self):
        return self.mat.shape

    @property
    def T(self):
        return SympMat(self.mat.T.copy(), exact=self.exact, check=False)

    def inv(self):
        """Inverse via ``S^-1 = J^T S^T J`` (exact for symplectic input)."""
        J = _j_bare(self.n, self.exact)
        return SympMat(J.T @ self.mat.T @ J, exact=self.exact, check=False)

    def to_float(self):
        if not self.exact:
            return self
        return SympMat(self.mat.astype(float), exact=False, check=False)

    def as_float_array(self):
        return self.mat.astype(float) if self.exact else self.mat.copy()

    def block(self, i, j, size=None):
        """Sub-block in an even partition; quarters by default."""
        size = size if size is not None else self.n
        return self.mat[(i - 1) * size:i * size, (j - 1) * size:j * size]

    def quarter(self, i, j):
        """Quarter block ``A_ij`` of a matrix viewed over doubled phase space.

        Requires even half dimension; blocks are ``m x m`` with ``m = n/2``.
        """
        if self.n % 2:
            raise ValueError("quarter blocks need even half dimension")
        return self.block(i, j, size=self.n // 2)

    def is_symplectic(self, tol=SYMPLECTIC_TOL):
        J = _j_bare(self.n, self.exact)
        res = self.mat.T @ J @ self.mat - J
        if self.exact:
            return all(x == 0 for x in res.flat)
        return bool(np.max(np.abs(res)) < tol)


def _j_bare(n, exact):
    out = _zeros(2 * n, 2 * n, exact)
    one = _rational(1) if exact else 1.0
    for i in range(n):
        out[i, n + i] = one
        out[n + i, i] = -one
    return out


def is_symplectic(S, tol=SYMPLECTIC_TOL):
    """``S^T J S = J``, exactly or to ``tol`` entrywise in float mode.

    Equivalent to the three block conditions ``A^T C = C^T A``,
    ``B^T D = D^T B`` and ``A^T D - C^T B = I``.
    """
    if not isinstance(S, SympMat):
        S = SympMat(S, check=False)
    return S.is_symplectic(tol)


def block_conditions(S, tol=SYMPLECTIC_TOL):
    """The three half-block symplecticity conditions, for cross-checking."""
    n = S.n
    A, B = S.block(1, 1), S.block(1, 2)
    C, D = S.block(2, 1), S.block(2, 2)
    I = _eye(n, S.exact)
    residues = (A.T @ C - C.T @ A, B.T @ D - D.T @ B, A.T @ D - C.T @ B - I)
    if S.exact:
        return all(all(x == 0 for x in r.flat) for r in residues)
    return all(np.max(np.abs(r.astype(float))) < tol for r in residues)


# -- generators ---------------------------------------------------------


def j_matrix(n=1, exact=True):
    """Standard symplectic form ``J = (0, I; -I, 0)``."""
    return SympMat(_j_bare(n, exact), exact=exact, check=False)


def dilation(E, exact=True):
    """Dilation generator ``D_E = (E^-1, 0; 0, E^T)`` for invertible ``E``."""
    if exact:
        E = _obj_array([[_as_entry(x, True) for x in row] for row in np.atleast_2d(np.asarray(E, dtype=object))])
        if _det_exact(E) == 0:
            raise ValueError("dilation matrix must be invertible")
        Einv = _inv_exact(E)
    else:
        E = np.atleast_2d(np.array(E, dtype=float))
        if abs(np.linalg.det(E)) < 1e-14:
            raise ValueError("dilation matrix must be invertible")
        Einv = np.linalg.inv(E)
    n = E.shape[0]
    out = _zeros(2 * n, 2 * n, exact)
    out[:n, :n] = Einv
    out[n:, n:] = E.T
    return SympMat(out, exact=exact, check=False)


def _inv_exact(E):
    n = E.shape[0]
    aug = np.concatenate([E.copy(), _eye(n, True)], axis=1)
    a = [list(row) for row in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [a[r][k] - f * a[col][k] for k in range(2 * n)]
    return _obj_array([row[n:] for row in a])


def shear(Q, exact=True):
    """Shear generator ``V_Q = (I, 0; Q, I)`` for symmetric ``Q``."""
    if exact:
        Q = _obj_array([[_as_entry(x, True) for x in row] for row in np.atleast_2d(np.asarray(Q, dtype=object))])
        if any(Q[i, j] != Q[j, i] for i in range(Q.shape[0]) for j in range(Q.shape[0])):
            raise ValueError("shear matrix must be symmetric")
    else:
        Q = np.atleast_2d(np.array(Q, dtype=float))
        if np.max(np.abs(Q - Q.T)) > 1e-12:
            raise ValueError("shear matrix must be symmetric")
    n = Q.shape[0]
    out = _eye(2 * n, exact)
    out[n:, :n] = Q
    return SympMat(out, exact=exact, check=False)


def generator(kind, param=None, n=1, exact=True):
    """Dispatch into the three generator families ``{J, D_E, V_Q}``."""
    if kind == "J":
        return j_matrix(n, exact)
    if kind == "dilation":
        return dilation(param, exact)
    if kind == "shear":
        return shear(param, exact)
    raise ValueError(f"unknown generator kind {kind!r}")


# -- structural operations ----------------------------------------------


def tensor(S1, S2):
    """Interleaved tensor product of two symplectic matrices of equal size.

    Returns the ``4n x 4n`` matrix with blocks
    ``(A1,0,B1,0; 0,A2,0,B2; C1,0,D1,0; 0,C2,0,D2)``.
    """
    if S1.n != S2.n or S1.exact != S2.exact:
        raise ValueError("tensor needs matrices of equal half_dim and mode")
    n, exact = S1.n, S1.exact
    out = _zeros(4 * n, 4 * n, exact)
    for bi, bj, src in (
        (1, 1, (1, 1)), (1, 3, (1, 2)), (3, 1, (2, 1)), (3, 3, (2, 2)),
    ):
        out[(bi - 1) * n:bi * n, (bj - 1) * n:bj * n] = S1.block(*src)
        out[bi * n:(bi + 1) * n, bj * n:(bj + 1) * n] = S2.block(*src)
    return SympMat(out, exact=exact, check=False)


def conjugate(S):
    """Projection of ``f -> conj(S_hat conj(f))``: blockwise ``(A,-B;-C,D)``."""
    n = S.n
    out = S.mat.copy()
    out[:n, n:] = -out[:n, n:]
    out[n:, :n] = -out[n:, :n]
    return SympMat(out, exact=S.exact, check=False)


def _p_plus_minus(n, sign, exact):
    """Permutation ``P_+/-`` on 4n coordinates (blocks of size n)."""
    out = _zeros(4 * n, 4 * n, exact)
    one = _rational(1) if exact else 1.0
    for i in range(n):
        out[i, i] = one
        out[n + i, 2 * n + i] = one
        out[2 * n + i, n + i] = one
        out[3 * n + i, 3 * n + i] = one if sign > 0 else -one
    return out


def doubling(A):
    """Doubled-variable embedding ``A' = D_{P-} (A (x) conj(A)) D_{P+}``.

    ``A`` must have even half dimension ``2n`` (an element of ``Sp(2n)``);
    the result has half dimension ``4n`` and equals the closed-form block
    matrix of :func:`doubling_closed_form` exactly in exact mode.
    """
    if A.n % 2:
        raise ValueError("doubling needs even half dimension")
    n = A.n // 2
    dp_minus = dilation(_p_inner(n, -1, A.exact), exact=A.exact)
    dp_plus = dilation(_p_inner(n, +1, A.exact), exact=A.exact)
    return dp_minus @ tensor(A, conjugate(A)) @ dp_plus


def _p_inner(n, sign, exact):
    # P_+/- is an involution with P^-1 = P, so D_{P} uses P itself
    return _p_plus_minus(n, sign, exact)[: 4 * n, : 4 * n]


def doubling_closed_form(A):
    """Closed-form block expression for the doubled matrix.

    Sign pattern per quarter-block row i, column j (1-based):
    blocks appear as ``diag(A_ij, s_ij * A_ij)`` with ``s_ij = -1`` exactly
    when one of the paired variables carries a conjugation flip.
    """
    if A.n % 2:
        raise ValueError("doubling needs even half dimension")
    n = A.n // 2
    sign = {
        (1, 1): 1, (1, 2): 1, (1, 3): -1, (1, 4): -1,
        (2, 1): -1, (2, 2): -1, (2, 3): 1, (2, 4): 1,
        (3, 1): -1, (3, 2): -1, (3, 3): 1, (3, 4): 1,
        (4, 1): 1, (4, 2): 1, (4, 3): -1, (4, 4): -1,
    }
    out = _zeros(8 * n, 8 * n, A.exact)
    for i in range(1, 5):
        for j in range(1, 5):
            blk = A.quarter(i, j)
            r0 = (i - 1) * 2 * n
            c0 = (j - 1) * 2 * n
            out[r0:r0 + n, c0:c0 + n] = blk
            out[r0 + n:r0 + 2 * n, c0 + n:c0 + 2 * n] = blk if sign[(i, j)] > 0 else -blk
    return SympMat(out, exact=A.exact, check=False)


# -- covariance / shift-invertibility ------------------------------------


def covariant_template(a11, a21, a13, exact=True):
    """Covariant-form matrix with free blocks ``A11`` and symmetric ``A21, A13``."""
    a11 = np.atleast_2d(np.asarray(a11, dtype=object if exact else float))
    a21 = np.atleast_2d(np.asarray(a21, dtype=object if exact else float))
    a13 = np.atleast_2d(np.asarray(a13, dtype=object if exact else float))
    n = a11.shape[0]
    I = _eye(n, exact)
    Z = _zeros(n, n, exact)
    rows = [
        np.concatenate([a11, I - a11, a13, a13], axis=1),
        np.concatenate([a21, -a21, I - a11.T, -a11.T], axis=1),
        np.concatenate([Z, Z, I, I], axis=1),
        np.concatenate([-I, I, Z, Z], axis=1),
    ]
    out = np.concatenate(rows, axis=0)
    if exact:
        out = _obj_array([[_as_entry(x, True) for x in row] for row in out])
    return SympMat(out, exact=exact, check=False)


def covariance_matrix(A, tol=1e-10):
    """Covariance test: returns ``B_A`` if ``A`` matches the covariant form.

    The covariant template fixes rows three and four to ``(0,0,I,I)`` and
    ``(-I,I,0,0)`` and ties the remaining quarter blocks to ``A11``, symmetric
    ``A21`` and symmetric ``A13``; then
    ``B_A = (A13, I/2 - A11; I/2 - A11^T, -A21)``.
    Returns ``None`` if the template does not match (exactly in exact mode,
    entrywise to ``tol`` in float mode).
    """
    if A.n % 2:
        raise ValueError("covariance test needs even half dimension")
    n = A.n // 2
    a11 = A.quarter(1, 1)
    a21 = A.quarter(2, 1)
    a13 = A.quarter(1, 3)
    template = covariant_template(a11, a21, a13, exact=A.exact)
    if A.exact:
        ok = all(x == y for x, y in zip(A.mat.flat, template.mat.flat))
        ok = ok and all(a13[i, j] == a13[j, i] for i in range(n) for j in range(n))
        ok = ok and all(a21[i, j] == a21[j, i] for i in range(n) for j in range(n))
    else:
        ok = np.max(np.abs(A.mat - template.mat)) < tol
        ok = ok and np.max(np.abs(a13 - a13.T)) < tol and np.max(np.abs(a21 - a21.T)) < tol
    if not ok:
        return None
    half = _HALF if A.exact else 0.5
    I = _eye(n, A.exact)
    top = np.concatenate([a13, half * I - a11], axis=1)
    bot = np.concatenate([half * I - a11.T, -a21], axis=1)
    return np.concatenate([top, bot], axis=0)


def shift_invertibility(A, tol=1e-12):
    """Shift-invertibility submatrix ``E_A = (A11, A13; A21, A23)`` or ``None``."""
    if A.n % 2:
        raise ValueError("shift-invertibility needs even half dimension")
    top = np.concatenate([A.quarter(1, 1), A.quarter(1, 3)], axis=1)
    bot = np.concatenate([A.quarter(2, 1), A.quarter(2, 3)], axis=1)
    E = np.concatenate([top, bot], axis=0)
    if A.exact:
        if _det_exact(E) == 0:
            return None
    else:
        if abs(np.linalg.det(E)) < tol:
            return None
    return E


def interaction_matrix(A, S1, S2):
    """Interaction matrix ``C = A (S1 (x) conj(S2))``.

    When ``A`` is shift-invertible, ``E_C = E_A S1`` holds exactly; this is
    checked by the property suite, not enforced here.
    """
    if A.n != 2 * S1.n or S1.n != S2.n:
        raise ValueError("need A in Sp(2n) with S1, S2 in Sp(n)")
    return A @ tensor(S1, conjugate(S2))


# -- quadratic forms and flows --------------------------------------------


@dataclass(frozen=True)
class QuadraticForm:
    """Real quadratic form ``a(X) = <X, Q X>`` on 2n-dimensional phase space."""

    Q: np.ndarray

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] % 2:
            raise ValueError("Q must be square of even dimension")
        if np.max(np.abs(Q - Q.T)) > 1e-12:
            raise ValueError("Q must be symmetric")
        object.__setattr__(self, "Q", Q)

    @property
    def dim(self):
        return self.Q.shape[0] // 2

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        return float(X @ self.Q @ X)

    @classmethod
    def free_particle(cls):
        """``a(x, xi) = xi^2`` (n = 1)."""
        return cls(np.diag([0.0, 1.0]))

    @classmethod
    def harmonic_oscillator(cls):
        """``a(x, xi) = (x^2 + xi^2) / 2`` (n = 1)."""
        return cls(np.diag([0.5, 0.5]))

    def hamilton_map(self):
        """``F = J Q``."""
        n = self.dim
        J = _j_bare(n, False)
        return J @ self.Q


def expm_taylor(M, degree=18):
    """Matrix exponential by scaling-and-squaring with a Taylor kernel."""
    M = np.asarray(M, dtype=float)
    norm = np.linalg.norm(M, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    A = M / (2 ** squarings)
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, degree + 1):
        term = term @ A / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def hamilton_flow(qform, t):
    """Classical flow ``S_t = exp(2 t F)`` with ``F = J Q`` (float mode)."""
    St = expm_taylor(2.0 * t * qform.hamilton_map())
    return SympMat(St, exact=False, check=False)


# -- reference families ----------------------------------------------------


def a_tau(tau, n=1, exact=True):
    """Projection of the tau-Wigner representation (tau rational in exact mode)."""
    tau = _rational(tau) if exact else float(tau)
    one = _rational(1) if exact else 1.0
    I = _eye(n, exact)
    Z = _zeros(n, n, exact)
    rows = [
        np.concatenate([(one - tau) * I, tau * I, Z, Z], axis=1),
        np.concatenate([Z, Z, tau * I, -(one - tau) * I], axis=1),
        np.concatenate([Z, Z, I, I], axis=1),
        np.concatenate([-I, I, Z, Z], axis=1),
    ]
    return SympMat(np.concatenate(rows, axis=0), exact=exact, check=False)


def a_standard(n=1, exact=True):
    """Projection of the short-time Fourier transform representation."""
    I = _eye(n, exact)
    Z = _zeros(n, n, exact)
    rows = [
        np.concatenate([I, -I, Z, Z], axis=1),
        np.concatenate([Z, Z, I, I], axis=1),
        np.concatenate([Z, Z, Z, -I], axis=1),
        np.concatenate([-I, Z, Z, Z], axis=1),
    ]
    return SympMat(np.concatenate(rows, axis=0), exact=exact, check=False)


def a_ft2(n=1, exact=True):
    """Projection of the partial Fourier transform in the second variables."""
    I = _eye(n, exact)
    Z = _zeros(n, n, exact)
    rows = [
        np.concatenate([I, Z, Z, Z], axis=1),
        np.concatenate([Z, Z, Z, I], axis=1),
        np.concatenate([Z, Z, I, Z], axis=1),
        np.concatenate([Z, -I, Z, Z], axis=1),
    ]
    return SympMat(np.concatenate(rows, axis=0), exact=exact, check=False)


# -- fuzzing ----------------------------------------------------------------


def _random_rational(rng, lo=-5, hi=5):
    q = rng.randint(1, 3)
    p = rng.randint(lo * q, hi * q)
    return _rational(p, q)


def random_symplectic(rng, n=1, max_len=8, nonzero_b=False):
    """Random exact symplectic matrix as a word in the generators.

    Parameters are rationals in ``[-5, 5]``; ``rng`` is a ``random.Random``.
    With ``nonzero_b`` the word is redrawn until the upper-right block is
    nonzero (useful for factorization tests).
    """
    assert isinstance(rng, random.Random)
    while True:
        word_len = rng.randint(1, max_len)
        S = SympMat(_eye(2 * n, True), exact=True, check=False)
        for _ in range(word_len):
            kind = rng.choice(("J", "dilation", "shear"))
            if kind == "J":
                F = j_matrix(n, exact=True)
            elif kind == "dilation":
                while True:
                    E = [[_random_rational(rng) for _ in range(n)] for _ in range(n)]
                    Em = _obj_array(E)
                    if _det_exact(Em) != 0:
                        break
                F = dilation(Em, exact=True)
            else:
                Q = [[_rational(0)] * n for _ in range(n)]
                for i in range(n):
                    for j in range(i, n):
                        Q[i][j] = Q[j][i] = _random_rational(rng)
                F = shear(_obj_array(Q), exact=True)
            S = S @ F
        if not nonzero_b or any(x != 0 for x in S.block(1, 2).flat):
            return S


# -- serialization -----------------------------------------------------------


def save_matrix_csv(path, S):
    """Row-major CSV; exact rationals as ``p/q``, floats with 17 digits."""
    exact = isinstance(S, SympMat) and S.exact
    mat = S.mat if isinstance(S, SympMat) else np.asarray(S)
    with open(path, "w") as fh:
        for row in mat:
            if exact:
                fh.write(",".join(str(x) for x in row) + "\n")
            else:
                fh.write(",".join("%.17g" % float(x) for x in row) + "\n")


def load_matrix_csv(path, exact=False, check=True):
    """Load a matrix saved by :func:`save_matrix_csv`."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if exact:
                rows.append([_rational(c) for c in cells])
            else:
                rows.append([float(_rational(c)) if "/" in c else float(c) for c in cells])
    arr = _obj_array(rows) if exact else np.array(rows, dtype=float)
    return SympMat(arr, exact=exact, check=check)
