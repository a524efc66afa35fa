"""Matrix form of the uniform-scale problem with separated boundary data.

For the scale {0, 1, ..., n-1} with separated boundary conditions the
eigenvalues coincide with those of the (n-2)x(n-2) matrix Q = Q1 + Q2:
Q1 is the tridiagonal (-1, 2, -1) second-difference matrix with corner
entries 2 - 1/(1-h) and 1 - H, and Q2 places the potential column at the
index of the frozen argument.  This path serves as the independent oracle
against the characteristic-polynomial route.

Two in-house eigensolvers are provided: an exact characteristic polynomial
via the Faddeev-LeVerrier recursion (rational arithmetic, default for small
matrices) and a complex shifted-QR iteration on the balanced Hessenberg
form (the scalable route).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, ValidationError
from .poly import Polynomial, cluster_values, find_roots
from .problem import (
    BoundaryCoefficients,
    SeparatedBC,
    Spectrum,
    as_fraction,
    rationalizable,
)

EXACT_DIM_LIMIT = 12


@dataclass(frozen=True)
class DenseMatrix:
    """Small square matrix; entries stay exact when the inputs are."""

    entries: tuple  # of row tuples

    def __post_init__(self):
        d = len(self.entries)
        if d < 1 or any(len(row) != d for row in self.entries):
            raise ValidationError("matrix must be square with dimension >= 1", field="matrix")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for row in self.entries for x in row)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)

    def trace(self):
        return sum(self.entries[i][i] for i in range(self.dim))


def bc_to_general(bc: SeparatedBC) -> BoundaryCoefficients:
    """General boundary rows matching the matrix reduction.

    The left row reads the separated condition directly.  The right row
    carries -H (not +H): the matrix corner entry 1 - H corresponds to the
    elimination y(n-1) = (1+H) y(n-2), i.e. to yD(beta) - H y(beta) = 0.
    With this pairing both solver paths produce identical spectra.
    """
    return BoundaryCoefficients(
        a11=bc.h, a12=1, a21=0, a22=0, b11=0, b12=0, b21=-bc.H, b22=1
    )


def build_Q(n: int, bc: SeparatedBC, q, a: int, allow_frozen_left: bool = False) -> DenseMatrix:
    """The (n-2)x(n-2) matrix spectrally equivalent to the discrete problem.

    ``q`` maps {0..n-3} to potential values (a callable or a sequence).
    The unknown vector is (y(1), ..., y(n-2)), so the potential column index
    ``a`` must lie in [1, n-2].  a = 0 folds the column through the left
    boundary elimination and is only available behind ``allow_frozen_left``.
    """
    if n < 4:
        raise ValidationError("matrix form needs n >= 4", field="n")
    if bc.h == 1:
        raise ValidationError(
            "h = 1 makes the left elimination singular; use the "
            "characteristic-polynomial path instead",
            field="boundary",
        )
    d = n - 2
    if not (1 <= a <= n - 2):
        if a == 0 and allow_frozen_left:
            pass
        else:
            raise ValidationError(
                f"frozen argument column a={a} must lie in [1, {n - 2}] "
                "(a = 0 needs allow_frozen_left; other values have no column); "
                "the characteristic-polynomial path has no such restriction",
                field="frozen_argument",
            )
    qv = [q(t) for t in range(n - 2)] if callable(q) else list(q)
    if len(qv) != n - 2:
        raise ValidationError(f"need {n - 2} potential values, got {len(qv)}", field="potential")

    exact = rationalizable(bc.h, bc.H, *qv)
    conv = as_fraction if exact else float
    h, H = conv(bc.h), conv(bc.H)
    one = Fraction(1) if exact else 1.0
    rows = [[one * 0 for _ in range(d)] for _ in range(d)]
    for i in range(d):
        rows[i][i] = one * 2
        if i + 1 < d:
            rows[i][i + 1] = -one
        if i - 1 >= 0:
            rows[i][i - 1] = -one
    rows[0][0] = 2 * one - one / (one - h)
    rows[d - 1][d - 1] = one - H
    if a == 0:
        # y(0) = y(1)/(1-h): the potential column lands on y(1), scaled
        for i in range(d):
            rows[i][0] += conv(qv[i]) / (one - h)
    else:
        for i in range(d):
            rows[i][a - 1] += conv(qv[i])
    return DenseMatrix(entries=tuple(tuple(row) for row in rows))


# ---------------------------------------------------------------------------
# exact route: Faddeev-LeVerrier characteristic polynomial


def char_poly_dense(M: DenseMatrix) -> Polynomial:
    """det(lambda*I - M) with exact rational coefficients, ascending order."""
    d = M.dim
    A = [[as_fraction(x) for x in row] for row in M.entries]

    def mat_mul(X, Y):
        return [
            [sum(X[i][k] * Y[k][j] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]

    def trace(X):
        return sum(X[i][i] for i in range(d))

    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    Mk = [[Fraction(0)] * d for _ in range(d)]
    ck = Fraction(1)
    for k in range(1, d + 1):
        for i in range(d):
            Mk[i][i] += ck
        AM = mat_mul(A, Mk)
        ck = -trace(AM) / k
        coeffs[d - k] = ck
        Mk = AM
    return Polynomial(coeffs)


# ---------------------------------------------------------------------------
# scalable route: balanced Hessenberg + shifted QR


def _balance(A: np.ndarray, sweeps: int = 5) -> np.ndarray:
    """Diagonal similarity scaling by powers of 2 to equalize row/col norms."""
    A = A.astype(complex).copy()
    d = A.shape[0]
    for _ in range(sweeps):
        converged = True
        for i in range(d):
            c = np.sum(np.abs(A[:, i])) - abs(A[i, i])
            r = np.sum(np.abs(A[i, :])) - abs(A[i, i])
            if c == 0 or r == 0:
                continue
            f = 1.0
            while c * 2 < r:
                c *= 2
                r /= 2
                f *= 2
            while c >= r * 2:
                c /= 2
                r *= 2
                f /= 2
            if f != 1.0:
                converged = False
                A[i, :] /= f
                A[:, i] *= f
        if converged:
            break
    return A


def _hessenberg(A: np.ndarray) -> np.ndarray:
    """Householder reduction to upper Hessenberg form (complex)."""
    H = A.astype(complex).copy()
    d = H.shape[0]
    for k in range(d - 2):
        x = H[k + 1:, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * norm_x
        vn = np.linalg.norm(v)
        if vn == 0:
            continue
        v /= vn
        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
    return H


def _wilkinson_shift(H: np.ndarray, hi: int) -> complex:
    a = H[hi - 1, hi - 1]
    b = H[hi - 1, hi]
    c = H[hi, hi - 1]
    dd = H[hi, hi]
    tr = a + dd
    det = a * dd - b * c
    disc = cmath.sqrt(tr * tr - 4 * det)
    r1 = (tr + disc) / 2
    r2 = (tr - disc) / 2
    return r1 if abs(r1 - dd) < abs(r2 - dd) else r2


def qr_eigvals(A: np.ndarray, iter_cap_factor: int = 30) -> list[complex]:
    """Eigenvalues by explicit-shift QR with deflation on the Hessenberg form.

    Raises ``ConvergenceError`` (partial eigenvalues attached) if some
    eigenvalue fails to deflate within iter_cap_factor*d iterations.
    """
    d = A.shape[0]
    if d == 0:
        return []
    if d == 1:
        return [complex(A[0, 0])]
    H = _hessenberg(_balance(A))
    eps = np.finfo(float).eps
    found: list[complex] = []
    hi = d - 1
    iters = 0
    cap = iter_cap_factor * d
    while hi >= 0:
        if hi == 0:
            found.append(complex(H[0, 0]))
            break
        # deflate any negligible subdiagonal inside the active block
        deflated = False
        for i in range(hi, 0, -1):
            if abs(H[i, i - 1]) <= eps * (abs(H[i - 1, i - 1]) + abs(H[i, i])):
                H[i, i - 1] = 0.0
                if i == hi:
                    found.append(complex(H[hi, hi]))
                    hi -= 1
                    iters = 0
                    deflated = True
                break
        if deflated:
            continue
        if iters >= cap:
            raise ConvergenceError(
                f"QR iteration failed to deflate within {cap} steps",
                partial=found,
            )
        shift = _wilkinson_shift(H, hi)
        if iters > 0 and iters % 12 == 0:
            # exceptional shift to break symmetry-induced stalls
            shift = H[hi, hi] + abs(H[hi, hi - 1]) * (0.9 + 0.31j)
        # explicit shifted QR step on the active (hi+1) block via Givens
        nb = hi + 1
        R = H[:nb, :nb] - shift * np.eye(nb)
        rots = []
        for i in range(nb - 1):
            a_, b_ = R[i, i], R[i + 1, i]
            rnorm = np.hypot(abs(a_), abs(b_))
            if rnorm == 0:
                c_, s_ = 1.0, 0.0
            else:
                c_, s_ = a_ / rnorm, b_ / rnorm
            G = np.array([[np.conj(c_), np.conj(s_)], [-s_, c_]])
            R[i:i + 2, :] = G @ R[i:i + 2, :]
            rots.append((c_, s_))
        for i, (c_, s_) in enumerate(rots):
            GH = np.array([[c_, -np.conj(s_)], [s_, np.conj(c_)]])
            R[:, i:i + 2] = R[:, i:i + 2] @ GH
        H[:nb, :nb] = R + shift * np.eye(nb)
        iters += 1
    return found


def eigs_dense(M: DenseMatrix, tol: float = 1e-10, method: str = "auto") -> Spectrum:
    """All eigenvalues of a dense matrix with algebraic multiplicities.

    method: "charpoly" roots the exact characteristic polynomial (default
    for exact entries up to dimension 12), "qr" runs the shifted-QR path,
    "auto" picks between them.  Residuals are |det(lam*I - M)| evaluations
    of the characteristic polynomial for the charpoly route and smallest
    singular values of (lam*I - M) for the QR route.
    """
    if method == "auto":
        method = "charpoly" if (M.exact and M.dim <= EXACT_DIM_LIMIT) else "qr"
    if method == "charpoly":
        p = char_poly_dense(M)
        roots = find_roots(p, tol)
        return Spectrum.from_pairs(roots.roots, residuals=roots.residuals)
    if method != "qr":
        raise ValueError(f"unknown method {method!r}")
    values = qr_eigvals(M.to_numpy())
    clusters = cluster_values(values, tol)
    A = M.to_numpy().astype(complex)
    eye = np.eye(M.dim)
    residuals = [
        float(np.linalg.svd(z * eye - A, compute_uv=False)[-1]) for z, _ in clusters
    ]
    return Spectrum.from_pairs(clusters, residuals=residuals)


def reconstruct_sequence(M: DenseMatrix, vec: np.ndarray, bc: SeparatedBC) -> np.ndarray:
    """Extend a matrix eigenvector (y(1)..y(n-2)) to the full y(0)..y(n-1).

    Uses the boundary eliminations y(0) = y(1)/(1-h) and
    y(n-1) = (1+H) y(n-2) that produced the corner entries.
    """
    y_inner = np.asarray(vec, dtype=complex)
    y0 = y_inner[0] / (1.0 - bc.h)
    y_last = (1.0 + bc.H) * y_inner[-1]
    return np.concatenate(([y0], y_inner, [y_last]))
