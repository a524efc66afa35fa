"""Finite-scale spectra via characteristic polynomials.

On a finite scale the basis solutions S and C are polynomials in the
spectral parameter at every grid point.  They are generated by a three-term
relation obtained by writing the second delta-derivative as a quotient of
forward differences:

    y(sigma^2 t) = y(sigma t) * (1 + mu(sigma t)/mu(t) - lam*mu(t)*mu(sigma t))
                   - (mu(sigma t)/mu(t)) * y(t)
                   + mu(t)*mu(sigma t) * q(t) * y(a)

with y(a) frozen to 0 for the S branch and 1 for the C branch.  The same
relation, solved for y(t), steps backward.  The characteristic function is
the 2x2 determinant of the boundary functionals applied to C and S; its
roots are the eigenvalues.

All stepping code is generic over the lambda carrier: pass a degree-1
``Polynomial`` to build coefficient tables (exact when all inputs are
rational) or a plain complex number to evaluate the characteristic function
numerically at one point.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateProblemError, ValidationError
from .poly import Polynomial, find_roots
from .problem import (
    BoundaryCoefficients,
    ProblemSpec,
    Spectrum,
    as_fraction,
    rationalizable,
)
from .timescale import FiniteScale

LAMBDA = Polynomial([0, 1])

DET_FLOOR = 1e-12


def step_forward(y_prev, y_cur, t, mu, mu_s, q_t, frozen, lam=LAMBDA):
    """Value at sigma^2(t) from the values at t and sigma(t).

    ``mu`` and ``mu_s`` are the graininess at t and sigma(t); both must be
    positive (every interior point of a finite scale is right-scattered).
    """
    if not (mu > 0 and mu_s > 0):
        raise ValidationError(f"graininess must be positive at t={t!r}", field="timescale")
    ratio = mu_s / mu
    return y_cur * (1 + ratio - lam * (mu * mu_s)) - y_prev * ratio + (mu * mu_s) * q_t * frozen


def step_backward(y_next2, y_next, t, mu, mu_s, q_t, frozen, lam=LAMBDA):
    """Value at t from the values at sigma(t) and sigma^2(t).

    Inverts the forward relation; solvable because the coefficient of y(t)
    is -mu(sigma t)/mu(t), never zero.
    """
    if not (mu > 0 and mu_s > 0):
        raise ValidationError(f"graininess must be positive at t={t!r}", field="timescale")
    ratio = mu_s / mu
    rest = y_next * (1 + ratio - lam * (mu * mu_s)) - y_next2 + (mu * mu_s) * q_t * frozen
    return rest * (mu / mu_s)


def _solution_values(mu, qvals, ia, frozen, seed0, seed1, lam):
    """Both-direction sweep of the three-term relation.

    mu: graininess list (length n-1), qvals: potential at indices 0..n-3,
    ia: index of the frozen argument.  Returns the list of n values.
    """
    n = len(mu) + 1
    y = [None] * n
    y[ia] = seed0
    y[ia + 1] = seed1
    for j in range(ia, n - 2):
        y[j + 2] = step_forward(y[j], y[j + 1], j, mu[j], mu[j + 1], qvals[j], frozen, lam)
    for j in range(ia - 1, -1, -1):
        y[j] = step_backward(y[j + 2], y[j + 1], j, mu[j], mu[j + 1], qvals[j], frozen, lam)
    return y


@dataclass(frozen=True)
class BasisTable:
    """S and C (and their delta-derivatives) as polynomials per grid point."""

    points: tuple
    mu: tuple
    ia: int
    S: tuple
    C: tuple
    S_delta: tuple
    C_delta: tuple

    @property
    def n(self) -> int:
        return len(self.points)

    def at(self, t):
        """(S, C) at a grid point given by time value."""
        for i, p in enumerate(self.points):
            if p == t:
                return self.S[i], self.C[i]
        raise KeyError(f"{t!r} is not a grid point")


def _scale_data(spec: ProblemSpec, rational: bool):
    """(points, mu, qvals, ia) in the requested coefficient regime."""
    ts = spec.ts
    if not isinstance(ts, FiniteScale):
        raise ValidationError("finite-scale solver needs a finite time scale", field="timescale")
    conv = as_fraction if rational else float
    pts = [conv(p) for p in ts.points]
    mu = [pts[j + 1] - pts[j] for j in range(len(pts) - 1)]
    qvals = [conv(spec.q(t)) for t in ts.points[:-2]]
    ia = ts.index_of(spec.a)
    return pts, mu, qvals, ia


def build_basis(spec: ProblemSpec, rational: bool = False) -> BasisTable:
    """Polynomial tables for S and C at every grid point.

    Seeds at the frozen argument a: S(a) = 0 with S(sigma a) = mu(a), and
    C(a) = C(sigma a) = 1.  Delta-derivatives are forward quotients.
    """
    pts, mu, qvals, ia = _scale_data(spec, rational)
    one = Fraction(1) if rational else 1.0
    zero = Polynomial.constant(one * 0)
    s_vals = _solution_values(mu, qvals, ia, 0, zero, Polynomial.constant(mu[ia]), LAMBDA)
    c_vals = _solution_values(mu, qvals, ia, 1, Polynomial.constant(one), Polynomial.constant(one), LAMBDA)
    s_delta = tuple((s_vals[j + 1] - s_vals[j]) / mu[j] for j in range(len(mu)))
    c_delta = tuple((c_vals[j + 1] - c_vals[j]) / mu[j] for j in range(len(mu)))
    return BasisTable(
        points=tuple(pts),
        mu=tuple(mu),
        ia=ia,
        S=tuple(s_vals),
        C=tuple(c_vals),
        S_delta=s_delta,
        C_delta=c_delta,
    )


def _functional(row, values, mu):
    """Apply one boundary functional to a table of per-point values."""
    n = len(values)
    c1, c2, c3, c4 = row
    y_d_alpha = (values[1] - values[0]) / mu[0]
    y_d_beta = (values[n - 1] - values[n - 2]) / mu[n - 2]
    return values[0] * c1 + y_d_alpha * c2 + values[n - 2] * c3 + y_d_beta * c4


def functional_polys(spec: ProblemSpec, rational: bool = False):
    """(U(C), U(S), V(C), V(S)) as polynomials."""
    basis = build_basis(spec, rational)
    conv = as_fraction if rational else float
    row_a = [conv(c) for c in spec.bc.row_a]
    row_b = [conv(c) for c in spec.bc.row_b]
    uc = _functional(row_a, basis.C, basis.mu)
    us = _functional(row_a, basis.S, basis.mu)
    vc = _functional(row_b, basis.C, basis.mu)
    vs = _functional(row_b, basis.S, basis.mu)
    return uc, us, vc, vs


def char_poly(spec: ProblemSpec, rational: bool = False) -> Polynomial:
    """The characteristic polynomial U(C)V(S) - V(C)U(S).

    The zero polynomial is a legal output (degenerate pencil); callers that
    need eigenvalues must branch on it.
    """
    uc, us, vc, vs = functional_polys(spec, rational)
    return uc * vs - vc * us


def char_value(spec: ProblemSpec, lam: complex) -> complex:
    """Characteristic function evaluated at one numeric lambda.

    Runs the same sweeps with scalar arithmetic; stable for scales far too
    large for coefficient tables.
    """
    _, mu, qvals, ia = _scale_data(spec, rational=False)
    lam = complex(lam)
    s_vals = _solution_values(mu, qvals, ia, 0.0, 0.0 + 0.0j, complex(mu[ia]), lam)
    c_vals = _solution_values(mu, qvals, ia, 1.0, 1.0 + 0.0j, 1.0 + 0.0j, lam)
    row_a = [float(c) for c in spec.bc.row_a]
    row_b = [float(c) for c in spec.bc.row_b]
    uc = _functional(row_a, c_vals, mu)
    us = _functional(row_a, s_vals, mu)
    vc = _functional(row_b, c_vals, mu)
    vs = _functional(row_b, s_vals, mu)
    return uc * vs - vc * us


def det_A(spec: ProblemSpec) -> float:
    """Determinant of the 2x2 boundary combination that controls the count."""
    mu_alpha = spec.ts.mu(spec.ts.alpha)
    return float(spec.bc.det_a(mu_alpha))


def det_A_exact(spec: ProblemSpec):
    """Exact rational determinant, or None when inputs are not rational."""
    if not rationalizable(spec.ts.mu(spec.ts.alpha), *spec.bc.row_a, *spec.bc.row_b):
        return None
    mu_alpha = as_fraction(spec.ts.mu(spec.ts.alpha))
    row_a = [as_fraction(c) for c in spec.bc.row_a]
    row_b = [as_fraction(c) for c in spec.bc.row_b]
    bc = BoundaryCoefficients(*row_a, *row_b)
    return bc.det_a(mu_alpha)


def _det_a_nonzero(spec: ProblemSpec) -> bool:
    exact = det_A_exact(spec)
    if exact is not None:
        return exact != 0
    scale_a = math.hypot(*[float(c) for c in spec.bc.row_a]) or 1.0
    scale_b = math.hypot(*[float(c) for c in spec.bc.row_b]) or 1.0
    return abs(det_A(spec)) > DET_FLOOR * scale_a * scale_b


def predicted_count(spec: ProblemSpec) -> tuple[int, bool]:
    """(n-2, True) when the count is exactly n-2, else (n-2, False).

    The False branch means strictly fewer than n-2 eigenvalues exist.
    The count never depends on the potential or on the frozen argument.
    """
    n = spec.ts.n
    return n - 2, _det_a_nonzero(spec)


def eigs_finite(spec: ProblemSpec, tol: float = 1e-10) -> Spectrum:
    """Roots of the characteristic polynomial, with residual diagnostics.

    Each eigenvalue carries the smallest singular value of the 2x2 boundary
    system evaluated at the root.  Raises ``DegenerateProblemError`` when the
    characteristic function vanishes identically.
    """
    rational = rationalizable(
        *spec.ts.points, *spec.bc.row_a, *spec.bc.row_b, *spec.q_values_kappa2()
    ) and spec.ts.n <= 20
    uc, us, vc, vs = functional_polys(spec, rational)
    delta = uc * vs - vc * us
    if delta.is_zero:
        raise DegenerateProblemError(
            "characteristic function is identically zero: every lambda is an eigenvalue"
        )
    if delta.degree == 0:
        return Spectrum.from_pairs([])
    roots = find_roots(delta, tol)
    residuals = []
    for value, _ in roots.roots:
        system = np.array(
            [[uc(value), us(value)], [vc(value), vs(value)]], dtype=complex
        )
        residuals.append(float(np.linalg.svd(system, compute_uv=False)[-1]))
    return Spectrum.from_pairs(roots.roots, residuals=residuals)


def eigenfunction_weights(spec: ProblemSpec, lam: complex):
    """Null vector (d1, d2) of the boundary system at an eigenvalue.

    The combination d1*C + d2*S is the eigenfunction candidate.
    """
    uc, us, vc, vs = functional_polys(spec, rational=False)
    system = np.array([[uc(lam), us(lam)], [vc(lam), vs(lam)]], dtype=complex)
    _, _, vh = np.linalg.svd(system)
    null = vh[-1].conj()
    return complex(null[0]), complex(null[1])


def wronskian_table(spec: ProblemSpec, rational: bool = False) -> tuple:
    """mu-normalized Wronskian at every right-scattered point.

    Computed from the definition (S^sigma*C - S*C^sigma)/mu; the one-step
    update laws are deliberately left to the tests as an independent check.
    """
    basis = build_basis(spec, rational)
    out = []
    for j in range(basis.n - 1):
        w = basis.S[j + 1] * basis.C[j] - basis.S[j] * basis.C[j + 1]
        out.append(w / basis.mu[j])
    return tuple(out)


# ---------------------------------------------------------------------------
# closed-form leading terms


class LeadingTarget(enum.Enum):
    S_AT_ALPHA = "S_at_alpha"
    S_SIGMA_AT_ALPHA = "S_sigma_at_alpha"
    S_AT_BETA = "S_at_beta"
    S_SIGMA_AT_BETA = "S_sigma_at_beta"
    C_AT_ALPHA = "C_at_alpha"
    C_SIGMA_AT_ALPHA = "C_sigma_at_alpha"
    C_AT_BETA = "C_at_beta"
    C_SIGMA_AT_BETA = "C_sigma_at_beta"
    WRONSKIAN_AT_ALPHA = "wronskian_at_alpha"
    WRONSKIAN_AT_BETA = "wronskian_at_beta"


@dataclass(frozen=True)
class LeadingTermPrediction:
    target: LeadingTarget
    degree: int | None
    coefficient: object
    in_regime: bool


def target_polynomial(basis: BasisTable, target: LeadingTarget) -> Polynomial:
    """The basis-table polynomial a prediction refers to."""
    n = basis.n
    table = {
        LeadingTarget.S_AT_ALPHA: lambda: basis.S[0],
        LeadingTarget.S_SIGMA_AT_ALPHA: lambda: basis.S[1],
        LeadingTarget.S_AT_BETA: lambda: basis.S[n - 2],
        LeadingTarget.S_SIGMA_AT_BETA: lambda: basis.S[n - 1],
        LeadingTarget.C_AT_ALPHA: lambda: basis.C[0],
        LeadingTarget.C_SIGMA_AT_ALPHA: lambda: basis.C[1],
        LeadingTarget.C_AT_BETA: lambda: basis.C[n - 2],
        LeadingTarget.C_SIGMA_AT_BETA: lambda: basis.C[n - 1],
        LeadingTarget.WRONSKIAN_AT_ALPHA: lambda: basis.S[1] * basis.C[0]
        - basis.S[0] * basis.C[1],
        LeadingTarget.WRONSKIAN_AT_BETA: lambda: basis.S[n - 1] * basis.C[n - 2]
        - basis.S[n - 2] * basis.C[n - 1],
    }
    return table[target]()


def predict_leading(spec: ProblemSpec, target: LeadingTarget) -> LeadingTermPrediction:
    """Closed-form (degree, leading coefficient) for a basis-table entry.

    Valid in the regime r >= 3 and m >= 2 only; outside it the prediction
    carries ``in_regime=False`` and no values (no extrapolation).  Graininess
    enters through products over backward/forward jumps from the frozen
    argument; signs alternate with the number of steps.
    """
    ts = spec.ts
    r, m = ts.split_at(spec.a)
    if r < 3 or m < 2:
        return LeadingTermPrediction(target, None, None, in_regime=False)

    rational = rationalizable(*ts.points, *spec.q_values_kappa2())
    conv = as_fraction if rational else float
    pts = [conv(p) for p in ts.points]
    mu = [pts[j + 1] - pts[j] for j in range(len(pts) - 1)]
    ia = ts.index_of(spec.a)
    one = Fraction(1) if rational else 1.0

    def mu_fwd(k):  # graininess k forward jumps above a
        return mu[ia + k]

    def mu_bwd(k):  # graininess k backward jumps below a
        return mu[ia - k]

    def prod(vals):
        out = one
        for v in vals:
            out = out * v
        return out

    q_at = lambda idx: conv(spec.q(ts.points[idx]))

    if target is LeadingTarget.S_AT_ALPHA:
        p = prod(mu_bwd(k) for k in range(2, r + 1))
        return LeadingTermPrediction(target, r - 1, (-1) ** r * mu_bwd(1) * p * p, True)
    if target is LeadingTarget.S_SIGMA_AT_ALPHA:
        p = prod(mu_bwd(k) for k in range(2, r))
        return LeadingTermPrediction(target, r - 2, (-1) ** (r - 1) * mu_bwd(1) * p * p, True)
    if target is LeadingTarget.S_AT_BETA:
        p = prod(mu_fwd(k) for k in range(0, m - 2))
        return LeadingTermPrediction(target, m - 2, (-1) ** m * p * p * mu_fwd(m - 2), True)
    if target is LeadingTarget.S_SIGMA_AT_BETA:
        p = prod(mu_fwd(k) for k in range(0, m - 1))
        return LeadingTermPrediction(target, m - 1, (-1) ** (m + 1) * p * p * mu_fwd(m - 1), True)
    if target is LeadingTarget.C_AT_ALPHA:
        p = prod(mu_bwd(k) for k in range(1, r + 1))
        return LeadingTermPrediction(target, r, (-1) ** r * p * p, True)
    if target is LeadingTarget.C_SIGMA_AT_ALPHA:
        p = prod(mu_bwd(k) for k in range(1, r))
        return LeadingTermPrediction(target, r - 1, (-1) ** (r - 1) * p * p, True)
    if target is LeadingTarget.C_AT_BETA:
        if m == 2:
            # C at beta is then C one step above a, identically 1
            return LeadingTermPrediction(target, 0, one, True)
        p = prod(mu_fwd(k) for k in range(1, m - 2))
        coef = (-1) ** m * mu_fwd(0) * p * p * mu_fwd(m - 2)
        return LeadingTermPrediction(target, m - 2, coef, True)
    if target is LeadingTarget.C_SIGMA_AT_BETA:
        p = prod(mu_fwd(k) for k in range(1, m - 1))
        coef = (-1) ** (m + 1) * mu_fwd(0) * p * p * mu_fwd(m - 1)
        return LeadingTermPrediction(target, m - 1, coef, True)
    if target is LeadingTarget.WRONSKIAN_AT_ALPHA:
        p = prod(mu_bwd(k) for k in range(2, r))
        coef = (-1) ** (r - 1) * mu[0] * mu_bwd(1) * p * p * mu_bwd(r) * q_at(0)
        return LeadingTermPrediction(target, r - 2, coef, True)
    if target is LeadingTarget.WRONSKIAN_AT_BETA:
        n = ts.n
        if m == 2:
            coef = mu[n - 2] * (one - mu[ia] * mu[ia] * q_at(ia))
            return LeadingTermPrediction(target, 0, coef, True)
        p = prod(mu_fwd(k) for k in range(0, m - 1))
        coef = (-1) ** (m - 1) * mu[n - 2] * p * p * q_at(n - 3)
        return LeadingTermPrediction(target, m - 2, coef, True)
    raise ValueError(f"unknown target {target!r}")
