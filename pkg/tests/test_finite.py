"""Finite-scale solver tests.

The heavier randomized suites (200-instance count law, 100-instance matrix
equivalence) live in test_acceptance; here each law is exercised on enough
random instances to catch sign and indexing mistakes quickly.
"""
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from frozen_sl import finite
from frozen_sl.errors import DegenerateProblemError, ValidationError
from frozen_sl.finite import (
    LeadingTarget,
    build_basis,
    char_poly,
    char_value,
    det_A,
    det_A_exact,
    eigs_finite,
    predict_leading,
    predicted_count,
    step_backward,
    step_forward,
    target_polynomial,
    wronskian_table,
)
from frozen_sl.matrixform import bc_to_general
from frozen_sl.poly import Polynomial, ZERO_DEGREE
from frozen_sl.problem import (
    BoundaryCoefficients,
    ConstantPotential,
    PolynomialPotential,
    ProblemSpec,
    SeparatedBC,
    TablePotential,
    match_distance,
)
from frozen_sl.timescale import FiniteScale

LAM = Polynomial([0, 1])
NEUMANN_ROWS = BoundaryCoefficients(0, 1, 0, 0, 0, 0, 0, 1)


def example_defective():
    """Unit grid 0..5, frozen argument 3, sign-mixed table potential."""
    ts = FiniteScale([0, 1, 2, 3, 4, 5])
    q = TablePotential(((0, -3), (1, 10), (2, -5), (3, 1)))
    sep = SeparatedBC(h=Fraction(1, 2), H=1)
    return ProblemSpec(ts=ts, a=3, q=q, bc=bc_to_general(sep), separated=sep)


def example_simple():
    """Unit grid 0..5, frozen argument 4, q(t) = t, derivative-only rows."""
    ts = FiniteScale([0, 1, 2, 3, 4, 5])
    sep = SeparatedBC(h=0, H=0)
    return ProblemSpec(ts=ts, a=4, q=PolynomialPotential((0, 1)), bc=bc_to_general(sep),
                       separated=sep)


def random_rational_spec(rng, n_lo=4, n_hi=12, r_min=0, m_min=1, q_nonzero=False):
    n = rng.randint(n_lo, n_hi)
    while True:
        ia = rng.randint(0, n - 2)
        if ia >= r_min and (n - 1 - ia) >= m_min:
            break
    mus = [Fraction(rng.randint(1, 6), rng.choice([1, 2, 3])) for _ in range(n - 1)]
    pts = [Fraction(0)]
    for m in mus:
        pts.append(pts[-1] + m)
    qpairs = []
    for j in range(n - 2):
        val = Fraction(rng.randint(1, 5) if q_nonzero else rng.randint(-5, 5),
                       rng.choice([1, 2]))
        if q_nonzero:
            val *= rng.choice([1, -1])
        qpairs.append((pts[j], val))
    while True:
        rows = [Fraction(rng.randint(-4, 4)) for _ in range(8)]
        if any(rows[:4]) or any(rows[4:]):
            break
    bc = BoundaryCoefficients(*rows)
    ts = FiniteScale(pts)
    return ProblemSpec(ts=ts, a=pts[ia], q=TablePotential(tuple(qpairs)), bc=bc)


# ---------------------------------------------------------------------------
# stepping


def test_forward_step_matches_unit_grid_elimination():
    got = step_forward(Polynomial([0]), Polynomial([1]), 0, 1, 1, 7.0, 0)
    assert got == Polynomial([2.0, -1.0])


def test_forward_step_forced_branch():
    qa = 5
    got = step_forward(Polynomial([1]), Polynomial([1]), 0, 1, 1, qa, 1)
    assert got == Polynomial([1 + qa, -1])


def test_backward_step_inverts_forward():
    got = step_backward(Polynomial([1]), Polynomial([0]), 0, 1, 1, 0.0, 0)
    assert got == Polynomial([-1.0])


def test_steps_reject_degenerate_graininess():
    with pytest.raises(ValidationError):
        step_forward(Polynomial([0]), Polynomial([1]), 0, 0, 1, 0.0, 0)
    with pytest.raises(ValidationError):
        step_backward(Polynomial([0]), Polynomial([1]), 0, 1, 0, 0.0, 0)


def test_forward_leading_terms_on_scattered_grid():
    # S-branch leading term after j forward steps from (0, mu(a)):
    # sign (-1)^(j+1), squared product of the first j-1 graininesses,
    # one factor of the j-th, degree j-1
    rng = random.Random(2)
    mus = [Fraction(rng.randint(1, 7), rng.choice([1, 2])) for _ in range(6)]
    y_prev, y_cur = Polynomial([Fraction(0)]), Polynomial([mus[0]])
    for j in range(2, 6):
        y_prev, y_cur = y_cur, step_forward(
            y_prev, y_cur, j, mus[j - 2], mus[j - 1], Fraction(rng.randint(-5, 5)), 0
        )
        prod = Fraction(1)
        for k in range(j - 1):
            prod *= mus[k]
        assert y_cur.degree == j - 1
        assert y_cur.leading == (-1) ** (j + 1) * prod * prod * mus[j - 1]


def test_backward_leading_terms_on_scattered_grid():
    # C-branch backward: degree k with leading (-1)^k (mu_rho...mu_rho^k)^2
    rng = random.Random(9)
    r = 4
    mus = [Fraction(rng.randint(1, 7), rng.choice([1, 2])) for _ in range(r + 1)]
    # index ia = r, backward graininess mu_bwd(k) = mus[r-k]
    qv = {j: Fraction(rng.randint(-5, 5)) for j in range(r)}
    y = {r: Polynomial([Fraction(1)]), r + 1: Polynomial([Fraction(1)])}
    for j in range(r - 1, -1, -1):
        y[j] = step_backward(y[j + 2], y[j + 1], j, mus[j], mus[j + 1], qv[j], 1)
        k = r - j
        prod = Fraction(1)
        for i in range(1, k + 1):
            prod *= mus[r - i]
        assert y[j].degree == k
        assert y[j].leading == (-1) ** k * prod * prod


# ---------------------------------------------------------------------------
# basis tables


def test_basis_seeds_and_known_values():
    spec = example_defective()
    basis = build_basis(spec, rational=True)
    assert basis.S[basis.ia] == Polynomial([Fraction(0)])
    assert basis.C[basis.ia] == Polynomial([Fraction(1)])
    assert basis.S_delta[basis.ia] == Polynomial([Fraction(1)])
    assert basis.C_delta[basis.ia] == Polynomial([Fraction(0)])
    # unit grid, a=3: S(4) = 1, S(5) = 2 - lambda, independent of q
    assert basis.S[4] == Polynomial([Fraction(1)])
    assert basis.S[5] == Polynomial([Fraction(2), Fraction(-1)])
    assert basis.S[5].degree == 1 and basis.S[5].leading == -1


def test_s_branch_ignores_potential():
    ts = FiniteScale([0, 1, 2, 3, 4, 5])
    sep = SeparatedBC(h=0, H=0)
    a_spec = ProblemSpec(ts=ts, a=3, q=ConstantPotential(0), bc=bc_to_general(sep))
    b_spec = ProblemSpec(ts=ts, a=3, q=TablePotential(((0, 9), (1, -4), (2, 2), (3, 1))),
                         bc=bc_to_general(sep))
    sa = build_basis(a_spec, rational=True)
    sb = build_basis(b_spec, rational=True)
    assert sa.S == sb.S
    assert sa.C != sb.C


def test_sigma_shift_identity_holds_tablewide():
    spec = random_rational_spec(random.Random(4))
    basis = build_basis(spec, rational=True)
    for j in range(basis.n - 1):
        lhs = basis.S[j + 1]
        rhs = basis.S[j] + basis.S_delta[j] * basis.mu[j]
        assert (lhs - rhs).is_zero


# ---------------------------------------------------------------------------
# characteristic polynomial and spectra


def test_char_poly_second_example_exact():
    spec = example_simple()
    delta = char_poly(spec, rational=True)
    assert delta.degree == 4
    roots = sorted(e.value.real for e in eigs_finite(spec).eigenvalues)
    want = sorted([2 - math.sqrt(3), 2.0, 3.0, 2 + math.sqrt(3)])
    assert max(abs(a - b) for a, b in zip(roots, want)) < 1e-10


def test_identical_rows_give_identically_zero_char_poly():
    ts = FiniteScale([0, 1, 2, 3, 4, 5])
    bc = BoundaryCoefficients(1, 2, 0, 1, 1, 2, 0, 1)
    spec = ProblemSpec(ts=ts, a=3, q=ConstantPotential(1), bc=bc)
    assert char_poly(spec, rational=True).is_zero
    with pytest.raises(DegenerateProblemError):
        eigs_finite(spec)


def test_minimal_grid_with_derivative_rows():
    ts = FiniteScale([0, 1, 2, 3])
    sep = SeparatedBC(h=0, H=0)
    spec = ProblemSpec(ts=ts, a=1, q=ConstantPotential(0), bc=bc_to_general(sep), separated=sep)
    sp = eigs_finite(spec)
    assert match_distance(sp, [0.0, 2.0]) < 1e-10


def test_char_value_agrees_with_char_poly():
    spec = random_rational_spec(random.Random(12))
    delta = char_poly(spec, rational=True)
    for lam in (0.3, -1.7, 2.0 + 0.5j):
        dense = char_value(spec, lam)
        assert abs(dense - complex(delta(lam))) <= 1e-9 * (1 + abs(dense))


def test_det_a_for_separated_rows():
    for h in (Fraction(1, 2), 1, -3):
        sep = SeparatedBC(h=h, H=2)
        spec = ProblemSpec(
            ts=FiniteScale([0, 1, 2, 3, 4, 5]),
            a=3,
            q=ConstantPotential(0),
            bc=bc_to_general(sep),
            separated=sep,
        )
        assert det_A_exact(spec) == h - 1
        assert abs(det_A(spec) - (float(h) - 1)) < 1e-15


def test_predicted_count():
    spec = example_defective()
    assert predicted_count(spec) == (4, True)
    sep1 = SeparatedBC(h=1, H=1)
    spec1 = ProblemSpec(ts=spec.ts, a=3, q=spec.q, bc=bc_to_general(sep1), separated=sep1)
    assert predicted_count(spec1) == (4, False)
    # and the polynomial degree indeed drops below n-2
    assert char_poly(spec1, rational=True).degree < 4
    ts3 = FiniteScale([0, 1, 2])
    sep0 = SeparatedBC(h=0, H=0)
    spec3 = ProblemSpec(ts=ts3, a=1, q=ConstantPotential(0), bc=bc_to_general(sep0),
                        separated=sep0)
    assert predicted_count(spec3) == (1, True)


def test_eigs_defective_example_multiplicity():
    sp = eigs_finite(example_defective())
    zero = [e for e in sp.eigenvalues if abs(e.value) < 1e-8]
    assert len(zero) == 1 and zero[0].multiplicity == 2
    complex_pair = sorted((e.value for e in sp.eigenvalues if abs(e.value.imag) > 0.1),
                          key=lambda z: z.imag)
    assert abs(complex_pair[0] - complex(-0.5, -math.sqrt(7) / 2)) < 1e-8
    assert abs(complex_pair[1] - complex(-0.5, math.sqrt(7) / 2)) < 1e-8
    assert sp.count == 4
    assert max(e.residual for e in sp.eigenvalues) < 1e-8


def test_count_law_mini_fuzz():
    rng = random.Random(77)
    for _ in range(30):
        spec = random_rational_spec(rng)
        delta = char_poly(spec, rational=True)
        n = spec.ts.n
        deg = delta.degree if not delta.is_zero else ZERO_DEGREE
        if det_A_exact(spec) != 0:
            assert deg == n - 2
        else:
            assert deg < n - 2


def test_count_independent_of_potential_and_frozen_argument():
    rng = random.Random(31)
    ts = FiniteScale([Fraction(0), Fraction(1, 2), Fraction(2), Fraction(3), Fraction(7, 2)])
    bc = BoundaryCoefficients(1, 2, -1, 3, 0, 1, 2, -2)
    assert bc.det_a(Fraction(1, 2)) != 0
    degrees = set()
    for _ in range(20):
        a = ts.points[rng.randint(0, ts.n - 2)]
        q = TablePotential(tuple((p, Fraction(rng.randint(-5, 5))) for p in ts.points[:-2]))
        spec = ProblemSpec(ts=ts, a=a, q=q, bc=bc)
        degrees.add(char_poly(spec, rational=True).degree)
    assert degrees == {ts.n - 2}


def test_eigenpairs_satisfy_equation_and_boundary_rows():
    rng = random.Random(5)
    spec = random_rational_spec(rng, n_lo=5, n_hi=8)
    while det_A_exact(spec) == 0 or spec.bc.rows_dependent():
        spec = random_rational_spec(rng, n_lo=5, n_hi=8)
    sp = eigs_finite(spec)
    basis = build_basis(spec, rational=False)
    mu = [float(m) for m in basis.mu]
    pts = spec.ts.points
    for e in sp.eigenvalues:
        lam = e.value
        d1, d2 = finite.eigenfunction_weights(spec, lam)
        y = [d1 * complex(basis.C[j](lam)) + d2 * complex(basis.S[j](lam))
             for j in range(basis.n)]
        scale = (1 + abs(lam)) * max(1.0, max(abs(v) for v in y))
        for j in range(basis.n - 2):
            ydd = ((y[j + 2] - y[j + 1]) / mu[j + 1] - (y[j + 1] - y[j]) / mu[j]) / mu[j]
            res = -ydd + float(spec.q(pts[j])) * y[basis.ia] - lam * y[j + 1]
            assert abs(res) <= 1e-6 * scale
        for row in (spec.bc.row_a, spec.bc.row_b):
            c1, c2, c3, c4 = [float(c) for c in row]
            val = (c1 * y[0] + c2 * (y[1] - y[0]) / mu[0]
                   + c3 * y[basis.n - 2]
                   + c4 * (y[basis.n - 1] - y[basis.n - 2]) / mu[basis.n - 2])
            assert abs(val) <= 1e-6 * scale


def test_spectrum_conjugate_closure():
    sp = eigs_finite(example_defective())
    vals = sp.expanded()
    assert match_distance(vals, [v.conjugate() for v in vals]) < 1e-8


# ---------------------------------------------------------------------------
# Wronskian tables


def test_wronskian_normalization_and_flat_case():
    spec = example_defective()
    phi = wronskian_table(spec, rational=True)
    assert phi[spec.ts.index_of(spec.a)] == Polynomial([Fraction(1)])
    flat = ProblemSpec(ts=spec.ts, a=3, q=ConstantPotential(0), bc=spec.bc)
    for p in wronskian_table(flat, rational=True):
        assert p == Polynomial([Fraction(1)])


def test_wronskian_one_step_updates_exactly():
    rng = random.Random(8)
    for _ in range(10):
        spec = random_rational_spec(rng)
        basis = build_basis(spec, rational=True)
        phi = wronskian_table(spec, rational=True)
        qv = [Fraction(spec.q(p)) for p in spec.ts.points[:-2]]
        n = basis.n
        for j in range(n - 2):
            forward = phi[j] - basis.mu[j] * qv[j] * basis.S[j + 1]
            assert (phi[j + 1] - forward).is_zero
        for j in range(1, n - 1):
            backward = phi[j] + basis.mu[j - 1] * qv[j - 1] * basis.S[j]
            assert (phi[j - 1] - backward).is_zero


# ---------------------------------------------------------------------------
# leading-term predictions


def test_leading_prediction_regime_flag():
    ts = FiniteScale([0, 1, 2, 3, 4, 5])
    spec = ProblemSpec(ts=ts, a=2, q=ConstantPotential(1), bc=NEUMANN_ROWS)
    # r = 2 here
    pred = predict_leading(spec, LeadingTarget.S_AT_ALPHA)
    assert not pred.in_regime and pred.degree is None


def test_leading_prediction_uniform_examples():
    ts = FiniteScale([0, 1, 2, 3, 4, 5])  # a=3: r=3, m=2
    q = TablePotential(((0, 2), (1, -1), (2, 3), (3, 5)))
    spec = ProblemSpec(ts=ts, a=3, q=q, bc=NEUMANN_ROWS)
    pred = predict_leading(spec, LeadingTarget.S_AT_ALPHA)
    assert (pred.degree, pred.coefficient) == (2, -1)
    wa = predict_leading(spec, LeadingTarget.WRONSKIAN_AT_ALPHA)
    # unit graininess: degree r-2 = 1 and coefficient +q(alpha)
    assert (wa.degree, wa.coefficient) == (1, 2)
    basis = build_basis(spec, rational=True)
    got = target_polynomial(basis, LeadingTarget.WRONSKIAN_AT_ALPHA)
    assert got.degree == 1 and got.leading == 2


def test_all_leading_predictions_match_tables():
    rng = random.Random(123)
    checked = 0
    while checked < 15:
        spec = random_rational_spec(rng, n_lo=6, n_hi=11, r_min=3, m_min=2, q_nonzero=True)
        r, m = spec.ts.split_at(spec.a)
        if m == 2:
            ia = spec.ts.index_of(spec.a)
            mu_a = spec.ts.points[ia + 1] - spec.ts.points[ia]
            if 1 - mu_a * mu_a * spec.q(spec.a) == 0:
                continue
        basis = build_basis(spec, rational=True)
        for target in LeadingTarget:
            pred = predict_leading(spec, target)
            assert pred.in_regime
            got = target_polynomial(basis, target)
            assert got.degree == pred.degree, (target, r, m)
            assert got.leading == pred.coefficient, (target, r, m)
        checked += 1


def test_degree_products_in_generic_regime():
    rng = random.Random(6)
    for _ in range(10):
        spec = random_rational_spec(rng, n_lo=5, n_hi=10, r_min=1, m_min=2, q_nonzero=True)
        r, m = spec.ts.split_at(spec.a)
        basis = build_basis(spec, rational=True)
        top = (basis.C[0] * basis.S[basis.n - 1]).degree
        assert top == r + m - 1
        w_alpha = target_polynomial(basis, LeadingTarget.WRONSKIAN_AT_ALPHA)
        w_beta = target_polynomial(basis, LeadingTarget.WRONSKIAN_AT_BETA)
        assert w_alpha.degree < top
        assert w_beta.degree < top
