import math
import random
from fractions import Fraction

import numpy as np
import pytest

from frozen_sl.errors import ValidationError
from frozen_sl.finite import eigs_finite
from frozen_sl.matrixform import (
    DenseMatrix,
    bc_to_general,
    build_Q,
    char_poly_dense,
    eigs_dense,
    qr_eigvals,
    reconstruct_sequence,
)
from frozen_sl.problem import (
    ConstantPotential,
    ProblemSpec,
    SeparatedBC,
    TablePotential,
    match_distance,
)
from frozen_sl.timescale import FiniteScale


def uniform_spec(n, h, H, qvals, a):
    ts = FiniteScale(list(range(n)))
    sep = SeparatedBC(h=h, H=H)
    q = TablePotential(tuple((t, qvals[t]) for t in range(n - 2)))
    return ProblemSpec(ts=ts, a=a, q=q, bc=bc_to_general(sep), separated=sep)


def test_build_q_defective_example():
    Q = build_Q(6, SeparatedBC(h=Fraction(1, 2), H=1), [-3, 10, -5, 1], 3)
    want = [[0, -1, -3, 0], [-1, 2, 9, 0], [0, -1, -3, -1], [0, 0, 0, 0]]
    assert [[float(x) for x in row] for row in Q.entries] == want


def test_build_q_simple_example():
    Q = build_Q(6, SeparatedBC(h=0, H=0), [0, 1, 2, 3], 4)
    want = [[1, -1, 0, 0], [-1, 2, -1, 1], [0, -1, 2, 1], [0, 0, -1, 4]]
    assert [[float(x) for x in row] for row in Q.entries] == want


def test_build_q_flat_potential():
    Q = build_Q(4, SeparatedBC(h=0, H=0), [0, 0], 1)
    assert [[float(x) for x in row] for row in Q.entries] == [[1, -1], [-1, 1]]


def test_build_q_rejects_unit_h():
    with pytest.raises(ValidationError, match="characteristic-polynomial path"):
        build_Q(6, SeparatedBC(h=1, H=0), [0, 0, 0, 0], 2)


def test_build_q_rejects_out_of_range_column():
    with pytest.raises(ValidationError, match="polynomial path"):
        build_Q(6, SeparatedBC(h=0, H=0), [1, 1, 1, 1], 0)
    with pytest.raises(ValidationError):
        build_Q(6, SeparatedBC(h=0, H=0), [1, 1, 1, 1], 5)


def test_left_endpoint_column_extension_matches_recurrence_path():
    # a = 0 folds the potential column through the left elimination; the
    # characteristic-polynomial route is the reference
    n, h, H = 6, Fraction(1, 3), Fraction(2)
    qvals = [3, -1, 2, 5]
    Q = build_Q(n, SeparatedBC(h=h, H=H), qvals, 0, allow_frozen_left=True)
    sm = eigs_dense(Q)
    sp = eigs_finite(uniform_spec(n, h, H, qvals, 0))
    assert match_distance(sm, sp) < 1e-8


def test_eigs_dense_defective_example_both_methods():
    Q = build_Q(6, SeparatedBC(h=Fraction(1, 2), H=1), [-3, 10, -5, 1], 3)
    want = [0.0, 0.0, complex(-0.5, math.sqrt(7) / 2), complex(-0.5, -math.sqrt(7) / 2)]
    for method in ("charpoly", "qr"):
        sp = eigs_dense(Q, method=method)
        assert match_distance(sp, want) < 1e-8


def test_eigs_dense_simple_example():
    Q = build_Q(6, SeparatedBC(h=0, H=0), [0, 1, 2, 3], 4)
    want = [2 + math.sqrt(3), 2 - math.sqrt(3), 3.0, 2.0]
    assert match_distance(eigs_dense(Q), want) < 1e-10
    # trace identity
    assert abs(float(Q.trace()) - sum(want)) < 1e-10
    assert float(Q.trace()) == 9


def test_eigs_dense_two_by_two():
    sp = eigs_dense(DenseMatrix(((1, -1), (-1, 1))))
    assert match_distance(sp, [0.0, 2.0]) < 1e-12


def test_char_poly_dense_matches_determinant_sampling():
    rng = np.random.default_rng(3)
    for _ in range(6):
        d = int(rng.integers(2, 7))
        M = DenseMatrix(tuple(tuple(int(x) for x in row)
                              for row in rng.integers(-5, 6, (d, d))))
        p = char_poly_dense(M)
        A = M.to_numpy()
        for x in (-1.5, 0.3, 2.0):
            want = np.linalg.det(x * np.eye(d) - A)
            assert abs(float(p(x)) - want) < 1e-6 * max(1.0, abs(want))


def test_qr_route_matches_numpy_on_larger_matrices():
    rng = np.random.default_rng(14)
    for _ in range(5):
        A = rng.uniform(-3, 3, (16, 16))
        got = qr_eigvals(A.copy())
        want = np.linalg.eigvals(A)
        assert match_distance(got, list(want)) < 1e-8


def test_methods_agree_on_random_integer_matrices():
    rng = np.random.default_rng(8)
    for _ in range(10):
        d = int(rng.integers(2, 9))
        M = DenseMatrix(tuple(tuple(int(x) for x in row)
                              for row in rng.integers(-9, 10, (d, d))))
        s1 = eigs_dense(M, method="charpoly")
        s2 = eigs_dense(M, method="qr")
        assert match_distance(s1, s2) < 1e-7


def test_matrix_and_recurrence_spectra_agree():
    rng = random.Random(42)
    for _ in range(30):
        n = rng.randint(4, 10)
        h = rng.choice([0, 2, -1, Fraction(1, 2), Fraction(-3, 2)])
        H = rng.randint(-4, 4)
        qvals = [rng.randint(-9, 9) for _ in range(n - 2)]
        a = rng.randint(1, n - 2)
        Q = build_Q(n, SeparatedBC(h=h, H=H), qvals, a)
        sm = eigs_dense(Q)
        sp = eigs_finite(uniform_spec(n, h, H, qvals, a))
        assert match_distance(sm, sp) < 1e-6


def test_eigenvector_reconstruction_satisfies_difference_equation():
    rng = np.random.default_rng(19)
    n, h, H, a = 8, 0.25, -2.0, 3
    qvals = [int(x) for x in rng.integers(-6, 7, n - 2)]
    bc = SeparatedBC(h=h, H=H)
    Q = build_Q(n, bc, qvals, a)
    A = Q.to_numpy()
    values, vectors = np.linalg.eig(A)
    for k, lam in enumerate(values):
        y = reconstruct_sequence(Q, vectors[:, k], bc)
        norm = np.linalg.norm(y)
        for t in range(n - 2):
            res = y[t + 2] - 2 * y[t + 1] + y[t] - qvals[t] * y[a] + lam * y[t + 1]
            assert abs(res) <= 1e-8 * norm


def test_defective_and_simple_witnesses():
    # separated boundary data can still produce non-real or repeated
    # eigenvalues; both behaviors are witnessed by the two worked examples
    sp1 = eigs_dense(build_Q(6, SeparatedBC(h=Fraction(1, 2), H=1), [-3, 10, -5, 1], 3))
    assert any(abs(e.value.imag) > 1e-6 for e in sp1.eigenvalues)
    assert any(e.multiplicity > 1 for e in sp1.eigenvalues)
    sp2 = eigs_dense(build_Q(6, SeparatedBC(h=0, H=0), [0, 1, 2, 3], 4))
    assert all(abs(e.value.imag) < 1e-9 for e in sp2.eigenvalues)
    assert all(e.multiplicity == 1 for e in sp2.eigenvalues)


def test_bc_translation_shape():
    bc = bc_to_general(SeparatedBC(h=Fraction(1, 2), H=1))
    assert bc.row_a == (Fraction(1, 2), 1, 0, 0)
    assert bc.row_b[0] == 0 and bc.row_b[1] == 0 and bc.row_b[3] == 1
    # right-row sign is fixed by agreement of the two solver paths
    spec = uniform_spec(6, Fraction(1, 2), 1, [-3, 10, -5, 1], 3)
    assert match_distance(
        eigs_finite(spec),
        eigs_dense(build_Q(6, SeparatedBC(h=Fraction(1, 2), H=1), [-3, 10, -5, 1], 3)),
    ) < 1e-8


def test_dense_matrix_validation():
    with pytest.raises(ValidationError):
        DenseMatrix(((1, 2),))
