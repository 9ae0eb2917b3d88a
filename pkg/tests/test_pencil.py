"""Tests for the pencil module.

Expected values come from tests/oracles.py (cofactor expansion, the
quadratic formula) or from hand computation on matrices small enough to do
on paper; the Weierstrass factors are judged by their defining block
equations rather than by comparing against any particular basis choice.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from pencilbox.exceptions import (
    IrregularPencil,
    NonSquarePencil,
    NumericalBreakdown,
    UnsupportedJordanStructure,
)
from pencilbox.pencil import (
    MatrixPencil,
    RegularityVerdict,
    eigenstructure,
    is_regular,
    matrix_rank,
    null_space,
    pencil_det_poly,
    weierstrass_decompose,
)

from oracles import det_poly_cofactor, quadratic_roots

A_GRID = [round(0.1 * i, 1) for i in range(1, 10)]
B_GRID = [0.25, 0.5, 1.0, 2.0, 4.0]


def samuelson_pencil(a, b):
    F = [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -b, 1.0]]
    G = [[-1.0, 1.0, 1.0], [a, 0.0, 0.0], [0.0, -b, 0.0]]
    return MatrixPencil(F, G)


# The pencil [[s, -1], [-1, 0]] has constant determinant -1: no finite
# eigenvalues, double infinite eigenvalue with a length-2 nilpotent chain.
INDEX2_F = [[1.0, 0.0], [0.0, 0.0]]
INDEX2_G = [[0.0, 1.0], [1.0, 0.0]]


def small_regular_pencils():
    return [
        ("identity3", MatrixPencil(np.eye(3), np.diag([1.0, 2.0, 3.0]))),
        ("diag2", MatrixPencil(np.eye(2), np.diag([2.0, 3.0]))),
        ("index2", MatrixPencil(INDEX2_F, INDEX2_G)),
        ("samuelson", samuelson_pencil(0.5, 1.0)),
        ("mixed3", MatrixPencil(np.diag([1.0, 1.0, 0.0]), np.diag([2.0, 3.0, 1.0]))),
        ("scalar", MatrixPencil([[2.0]], [[5.0]])),
    ]


class TestMatrixPencil:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            MatrixPencil(np.eye(2), np.eye(3))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            MatrixPencil([[np.inf]], [[1.0]])
        with pytest.raises(ValueError):
            MatrixPencil([[1.0]], [[np.nan]])

    def test_entries_frozen(self):
        pencil = samuelson_pencil(0.5, 1.0)
        with pytest.raises(ValueError):
            pencil.F[0, 0] = 9.0

    def test_at_evaluates_pencil(self):
        pencil = MatrixPencil(np.eye(2), np.diag([2.0, 3.0]))
        assert_allclose(pencil.at(1.0), np.diag([-1.0, -2.0]))


class TestDetPoly:
    def test_identity_pencil_cubic(self):
        # det(s I - diag(1,2,3)) = (s-1)(s-2)(s-3) = -6 + 11 s - 6 s^2 + s^3
        poly = pencil_det_poly(MatrixPencil(np.eye(3), np.diag([1.0, 2.0, 3.0])))
        assert poly.degree == 3
        assert_allclose(poly.coefficients, [-6.0, 11.0, -6.0, 1.0], atol=1e-12)

    def test_index2_pencil_constant(self):
        poly = pencil_det_poly(MatrixPencil(INDEX2_F, INDEX2_G))
        assert poly.degree == 0
        assert_allclose(poly.coefficients, [-1.0], atol=1e-13)

    @pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
    @pytest.mark.parametrize("b", B_GRID)
    def test_samuelson_quadratic(self, a, b):
        poly = pencil_det_poly(samuelson_pencil(a, b))
        assert poly.degree == 2
        expected = np.array([a * b, -a * (1.0 + b), 1.0])
        assert_allclose(poly.coefficients, expected, rtol=1e-12)

    @pytest.mark.parametrize("name,pencil", small_regular_pencils())
    def test_matches_cofactor_expansion(self, name, pencil):
        oracle = det_poly_cofactor(pencil.F, pencil.G)
        poly = pencil_det_poly(pencil)
        computed = np.zeros(len(oracle))
        computed[: poly.degree + 1] = poly.coefficients
        scale = np.max(np.abs(oracle))
        assert_allclose(computed, oracle, atol=1e-12 * scale)

    def test_non_square_raises(self):
        with pytest.raises(NonSquarePencil):
            pencil_det_poly(MatrixPencil(np.zeros((2, 3)), np.ones((2, 3))))

    def test_evaluate(self):
        poly = pencil_det_poly(samuelson_pencil(0.5, 1.0))
        # d(s) = 0.5 - s + s^2, d(2) = 2.5
        assert abs(poly(2.0) - 2.5) < 1e-12

    def test_overflow_breaks_down(self):
        big = 1e200
        pencil = MatrixPencil(big * np.eye(3), big * np.diag([1.0, 2.0, 3.0]))
        with np.errstate(over="ignore"), pytest.raises(NumericalBreakdown):
            pencil_det_poly(pencil)


class TestRegularity:
    def test_rectangular_is_singular_shape(self):
        verdict = is_regular(MatrixPencil(np.zeros((2, 3)), np.ones((2, 3))))
        assert verdict is RegularityVerdict.SINGULAR_SHAPE

    def test_zero_determinant_is_singular(self):
        verdict = is_regular(MatrixPencil([[0.0]], [[0.0]]))
        assert verdict is RegularityVerdict.SINGULAR_DETERMINANT

    def test_shared_null_direction_is_singular(self):
        # F and G share a zero column, so det(sF - G) == 0 identically.
        F = [[1.0, 0.0], [0.0, 0.0]]
        G = [[3.0, 0.0], [1.0, 0.0]]
        assert is_regular(MatrixPencil(F, G)) is RegularityVerdict.SINGULAR_DETERMINANT

    @pytest.mark.parametrize("name,pencil", small_regular_pencils())
    def test_corpus_is_regular(self, name, pencil):
        assert is_regular(pencil) is RegularityVerdict.REGULAR


class TestRowReduction:
    def test_rank_of_samuelson_F(self):
        pencil = samuelson_pencil(0.5, 1.0)
        assert matrix_rank(pencil.F) == 2

    def test_null_space_of_samuelson_F(self):
        kernel = null_space(samuelson_pencil(0.7, 2.0).F)
        assert kernel.shape == (3, 1)
        assert_allclose(kernel[:, 0], [1.0, 0.0, 0.0])

    def test_full_rank_matrix_has_empty_null_space(self):
        assert null_space(np.eye(3)).shape == (3, 0)

    def test_rank_with_tiny_noise(self):
        A = np.array([[1.0, 2.0], [2.0, 4.0 + 1e-14]])
        assert matrix_rank(A) == 1


class TestEigenstructure:
    def test_diag_pencil(self):
        es = eigenstructure(MatrixPencil(np.eye(2), np.diag([2.0, 3.0])))
        assert es.p == 2 and es.q == 0
        values = [g.value for g in es.finite_eigenvalues]
        assert_allclose(values, [2.0, 3.0], atol=1e-12)
        assert all(g.multiplicity == 1 for g in es.finite_eigenvalues)

    def test_index2_pencil_all_infinite(self):
        es = eigenstructure(MatrixPencil(INDEX2_F, INDEX2_G))
        assert es.p == 0 and es.q == 2
        assert es.finite_eigenvalues == ()

    def test_samuelson_complex_pair(self):
        es = eigenstructure(samuelson_pencil(0.5, 1.0))
        assert es.p == 2 and es.q == 1
        values = sorted((g.value for g in es.finite_eigenvalues), key=lambda z: z.imag)
        assert_allclose(values[0], 0.5 - 0.5j, atol=1e-10)
        assert_allclose(values[1], 0.5 + 0.5j, atol=1e-10)

    def test_conjugate_closure(self):
        es = eigenstructure(samuelson_pencil(0.3, 4.0))
        values = [g.value for g in es.finite_eigenvalues]
        for z in values:
            assert any(abs(w - z.conjugate()) < 1e-9 for w in values)

    @pytest.mark.parametrize("a", A_GRID)
    @pytest.mark.parametrize("b", B_GRID)
    def test_vieta_against_quadratic_formula(self, a, b):
        es = eigenstructure(samuelson_pencil(a, b))
        assert es.p == 2 and es.q == 1
        s_sum = sum(g.value * g.multiplicity for g in es.finite_eigenvalues)
        s_prod = np.prod([g.value**g.multiplicity for g in es.finite_eigenvalues])
        assert abs(s_sum - a * (1 + b)) <= 1e-12 * abs(a * (1 + b))
        assert abs(s_prod - a * b) <= 1e-12 * abs(a * b)
        s1, s2, _ = quadratic_roots(a, b)
        got = sorted((g.value for g in es.finite_eigenvalues), key=lambda z: (z.real, z.imag))
        want = sorted([s1, s2], key=lambda z: (z.real, z.imag))
        assert_allclose(got, want, atol=1e-9)

    def test_double_root_clusters(self):
        # (s - 0.7)^2 via a Jordan block: one eigenvalue, multiplicity 2.
        pencil = MatrixPencil(np.eye(2), [[0.7, 1.0], [0.0, 0.7]])
        es = eigenstructure(pencil)
        assert len(es.finite_eigenvalues) == 1
        group = es.finite_eigenvalues[0]
        assert group.multiplicity == 2
        assert abs(group.value - 0.7) < 1e-7

    def test_irregular_rejected(self):
        with pytest.raises(IrregularPencil):
            eigenstructure(MatrixPencil([[0.0]], [[0.0]]))


def check_weierstrass(pencil, wform, tol=1e-9):
    m = pencil.rows
    p, q = wform.p, wform.q
    assert wform.P.shape == (m, m) and wform.Q.shape == (m, m)
    assert wform.J_p.shape == (p, p) and wform.H_q.shape == (q, q)
    left_F = np.zeros((m, m))
    left_F[:p, :p] = np.eye(p)
    left_F[p:, p:] = wform.H_q
    left_G = np.zeros((m, m))
    left_G[:p, :p] = wform.J_p
    left_G[p:, p:] = np.eye(q)
    assert np.max(np.abs(wform.P @ pencil.F @ wform.Q - left_F)) < tol
    assert np.max(np.abs(wform.P @ pencil.G @ wform.Q - left_G)) < tol
    # nilpotency index is exact on the assembled H_q
    H = wform.H_q
    if q > 0:
        power = np.linalg.matrix_power(H, wform.q_star)
        assert np.all(power == 0.0)
        if wform.q_star > 1:
            assert np.any(np.linalg.matrix_power(H, wform.q_star - 1) != 0.0)
    else:
        assert wform.q_star == 0


class TestWeierstrass:
    def test_diag_pencil_identity_transforms(self):
        pencil = MatrixPencil(np.eye(2), np.diag([2.0, 3.0]))
        w = weierstrass_decompose(pencil)
        assert w.p == 2 and w.q == 0 and w.q_star == 0
        assert_allclose(w.J_p, np.diag([2.0, 3.0]), atol=1e-12)
        assert_allclose(w.P, np.eye(2), atol=1e-12)
        assert_allclose(w.Q, np.eye(2), atol=1e-12)
        check_weierstrass(pencil, w)

    def test_index2_pencil_nilpotent_chain(self):
        pencil = MatrixPencil(INDEX2_F, INDEX2_G)
        w = weierstrass_decompose(pencil)
        assert w.p == 0 and w.q == 2 and w.q_star == 2
        assert_allclose(w.H_q, [[0.0, 1.0], [0.0, 0.0]], atol=1e-12)
        check_weierstrass(pencil, w)

    def test_samuelson_structure(self):
        pencil = samuelson_pencil(0.5, 1.0)
        w = weierstrass_decompose(pencil)
        assert (w.p, w.q, w.q_star) == (2, 1, 1)
        assert w.H_q.shape == (1, 1) and w.H_q[0, 0] == 0.0
        # complex pair stored as a real rotation-scaling block
        assert_allclose(w.J_p, [[0.5, 0.5], [-0.5, 0.5]], atol=1e-9)
        check_weierstrass(pencil, w, tol=1e-10)

    @pytest.mark.parametrize("a", A_GRID)
    @pytest.mark.parametrize("b", B_GRID)
    def test_samuelson_grid_residuals(self, a, b):
        pencil = samuelson_pencil(a, b)
        w = weierstrass_decompose(pencil)
        assert (w.p, w.q, w.q_star) == (2, 1, 1)
        check_weierstrass(pencil, w)

    def test_real_jordan_block(self):
        pencil = MatrixPencil(np.eye(2), [[0.7, 1.0], [0.0, 0.7]])
        w = weierstrass_decompose(pencil)
        assert w.p == 2 and w.q == 0
        assert_allclose(w.J_p, [[0.7, 1.0], [0.0, 0.7]], atol=1e-7)
        check_weierstrass(pencil, w)

    def test_semisimple_double_root(self):
        pencil = MatrixPencil(np.eye(2), 0.7 * np.eye(2))
        w = weierstrass_decompose(pencil)
        assert_allclose(w.J_p, 0.7 * np.eye(2), atol=1e-9)
        check_weierstrass(pencil, w)

    def test_partitions_are_consistent(self):
        w = weierstrass_decompose(samuelson_pencil(0.4, 2.0))
        assert w.Q_p.shape == (3, 2) and w.Q_q.shape == (3, 1)
        assert w.P_1.shape == (2, 3) and w.P_2.shape == (1, 3)
        assert_allclose(np.column_stack([w.Q_p, w.Q_q]), w.Q)
        assert_allclose(np.vstack([w.P_1, w.P_2]), w.P)

    @pytest.mark.parametrize("name,pencil", small_regular_pencils())
    def test_corpus_residuals(self, name, pencil):
        check_weierstrass(pencil, weierstrass_decompose(pencil))

    def test_triple_finite_jordan_unsupported(self):
        G = np.array([[0.5, 1.0, 0.0], [0.0, 0.5, 1.0], [0.0, 0.0, 0.5]])
        with pytest.raises(UnsupportedJordanStructure):
            weierstrass_decompose(MatrixPencil(np.eye(3), G))

    def test_nilpotent_chain_of_three_unsupported(self):
        F = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
        with pytest.raises(UnsupportedJordanStructure):
            weierstrass_decompose(MatrixPencil(F, np.eye(3)))

    def test_repeated_complex_pair_unsupported(self):
        rot = np.array([[0.3, 0.4], [-0.4, 0.3]])
        G = np.zeros((4, 4))
        G[:2, :2] = rot
        G[2:, 2:] = rot
        with pytest.raises(UnsupportedJordanStructure):
            weierstrass_decompose(MatrixPencil(np.eye(4), G))

    def test_irregular_rejected(self):
        with pytest.raises(IrregularPencil):
            weierstrass_decompose(MatrixPencil([[0.0]], [[0.0]]))

    def test_determinism(self):
        pencil = samuelson_pencil(0.3, 2.0)
        w1 = weierstrass_decompose(pencil)
        w2 = weierstrass_decompose(pencil)
        assert np.array_equal(w1.P, w2.P)
        assert np.array_equal(w1.Q, w2.Q)
