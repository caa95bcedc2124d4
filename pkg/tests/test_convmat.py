import math

import numpy as np
import pytest

from voltconv import bases, convmat, oracle
from voltconv.errors import (ArgumentError, DegenerateParameterError,
                             DimensionError)
from voltconv.series import PolySeries, indefinite_integral_cheb


class TestColumnZero:
    def test_matches_indefinite_integral(self):
        rng = np.random.default_rng(0)
        a = rng.uniform(-1, 1, 9)  # M = 8
        np.testing.assert_array_equal(convmat.cheb_column0(a),
                                      indefinite_integral_cheb(a))

    def test_constant(self):
        np.testing.assert_allclose(convmat.cheb_column0([1.0]), [1, 1], atol=0)

    def test_empty_raises(self):
        with pytest.raises(ArgumentError):
            convmat.cheb_column0([])


class TestAnalyticMatrices:
    def test_chebyshev_unit_kernel(self):
        D = convmat.to_dense(convmat.build_chebyshev([1.0], 2))
        expect = np.array([[1, -0.25, -1 / 3],
                           [1, 0, -0.5],
                           [0, 0.25, 0],
                           [0, 0, 1 / 6]])
        np.testing.assert_allclose(D, expect, atol=1e-15)

    def test_legendre_unit_kernel(self):
        D = convmat.to_dense(convmat.build_legendre([1.0], 1))
        np.testing.assert_allclose(D, [[1, -1 / 3], [1, 0], [0, 1 / 3]], atol=1e-15)

    def test_gegenbauer_unit_kernel(self):
        D = convmat.to_dense(convmat.build_gegenbauer([1.0], 2.0, 1))
        np.testing.assert_allclose(D, [[1, -5 / 3], [0.25, 0], [0, 1 / 6]], atol=1e-15)

    def test_jacobi_column0(self):
        D = convmat.to_dense(convmat.build_jacobi([1.0], 2.0, 1.5, 0))
        np.testing.assert_allclose(D[:, 0], [10 / 11, 4 / 11], atol=1e-15)


class TestTables:
    def test_gegenbauer_S_values(self):
        assert convmat.gegenbauer_S(0.5, 0) == pytest.approx(-1.0, abs=1e-15)
        assert convmat.gegenbauer_S(0.5, 3) == 0.0
        assert convmat.gegenbauer_S(2.0, 0) == pytest.approx(-4.0, abs=1e-15)

    def test_jacobi_symmetric_kills_B(self):
        t = convmat.jacobi_tables(1.0, 1.0, 8)
        assert np.all(t.B[1:] == 0.0)

    def test_legendre_values(self):
        t = convmat.jacobi_tables(0.0, 0.0, 8)
        assert t.A[1] == pytest.approx(1.0, abs=1e-15)
        assert t.C[0] == pytest.approx(-1 / 3, abs=1e-15)
        # merged S_0 - B_0 slot; matches the Gegenbauer constant at lam = 1/2
        assert t.S[0] == pytest.approx(-1.0, abs=1e-15)
        assert np.all(t.S[1:] == 0.0)

    def test_all_finite(self):
        t = convmat.jacobi_tables(2.0, 1.5, 64)
        for arr in (t.A, t.B, t.C, t.S):
            assert np.all(np.isfinite(arr))

    def test_degenerate_line_rejected(self):
        with pytest.raises(DegenerateParameterError):
            convmat.jacobi_tables(-0.3, -0.7, 4)


class TestSymmetryRatio:
    def test_diagonal(self):
        assert convmat.symmetry_ratio(bases.chebyshev(), 5, 5) == 1.0

    def test_chebyshev_value(self):
        assert convmat.symmetry_ratio(bases.chebyshev(), 3, 4) == pytest.approx(-4 / 3)

    def test_chebyshev_n0_rejected(self):
        with pytest.raises(ArgumentError):
            convmat.symmetry_ratio(bases.chebyshev(), 0, 4)

    def test_jacobi_product_vs_quotient(self):
        al, be = 2.0, 1.5

        def poch(x, m):
            r = 1.0
            for i in range(m):
                r *= x + i
            return r

        def quotient(n, k):
            ab = al + be
            return ((-1) ** (k + n) * (ab + 2 * n + 1) / (ab + 2 * k + 1)
                    * poch(al + 1, k) * poch(be + 1, k) * poch(ab + 1, n) ** 2
                    / (poch(al + 1, n) * poch(be + 1, n) * poch(ab + 1, k) ** 2))

        got = convmat.symmetry_ratio(bases.jacobi(al, be), 3, 6)
        assert got == pytest.approx(quotient(3, 6), rel=1e-13)
        got = convmat.symmetry_ratio(bases.jacobi(al, be), 6, 3)
        assert got == pytest.approx(1.0 / quotient(3, 6), rel=1e-13)


class TestStructure:
    def test_legendre_exact_band(self):
        rng = np.random.default_rng(5)
        a = rng.uniform(-1, 1, 6)  # M = 5
        D = convmat.to_dense(convmat.build_legendre(a, 40))
        k, n = np.indices(D.shape)
        assert np.all(D[np.abs(k - n) > 6] == 0.0)

    def test_lower_structural_zeros(self, finite_basis):
        rng = np.random.default_rng(6)
        a = rng.uniform(-1, 1, 5)  # M = 4
        D = convmat.to_dense(convmat.build(finite_basis, a, 25))
        k, n = np.indices(D.shape)
        assert np.all(D[k > n + 5] == 0.0)

    def test_entry_accessor(self):
        R = convmat.build_chebyshev([1.0], 2, scale=2.0)
        D = convmat.to_dense(R)
        for k in range(4):
            for n in range(3):
                assert R.entry(k, n) == D[k, n]
        with pytest.raises(DimensionError):
            R.entry(4, 0)

    def test_shape_and_bandwidth(self):
        R = convmat.build_chebyshev(np.ones(8), 30)
        assert R.shape == (7 + 30 + 2, 31)
        assert R.bandwidth == 8


class TestLegendreOracle:
    def test_random_kernel_tight_tolerance(self):
        rng = np.random.default_rng(12)
        a = rng.uniform(-1, 1, 11)  # M = 10
        R = convmat.build_legendre(a, 50)
        cols = oracle.conv_coeff_block(PolySeries(bases.legendre(), (-1, 1), a),
                                       50, extended=True)
        assert oracle.compare_entrywise(R, cols).max_abs <= 1e-14


class TestBasisCoincidences:
    def test_legendre_gegenbauer_jacobi_agree(self):
        rng = np.random.default_rng(7)
        a = rng.uniform(-1, 1, 9)  # M = 8
        DL = convmat.to_dense(convmat.build_legendre(a, 40))
        DG = convmat.to_dense(convmat.build_gegenbauer(a, 0.5, 40))
        DJ = convmat.to_dense(convmat.build_jacobi(a, 0.0, 0.0, 40))
        assert np.max(np.abs(DL - DG)) < 1e-14
        assert np.max(np.abs(DL - DJ)) < 1e-14


class TestOracleAgreement:
    def test_small_scale(self, finite_basis):
        rng = np.random.default_rng(8)
        a = rng.uniform(-1, 1, 11)
        N = 50
        R = convmat.build(finite_basis, a, N)
        cols = oracle.conv_coeff_block(PolySeries(finite_basis, (-1, 1), a), N,
                                       extended=True)
        rep = oracle.compare_entrywise(R, cols)
        assert rep.max_abs < 1e-13

    def test_edge_sizes(self, finite_basis):
        for (M, N) in [(0, 0), (0, 1), (0, 7), (1, 0), (3, 1), (5, 3), (9, 2)]:
            rng = np.random.default_rng(M * 37 + N)
            a = rng.uniform(-1, 1, M + 1)
            R = convmat.build(finite_basis, a, N)
            cols = oracle.conv_coeff_block(PolySeries(finite_basis, (-1, 1), a), N,
                                           extended=True)
            rep = oracle.compare_entrywise(R, cols)
            assert rep.max_abs < 1e-13, (M, N, rep.max_abs)


class TestNaive:
    def test_tiny_case_matches_stable(self):
        Dn = convmat.build_chebyshev_naive([1.0], 2)
        Ds = convmat.to_dense(convmat.build_chebyshev([1.0], 2))
        np.testing.assert_allclose(Dn, Ds, atol=1e-15)

    def test_instability_witness(self):
        from voltconv.prng import random_kernel
        a = random_kernel(10, 1)
        naive = convmat.build_chebyshev_naive(a, 50)
        stable = convmat.to_dense(convmat.build_chebyshev(a, 50))
        above = np.triu(np.abs(naive - stable), k=1)
        assert above.max() >= 1e3
        assert abs(naive[0, 50]) >= 1e6
        assert abs(stable[0, 50]) <= 1.0


class TestApply:
    def test_column_selection(self):
        R = convmat.build_chebyshev([1.0], 2)
        np.testing.assert_allclose(convmat.apply(R, [0, 0, 1.0]),
                                   [-1 / 3, -0.5, 0, 1 / 6], atol=1e-15)

    def test_zero_vector(self):
        R = convmat.build_chebyshev([1.0], 2)
        np.testing.assert_array_equal(convmat.apply(R, [0.0]), np.zeros(4))

    def test_short_vector_zero_padded(self):
        rng = np.random.default_rng(9)
        a = rng.uniform(-1, 1, 7)
        R = convmat.build_chebyshev(a, 30)
        b = rng.uniform(-1, 1, 12)
        bp = np.zeros(31)
        bp[:12] = b
        np.testing.assert_allclose(convmat.apply(R, b), convmat.to_dense(R) @ bp,
                                   atol=1e-14)

    def test_too_long_raises(self):
        R = convmat.build_chebyshev([1.0], 2)
        with pytest.raises(DimensionError):
            convmat.apply(R, np.ones(4))

    def test_matches_dense_columns(self, finite_basis):
        rng = np.random.default_rng(10)
        a = rng.uniform(-1, 1, 7)  # M = 6
        R = convmat.build(finite_basis, a, 30, scale=1.3)
        D = convmat.to_dense(R)
        for n in range(31):
            e = np.zeros(n + 1)
            e[n] = 1.0
            np.testing.assert_allclose(convmat.apply(R, e), D[:, n], atol=0)
