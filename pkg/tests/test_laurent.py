import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jspectral.errors import DimensionError, DomainError, SizeError
from jspectral.fixtures import indefinite_2x2
from jspectral.laurent import (
    LaurentPoly,
    MatrixLaurent,
    Signature,
    fourier_coeffs_from_samples,
    grid_points,
    matrix_from_samples,
)

from oracles import anticausal_division_series, reference_scalar_factor_coeffs


def lp(d):
    return LaurentPoly.from_dict(d)


class TestArithmetic:
    def test_add_basic(self):
        a = lp({-1: 1, 0: 1})
        b = lp({0: 1, 1: 1})
        assert a + b == lp({-1: 1, 0: 2, 1: 1})

    def test_add_identity(self):
        p = lp({-2: 3, 0: 1j, 5: -2})
        assert p + LaurentPoly.zero() == p

    def test_add_inverse_collapses_to_zero(self):
        p = lp({-1: 8, 0: 19, 1: 8})
        assert (p + (-p)).is_zero()

    def test_mul_basic(self):
        a = lp({0: 4, 1: 2})
        b = lp({-1: 2, 0: 4})
        assert a * b == lp({-1: 8, 0: 20, 1: 8})

    def test_mul_identity(self):
        p = lp({-3: 1j, 0: 2, 2: -1})
        assert p * LaurentPoly.one() == p

    def test_det_of_worked_example(self):
        # the worked 2x2 example has det 4(z^-2 - 2 + z^2) = 4(z^-2 - 1)(1 - z^2)
        a = lp({-2: 1, 0: -1})
        b = lp({0: 1, 2: -1})
        assert (a * b) * 4.0 == lp({-2: 4, 0: -8, 2: 4})

    def test_fft_and_direct_convolution_agree(self):
        rng = np.random.default_rng(0)
        a = LaurentPoly(-7, rng.normal(size=50) + 1j * rng.normal(size=50))
        b = LaurentPoly(3, rng.normal(size=40) + 1j * rng.normal(size=40))
        prod = a * b  # span 89 -> FFT path
        direct = np.convolve(a.coeffs, b.coeffs)
        assert prod.lowest == -4
        np.testing.assert_allclose(prod.coeffs, direct, rtol=1e-12, atol=1e-12)


class TestTilde:
    def test_real_coeffs_reflect(self):
        assert lp({0: 4, 1: 2}).tilde() == lp({-1: 2, 0: 4})

    def test_conjugates_coefficients(self):
        assert lp({1: 1j}).tilde() == lp({-1: -1j})

    def test_real_constant_fixed_point(self):
        assert lp({0: 3.5}).tilde() == lp({0: 3.5})

    @given(
        st.integers(-5, 5),
        st.lists(
            st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=9
        ),
    )
    def test_involution(self, lowest, pairs):
        p = LaurentPoly(lowest, [complex(re, im) for re, im in pairs])
        assert p.tilde().tilde() == p

    @settings(max_examples=40)
    @given(
        st.integers(-4, 4),
        st.lists(
            st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=7
        ),
        st.floats(0, 1),
    )
    def test_tilde_equals_conj_on_circle(self, lowest, pairs, t):
        p = LaurentPoly(lowest, [complex(re, im) for re, im in pairs])
        z = np.exp(2j * np.pi * t)
        lhs = p.tilde().evaluate(z)
        rhs = np.conj(p.evaluate(z))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, p.max_abs())


class TestEvaluate:
    def test_sum_of_coefficients_at_one(self):
        assert lp({-1: 8, 0: 19, 1: 8}).evaluate(1.0) == pytest.approx(35.0)

    def test_boundary_zero(self):
        f = lp({-2: 1, 0: -2, 2: 1})
        assert abs(f.evaluate(1.0)) < 1e-14
        assert abs(f.evaluate(-1.0)) < 1e-14

    def test_identity_polynomial(self):
        assert lp({1: 1}).evaluate(1j) == pytest.approx(1j)

    def test_off_circle_rejected(self):
        with pytest.raises(DomainError):
            lp({0: 1}).evaluate(1.5)

    def test_grid_evaluation_matches_pointwise(self):
        p = lp({-3: 1 - 2j, 0: 0.5, 4: 3j})
        vals = p.evaluate_grid(16)
        pts = grid_points(16)
        for g in (0, 3, 11):
            assert vals[g] == pytest.approx(p.evaluate(pts[g]))

    def test_offset_grid(self):
        p = lp({-2: 1j, 1: 2.0})
        vals = p.evaluate_grid(8, offset=0.5)
        pts = grid_points(8, offset=0.5)
        for g in range(8):
            assert vals[g] == pytest.approx(p.evaluate(pts[g]))


class TestFourier:
    def test_constant(self):
        samples = np.ones(8, dtype=complex)
        assert fourier_coeffs_from_samples(samples, -2, 2) == LaurentPoly.one()

    def test_band_limited_recovery(self):
        pts = grid_points(8)
        samples = pts + 1.0 / pts
        got = fourier_coeffs_from_samples(samples, -1, 1)
        assert got.lowest == -1
        np.testing.assert_allclose(got.coeffs, [1, 0, 1], atol=1e-14)

    def test_too_small_grid(self):
        with pytest.raises(SizeError):
            fourier_coeffs_from_samples(np.ones(4), -3, 3)

    def test_non_power_of_two(self):
        with pytest.raises(SizeError):
            fourier_coeffs_from_samples(np.ones(12), -1, 1)

    def test_division_series_against_long_division(self):
        # anticausal expansion of -s21 / tilde(f1+) for the worked example,
        # frozen against explicit polynomial long division
        a, b = reference_scalar_factor_coeffs()
        num = {-1: 28.0, 0: 73.0, 1: 39.0}
        den = {0: a, -1: b}
        want = anticausal_division_series(num, den, 70)

        pts = grid_points(4096)
        samples = (28.0 / pts + 73.0 + 39.0 * pts) / (a + b / pts)
        got = fourier_coeffs_from_samples(samples, -60, 0)
        for k in range(-60, 1):
            assert got.coeff(k) == pytest.approx(want[k], abs=1e-12)

    @settings(max_examples=25)
    @given(st.integers(0, 60), st.data())
    def test_round_trip(self, width, data):
        lowest = data.draw(st.integers(-40, 20))
        rng = np.random.default_rng(width)
        p = LaurentPoly(lowest, rng.normal(size=width + 1) + 1j * rng.normal(size=width + 1))
        G = 128
        back = fourier_coeffs_from_samples(p.evaluate_grid(G), p.lowest, p.highest)
        assert back.lowest == p.lowest
        np.testing.assert_allclose(back.coeffs, p.coeffs, atol=1e-12 * p.max_abs())


class TestMatrix:
    def test_shape_validation(self):
        with pytest.raises(DimensionError):
            MatrixLaurent(2, 2, [LaurentPoly.zero()] * 3)

    def test_identity_multiplication(self):
        S, _, _ = indefinite_2x2()
        assert (MatrixLaurent.identity(2) @ S).entries == S.entries

    def test_leading_principal_submatrix(self):
        S, _, _ = indefinite_2x2()
        sub = S.leading_principal_submatrix(1)
        assert sub.rows == 1
        assert sub.entry(0, 0) == lp({-1: -8, 0: -19, 1: -8})

    def test_hermitian_conjugate_fixed_point(self):
        S, _, _ = indefinite_2x2()
        H = S.hermitian_conjugate()
        assert all(a == b for a, b in zip(H.entries, S.entries))
        assert S.is_hermitian()

    def test_hermitian_agrees_with_grid_check(self):
        S, _, _ = indefinite_2x2()
        vals = S.sample_grid(64)
        grid_defect = np.abs(vals - np.conj(np.transpose(vals, (0, 2, 1)))).max()
        assert S.hermitian_defect() <= 1e-10
        assert grid_defect <= 1e-10

    def test_known_factor_reconstructs_example(self):
        S, S_known, sig = indefinite_2x2()
        J = MatrixLaurent.from_rows([[sig[0], 0], [0, sig[1]]])
        R = S_known @ J @ S_known.hermitian_conjugate()
        assert (R - S).max_abs() < 1e-12

    def test_matrix_from_samples_round_trip(self):
        S, _, _ = indefinite_2x2()
        back = matrix_from_samples(S.sample_grid(32), S.lowest, S.highest)
        assert (back - S).max_abs() < 1e-12


class TestSignature:
    def test_counts(self):
        s = Signature((-1, 1, 1, -1))
        assert (s.p, s.q) == (2, 2)

    def test_string_round_trip(self):
        s = Signature.from_string("+-+")
        assert s.signs == (1, -1, 1)
        assert s.to_string() == "+-+"

    def test_rejects_bad_entries(self):
        with pytest.raises(ValueError):
            Signature((1, 0))

    def test_canonical_permutation_groups_plus_first(self):
        s = Signature((-1, 1, -1, 1))
        perm = s.canonical_permutation()
        assert perm == (1, 3, 0, 2)
        regrouped = [s[i] for i in perm]
        assert regrouped == [1, 1, -1, -1]

    def test_canonical_permutation_conjugates_j(self):
        s = Signature((-1, 1, -1))
        perm = np.array(s.canonical_permutation())
        P = np.zeros((3, 3))
        P[perm, np.arange(3)] = 1.0
        J_can = P.T @ s.as_matrix() @ P
        np.testing.assert_allclose(J_can, np.diag([1.0, -1.0, -1.0]))
