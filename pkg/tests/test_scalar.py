import numpy as np
import pytest

from jspectral.errors import (
    NonPositiveSample,
    NotNonnegative,
    PaleyWienerViolation,
    SignMismatch,
    ZeroInput,
)
from jspectral.laurent import LaurentPoly, grid_points
from jspectral.scalar import cholesky_scalar_step, exp_log, exp_log_of_poly, fejer_riesz

from oracles import reference_scalar_factor_coeffs


def lp(d):
    return LaurentPoly.from_dict(d)


def factor_is_valid(res, f, tol=1e-9):
    assert res.factor.lowest == 0
    c0 = res.factor.coeff(0)
    assert abs(c0.imag) < 1e-10 * abs(c0) and c0.real > 0
    assert res.residual <= tol * f.max_abs()
    # stability: all roots on or outside the circle
    roots = res.factor.roots()
    if len(roots):
        assert np.abs(roots).min() >= 1 - 1e-8


class TestFejerRiesz:
    def test_worked_example_strict(self):
        a, b = reference_scalar_factor_coeffs()
        res = fejer_riesz(lp({-1: 8, 0: 19, 1: 8}))
        np.testing.assert_allclose(res.factor.coeffs, [a, b], rtol=1e-13)
        factor_is_valid(res, lp({-1: 8, 0: 19, 1: 8}))

    def test_worked_example_boundary(self):
        res = fejer_riesz(lp({-2: -1, 0: 2, 2: -1}))
        assert res.factor.lowest == 0
        np.testing.assert_allclose(res.factor.coeffs, [1.0, 0.0, -1.0], atol=1e-9)
        factor_is_valid(res, lp({-2: -1, 0: 2, 2: -1}), tol=1e-8)

    def test_constant(self):
        res = fejer_riesz(LaurentPoly.one())
        assert res.factor == LaurentPoly.one()

    @pytest.mark.parametrize("seed", range(8))
    def test_constructed_factor_recovered(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.uniform(1.2, 3.0)
        c = rng.uniform(0.3, 4.0)
        f = lp({-1: c * a, 0: c * (a * a + 1), 1: c * a})  # c (a+z)(a+1/z)
        res = fejer_riesz(f)
        want = np.sqrt(c) * np.array([a, 1.0])
        np.testing.assert_allclose(res.factor.coeffs, want, rtol=1e-10)

    def test_rejects_sign_changing(self):
        with pytest.raises(NotNonnegative):
            fejer_riesz(lp({-1: 1, 1: 1}))  # z + 1/z = 2 cos t

    def test_rejects_zero(self):
        with pytest.raises(ZeroInput):
            fejer_riesz(LaurentPoly.zero())

    @pytest.mark.parametrize("seed", range(6))
    def test_random_positive_polys(self, seed):
        rng = np.random.default_rng(100 + seed)
        deg = int(rng.integers(1, 9))
        p = LaurentPoly(0, rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        f = p * p.tilde() + LaurentPoly.constant(rng.uniform(0.2, 1.0) * p.max_abs() ** 2)
        res = fejer_riesz(f)
        factor_is_valid(res, f)
        # optimality: log f+(0) equals the mean of log sqrt(f)
        mean_log = np.log(f.evaluate_grid(2048).real).mean() / 2
        assert abs(np.log(abs(res.factor.coeff(0))) - mean_log) < 1e-6


class TestExpLog:
    def test_constant(self):
        res = exp_log(np.full(256, 4.0), 4)
        np.testing.assert_allclose(res.factor.coeffs[0], 2.0, rtol=1e-12)
        assert res.factor.trim(1e-12) == LaurentPoly.constant(2.0)

    def test_matches_fejer_riesz_on_worked_example(self):
        f = lp({-1: 8, 0: 19, 1: 8})
        res_fr = fejer_riesz(f)
        res_el = exp_log(f.evaluate_grid(1024).real, 12)
        diff = (res_el.factor - res_fr.factor).max_abs()
        assert diff < 1e-10

    def test_known_factor(self):
        f = lp({0: 1, 1: 0.5}) * lp({0: 1, -1: 0.5})
        res = exp_log(f.evaluate_grid(1024).real, 8)
        got = res.factor.trim(1e-9)
        assert got.highest == 1
        np.testing.assert_allclose(got.coeffs, [1.0, 0.5], atol=1e-10)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveSample):
            exp_log(np.array([1.0, -0.5, 2.0, 1.0]), 2)

    def test_rejects_near_zero_dip(self):
        s = np.full(512, 1.0)
        s[17] = 1e-15
        with pytest.raises(PaleyWienerViolation):
            exp_log(s, 4)

    @pytest.mark.parametrize("seed", range(5))
    def test_cross_method_agreement(self, seed):
        rng = np.random.default_rng(200 + seed)
        deg = int(rng.integers(1, 11))
        p = LaurentPoly(0, rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        f = p * p.tilde() + LaurentPoly.constant(rng.uniform(0.3, 1.0) * p.max_abs() ** 2)
        res_fr = fejer_riesz(f)
        res_el = exp_log_of_poly(f, degree_cap=f.highest)
        assert (res_el.factor - res_fr.factor).max_abs() < 1e-8 * res_fr.factor.max_abs()


class TestCholeskyStep:
    def test_worked_example_negative_minor(self):
        a, b = reference_scalar_factor_coeffs()
        res = cholesky_scalar_step(lp({-1: -8, 0: -19, 1: -8}), -1)
        np.testing.assert_allclose(res.factor.coeffs, [a, b], rtol=1e-13)

    def test_unit(self):
        res = cholesky_scalar_step(LaurentPoly.one(), 1)
        assert res.factor == LaurentPoly.one()

    def test_constructed_negative(self):
        f = lp({0: 1, 1: -0.3}) * lp({0: 1, -1: -0.3})
        res = cholesky_scalar_step(-f, -1)
        np.testing.assert_allclose(res.factor.coeffs, [1.0, -0.3], rtol=1e-10)

    def test_sign_mismatch(self):
        with pytest.raises(SignMismatch):
            cholesky_scalar_step(lp({-1: 8, 0: 19, 1: 8}), -1)
