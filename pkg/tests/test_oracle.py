import math

import numpy as np
import pytest

from nsquad.corrections import GEval
from nsquad.integrator import KernelParams
from nsquad.oracle import (
    complex_ei,
    exact_test1,
    exact_test2,
    finite_part_reference,
    reference_integral,
)

EI_ONE = 1.8951178163559368  # classical value, frozen from a 40-digit series


class TestReferenceIntegral:
    def test_constant_numerator_arctangent(self):
        # tol is absolute, so it scales with the integral's magnitude here
        for c, d in ((1.0, 0.5), (2.0, 0.01), (1.0, 1e-4)):
            g = GEval.analytic(lambda z: 1.0 + 0.0 * np.asarray(z))
            want = 2.0 * math.atan(c / d) / (c * d)
            tol = 1e-13 * max(1.0, abs(want))
            res = reference_integral(g, KernelParams(a=1.0, c=c, d=d), tol=tol)
            assert abs(res.value - want) <= tol
            assert res.est_error <= tol

    def test_odd_integrand_vanishes(self):
        g = GEval.analytic(lambda z: np.asarray(z))
        res = reference_integral(g, KernelParams(a=1.0, d=0.05), tol=1e-13)
        assert abs(res.value) <= 1e-13

    def test_matches_exponential_integral_formula(self):
        d = 0.1
        g = GEval.analytic(lambda z: d * np.exp(z))
        res = reference_integral(g, KernelParams(a=1.0, d=d), tol=1e-13)
        assert abs(res.value - exact_test1(d)) <= 1e-13

    def test_plain_callable_accepted(self):
        res = reference_integral(lambda x: 0.1 * math.exp(x),
                                 KernelParams(a=1.0, d=0.1), tol=1e-13)
        assert abs(res.value - exact_test1(0.1)) <= 1e-13

    def test_rejects_d_zero_and_tiny_tol(self):
        g = GEval.analytic(np.exp)
        with pytest.raises(ValueError):
            reference_integral(g, KernelParams(a=1.0, d=0.0), tol=1e-12)
        with pytest.raises(ValueError):
            reference_integral(g, KernelParams(a=1.0, d=0.1), tol=1e-15)

    def test_unreachable_tolerance_raises(self):
        # |I| ~ 3e6 puts 1e-14 absolute below the roundoff floor
        g = GEval.analytic(lambda z: 1.0 + 0.0 * np.asarray(z))
        with pytest.raises(RuntimeError):
            reference_integral(g, KernelParams(a=1.0, d=1e-6), tol=1e-14)


class TestExactValues:
    def test_limit_is_pi(self):
        assert exact_test1(1e-8) == pytest.approx(math.pi, abs=1e-6)
        assert exact_test1(-1e-8) == pytest.approx(-math.pi, abs=1e-6)
        assert abs(exact_test1(1e-8) - math.pi) < abs(exact_test1(1e-4) - math.pi)

    def test_two_oracle_agreement(self):
        for d in (1e-1, 1e-2, 1e-4):
            g = GEval.analytic(lambda z, d=d: d * np.exp(z))
            ref = reference_integral(g, KernelParams(a=1.0, d=d), tol=1e-13)
            assert abs(exact_test1(d) - ref.value) <= 1e-12

    def test_d_zero_rejected(self):
        with pytest.raises(ValueError):
            exact_test1(0.0)
        with pytest.raises(ValueError):
            exact_test2(0.0, 1.0, 0.1)

    def test_test2_reduces_to_test1(self):
        for d in (0.1, 0.003):
            assert exact_test2(d, 1.0, 0.0) == pytest.approx(exact_test1(d), rel=1e-15)

    def test_test2_against_reference(self):
        d, c, x_s = 0.01, 1.0, 0.1
        g = GEval.analytic(lambda z: d * np.exp(z))
        ref = reference_integral(g, KernelParams(a=1.0, c=c, d=d, x_s=x_s), tol=1e-13)
        assert abs(exact_test2(d, c, x_s) - ref.value) <= 1e-13

    def test_test2_general_c_against_reference(self):
        d, c, x_s = 0.01, 2.0, 0.1
        g = GEval.analytic(lambda z: d * np.exp(z))
        ref = reference_integral(g, KernelParams(a=1.0, c=c, d=d, x_s=x_s), tol=1e-13)
        assert abs(exact_test2(d, c, x_s) - ref.value) <= 1e-13

    def test_odd_in_d(self):
        for d in (0.05, 0.2):
            assert exact_test2(-d, 1.0, 0.1) == pytest.approx(
                -exact_test2(d, 1.0, 0.1), rel=1e-14)


class TestComplexEi:
    def test_classical_value(self):
        assert complex_ei(1.0 + 0.0j).real == pytest.approx(EI_ONE, rel=1e-15)
        assert complex_ei(1.0 + 0.0j).imag == 0.0

    def test_conjugate_symmetry(self):
        for z in (0.5 - 0.2j, 1.0 - 1.0j, 3.0 + 0.7j, 6.0 - 2.0j):
            a = complex_ei(np.conjugate(z))
            b = np.conjugate(complex_ei(z))
            assert abs(a - b) <= 4 * np.finfo(float).eps * abs(b)

    def test_against_mpmath_grid(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        pts = [1 - 0.1j, -1 - 0.01j, -1 + 0.3j, 2.2 + 1.0j, 0.05 - 0.5j,
               5.0 - 3.0j, -8.0 + 0.5j, 7.0 + 0.2j]
        for z in pts:
            ref = complex(mp.ei(z))
            assert abs(complex_ei(z) - ref) <= 1e-14 * max(1.0, abs(ref))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            complex_ei(0.0)


class TestFinitePartReference:
    def test_constant(self):
        g = GEval.analytic(lambda z: 1.0 + 0.0 * np.asarray(z))
        assert finite_part_reference(g, 1.0, 0.0) == pytest.approx(-2.0, abs=1e-12)

    def test_linear_shift_invariance(self):
        # p.v. of 1/x vanishes by symmetry, so g = x + 1 gives -2 as well
        g = GEval.analytic(lambda z: np.asarray(z) + 1.0)
        assert finite_part_reference(g, 1.0, 0.0) == pytest.approx(-2.0, abs=1e-12)

    def test_closed_forms_off_center(self):
        # g = 1: -1/(a-xs) - 1/(a+xs); g = x - xs kills the quadratic pole
        g = GEval.analytic(lambda z: 1.0 + 0.0 * np.asarray(z))
        for xs in (0.2, -0.35):
            want = -1.0 / (1.0 - xs) - 1.0 / (1.0 + xs)
            assert finite_part_reference(g, 1.0, xs) == pytest.approx(want, rel=1e-12)

    def test_stability_across_tolerances(self):
        g = GEval.analytic(np.exp)
        x_s = 0.3 / 64
        a = finite_part_reference(g, 1.0, x_s, tol=1e-12)
        b = finite_part_reference(g, 1.0, x_s, tol=1e-13)
        assert abs(a - b) <= 1e-12

    def test_real_only_callable(self):
        got = finite_part_reference(lambda x: math.exp(x), 1.0, 0.0)
        ref = finite_part_reference(GEval.analytic(np.exp), 1.0, 0.0)
        assert got == pytest.approx(ref, abs=5e-10)
