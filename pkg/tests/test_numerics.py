"""Special-function kernel tests against frozen high-precision references."""

import cmath
import math
import random

import pytest

from squeezelab import numerics
from squeezelab.numerics import (
    DomainError,
    SeriesControl,
    SeriesError,
    gamma_complex,
    hermite,
    hyp0f1,
    hyp0f1_regularized,
    hyp0f2,
    hyp1f1,
    hyp2f1,
    mehler_closed_form,
    mehler_sum,
    pochhammer,
)


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(3.7 + 2j, 0) == 1

    def test_integer(self):
        assert pochhammer(2, 3) == 24  # 2*3*4

    def test_complex_frozen(self):
        # direct 4-term product evaluated at 30 digits
        ref = -1.62109375 + 5.46875j
        assert abs(pochhammer(0.25 + 0.5j, 4) - ref) < 1e-13

    def test_recurrence(self):
        rng = random.Random(7)
        for _ in range(50):
            b = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            k = rng.randrange(0, 12)
            lhs = pochhammer(b, k + 1)
            rhs = pochhammer(b, k) * (b + k)
            assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(lhs))


class TestGamma:
    def test_one(self):
        assert abs(gamma_complex(1.0) - 1.0) < 1e-14

    def test_factorial(self):
        assert abs(gamma_complex(5.0) - 24.0) < 1e-12

    def test_complex_frozen(self):
        ref = 0.3006946172606558 - 0.4249678794331238j
        assert abs(gamma_complex(0.5 + 1.0j) - ref) < 1e-13

    def test_poles(self):
        for z in (0.0, -1.0, -2.0, -7.0):
            with pytest.raises(DomainError):
                gamma_complex(z)

    def test_functional_equation(self):
        rng = random.Random(3)
        for _ in range(40):
            z = complex(rng.uniform(-8, 8), rng.uniform(0.1, 8))
            lhs = gamma_complex(z + 1)
            rhs = z * gamma_complex(z)
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


class TestSeriesControl:
    def test_validation(self):
        with pytest.raises(ValueError):
            SeriesControl(max_terms=0)
        with pytest.raises(ValueError):
            SeriesControl(rel_tol=0.0)
        with pytest.raises(ValueError):
            SeriesControl(rel_tol=1.5)

    def test_nonconvergence_carries_partial(self):
        ctl = SeriesControl(max_terms=3, rel_tol=1e-15)
        with pytest.raises(SeriesError) as exc:
            hyp1f1(1.0, 1.0, 10.0, ctl)
        assert exc.value.partial_sum is not None
        assert exc.value.last_term is not None

    def test_tol_halving_stability(self):
        # halving rel_tol moves the result by at most the coarser tol scale
        for tol in (1e-8, 1e-10, 1e-12):
            v1 = hyp1f1(0.7, 1.3, 2 + 1j, SeriesControl(rel_tol=tol))
            v2 = hyp1f1(0.7, 1.3, 2 + 1j, SeriesControl(rel_tol=tol / 2))
            assert abs(v1 - v2) <= 10 * tol * abs(v1)


class TestHyp1F1:
    def test_at_zero(self):
        assert hyp1f1(0.3 + 1j, 1.5, 0) == 1

    def test_exp(self):
        z = 1 + 1j
        assert abs(hyp1f1(1, 1, z) - cmath.exp(z)) < 1e-13

    def test_bad_c(self):
        with pytest.raises(DomainError):
            hyp1f1(1.0, -2.0, 0.5)

    def test_kummer_transformation(self):
        rng = random.Random(11)
        for _ in range(100):
            b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            c = complex(rng.uniform(0.5, 3), rng.uniform(-1, 1))
            z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            lhs = hyp1f1(b, c, -z)
            rhs = cmath.exp(-z) * hyp1f1(c - b, c, z)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestHyp2F1:
    def test_at_zero(self):
        assert hyp2f1(0.2, 1.1, 0.9, 0) == 1

    def test_log_identity(self):
        # series must match its own oracle -ln(1-z)/z
        z = 0.3
        ref = -math.log(1 - z) / z  # 1.188916479795774...
        assert abs(hyp2f1(1, 1, 2, z) - ref) < 1e-12

    def test_unit_disc_only(self):
        with pytest.raises(DomainError):
            hyp2f1(1, 1, 2, 1.0)
        with pytest.raises(DomainError):
            hyp2f1(1, 1, 2, -1.2)

    def test_norm_argument_at_v_zero(self):
        assert hyp2f1(0.25, 0.25, 0.5, 0.0) == 1


class TestHyp0F1Family:
    def test_trivial(self):
        assert hyp0f1(2.0, 0) == 1
        assert hyp0f2(1.0, 2.0, 0) == 1

    def test_bessel_identity(self):
        # 0F1(;2;1) = I_1(2)
        ref = 1.5906368546373290634
        assert abs(hyp0f1(2.0, 1.0) - ref) < 1e-13

    def test_regularized_matches_plain(self):
        z = 0.7 + 0.2j
        plain = hyp0f1(2.5, z) / gamma_complex(2.5)
        assert abs(hyp0f1_regularized(2.5, z) - plain) < 1e-13

    def test_regularized_nonpositive_parameter(self):
        # 0F1~(;b;z) is entire in b; at b = 0 the series starts at k = 1
        z = 0.3
        val = hyp0f1_regularized(0.0, z)
        # sum_{k>=1} z^k / (k! (k-1)!)
        ref = sum(z**k / (math.factorial(k) * math.factorial(k - 1))
                  for k in range(1, 25))
        assert abs(val - ref) < 1e-13

    def test_0f2_frozen(self):
        ref = 1.1276223077657245
        assert abs(hyp0f2(1.0, 2.0, 0.25) - ref) < 1e-13


class TestHermite:
    def test_low_orders(self):
        assert hermite(0, 0.3) == 1
        assert abs(hermite(2, 1.0) - 2.0) < 1e-14  # 4x^2 - 2 at x=1

    def test_frozen_h6(self):
        assert abs(hermite(6, 1.5) - (-201.0)) < 1e-10

    def test_against_coefficient_table(self):
        # H_4(x) = 16x^4 - 48x^2 + 12
        for x in (0.2, -1.3, 0.5 + 0.5j):
            ref = 16 * x**4 - 48 * x**2 + 12
            assert abs(hermite(4, x) - ref) <= 1e-12 * max(1.0, abs(ref))


class TestMehler:
    def test_origin(self):
        val = mehler_sum(0.0, 0.0, 0.5)
        assert abs(val - 1 / math.sqrt(0.75)) < 1e-12

    def test_z_zero(self):
        assert mehler_sum(1.3, -0.4, 0.0) == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            mehler_sum(0.0, 0.0, 1.0)

    def test_series_vs_closed(self):
        x, y, z = 0.3 + 0.1j, 0.2, 0.6
        s = mehler_sum(x, y, z)
        c = mehler_closed_form(x, y, z)
        assert abs(s - c) <= 1e-10 * abs(c)
        # frozen closed-form value
        ref = 1.3075256312924324 + 0.0049032441013249j
        assert abs(c - ref) < 1e-12

    def test_identity_up_to_09(self):
        rng = random.Random(5)
        for _ in range(30):
            x = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
            y = rng.uniform(-1, 1)
            z = rng.uniform(-0.9, 0.9)
            s = mehler_sum(x, y, z, SeriesControl(max_terms=4000))
            c = mehler_closed_form(x, y, z)
            assert abs(s - c) <= 1e-9 * max(1.0, abs(c))


def test_mpmath_passthrough():
    """The series evaluators accept mpmath numbers for the extended path."""
    import mpmath

    with mpmath.workdps(30):
        ctl = SeriesControl(max_terms=500, rel_tol=1e-28)
        v = hyp1f1(mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(1), ctl)
        assert abs(v - mpmath.e) < mpmath.mpf(10) ** -25


def test_gamma_mpmath_delegation():
    import mpmath

    v = numerics.gamma_complex(mpmath.mpf(5))
    assert abs(v - 24) < 1e-20
