import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guegen import dominator, hermite
from guegen.errors import ParameterError

SQRT_2PI = math.sqrt(2.0 * math.pi)


# ----------------------------------------------------------------------
# ScaledValue
# ----------------------------------------------------------------------


def test_scaled_value_normalization():
    sv = hermite.ScaledValue.normalize(-12.0)
    assert 1.0 <= abs(sv.mantissa) < 2.0
    assert sv.to_float() == -12.0
    assert hermite.ScaledValue.normalize(0.0).mantissa == 0.0
    assert hermite.ScaledValue.normalize(0.0).log_abs == -math.inf


@settings(max_examples=200, deadline=None)
@given(v=st.floats(min_value=-1e300, max_value=1e300, allow_nan=False))
def test_scaled_value_roundtrip(v):
    sv = hermite.ScaledValue.normalize(v)
    assert sv.to_float() == v
    if v != 0.0:
        assert 1.0 <= abs(sv.mantissa) < 2.0
        assert math.isclose(sv.log_abs, math.log(abs(v)), rel_tol=1e-12)


# ----------------------------------------------------------------------
# raw polynomial recurrence
# ----------------------------------------------------------------------


def test_polynomial_hand_values():
    assert hermite.hermite_poly(0, 123.4).to_float() == 1.0
    assert hermite.hermite_poly(1, 3.5).to_float() == 3.5
    assert hermite.hermite_poly(2, 0.0).to_float() == -1.0
    # H_2(1)=0, H_3(1)=-2, H_4(1)=1*(-2)-3*0=-2
    assert hermite.hermite_poly(4, 1.0).to_float() == -2.0


def test_polynomial_rejects_negative_degree():
    with pytest.raises(ParameterError):
        hermite.hermite_poly(-1, 0.0)


def test_polynomial_survives_huge_magnitudes():
    # raw H_k near the spectral edge is ~e^k; exponent must absorb it
    sv = hermite.hermite_poly(5000, 2.0 * math.sqrt(5000.0))
    assert math.isfinite(sv.mantissa) and sv.mantissa != 0.0
    assert sv.exponent > 10000


def test_polynomial_survives_huge_argument():
    # H_3(x) = x^3 - 3x; at x = 1e200 the value only fits as (mantissa, exp)
    sv = hermite.hermite_poly(3, 1e200)
    assert math.isfinite(sv.mantissa)
    assert abs(sv.log_abs - 3.0 * math.log(1e200)) < 1e-10 * abs(sv.log_abs)


def test_polynomial_consistent_with_density():
    # H_k e^{-x^2/4}/sqrt(k! sqrt(2pi)) squared should equal phi_squared
    rng = np.random.default_rng(0)
    for k in (2, 17, 151, 300):
        for x in rng.uniform(-2.0 * math.sqrt(k), 2.0 * math.sqrt(k), 5):
            sv = hermite.hermite_poly(k, x)
            log_phi = 2.0 * (
                sv.log_abs - x * x / 4.0 - 0.5 * (math.lgamma(k + 1) + 0.5 * math.log(2 * math.pi))
            )
            ref = hermite.phi_squared_many(k, np.array([x]), return_log=True)[0]
            assert abs(log_phi - ref) < 1e-9


# ----------------------------------------------------------------------
# squared Hermite function density
# ----------------------------------------------------------------------


def test_phi_squared_degree_zero_is_normal_density():
    for x in (-2.0, 0.0, 0.3, 5.0):
        assert math.isclose(
            hermite.phi_squared(0, x), math.exp(-x * x / 2.0) / SQRT_2PI, rel_tol=1e-14
        )


def test_phi_squared_degree_two_at_zero():
    assert math.isclose(hermite.phi_squared(2, 0.0), 1.0 / (2.0 * SQRT_2PI), rel_tol=1e-13)


def test_phi_squared_tail_is_tiny():
    assert hermite.phi_squared(1000, 2.0 * math.sqrt(1001.0) + 5.0) < 1e-10


def test_phi_squared_even_bitwise():
    for k in (1, 2, 9, 400):
        for x in (0.5, 1.7, 11.0, 2 * math.sqrt(k + 1.0) - 0.1):
            assert hermite.phi_squared(k, x) == hermite.phi_squared(k, -x)


def test_phi_squared_batch_matches_scalar():
    for k in (0, 1, 7, 1000):
        xs = np.linspace(-2.0 * math.sqrt(k + 1.0) - 3.0, 2.0 * math.sqrt(k + 1.0) + 3.0, 41)
        batch = hermite.phi_squared_many(k, xs)
        scal = np.array([hermite.phi_squared(k, t) for t in xs])
        assert np.allclose(batch, scal, rtol=1e-12, atol=1e-300)


def test_phi_squared_extreme_points():
    # tail-piece proposals can be enormous; evaluation must not overflow
    assert hermite.phi_squared(50, 1e6) == 0.0
    assert hermite.phi_squared(50, 1e200) == 0.0
    ev = hermite.phi_eval(3, 1e160)
    assert ev.phi_sq == 0.0 and ev.log_phi_sq == -math.inf


def test_phi_squared_bounded_by_sup():
    for k in (1, 5, 60, 2000):
        grid = np.linspace(0.0, 2.0 * math.sqrt(k + 1.0) + 3.0, 4001)
        sup = 8.0 * (math.pi + 1.0) / 3.0 * k ** (-1.0 / 6.0)
        assert hermite.phi_squared_many(k, grid).max() <= sup


def test_phi_squared_dominated_by_envelope():
    for k in (1, 2, 5, 20, 100, 1000, 10**4):
        spec = dominator.make_spec(k)
        grid = np.linspace(
            -2.0 * math.sqrt(k + 1.0) - 3.0, 2.0 * math.sqrt(k + 1.0) + 3.0, 10001
        )
        phi = hermite.phi_squared_many(k, grid)
        env = dominator.envelope_many(spec, grid)
        assert np.all(phi >= 0.0)
        assert np.all(phi <= env + 1e-12 * np.maximum(1.0, env))


@settings(max_examples=60, deadline=None)
@given(
    k=st.integers(min_value=0, max_value=60),
    x=st.floats(min_value=-25.0, max_value=25.0, allow_nan=False),
)
def test_phi_squared_nonnegative_even_property(k, x):
    v = hermite.phi_squared(k, x)
    assert v >= 0.0 and math.isfinite(v)
    assert v == hermite.phi_squared(k, -x)


# ----------------------------------------------------------------------
# CDF quadrature
# ----------------------------------------------------------------------


def test_cdf_degree_zero_matches_normal():
    assert abs(hermite.phi_sq_cdf(0, 1.0, 1e-10) - 0.8413447460685429) < 1e-9


def test_cdf_at_zero_is_half():
    for k in (0, 3, 50):
        assert hermite.phi_sq_cdf(k, 0.0, 1e-10) == 0.5


def test_cdf_total_mass_is_one():
    for k in (0, 1, 5, 50, 500):
        assert abs(hermite.phi_sq_cdf(k, 1e9, 1e-10) - 1.0) < 1e-9
        assert abs(hermite.phi_sq_cdf(k, -1e9, 1e-10)) < 1e-9


def test_cdf_many_matches_scalar_and_monotone():
    k = 37
    xs = np.linspace(-14.0, 14.0, 301)
    many = hermite.phi_sq_cdf_many(k, xs, tol=1e-9)
    assert np.all(np.diff(many) >= -1e-12)
    for i in (0, 73, 150, 300):
        assert abs(many[i] - hermite.phi_sq_cdf(k, xs[i], 1e-10)) < 1e-8


def test_cdf_rejects_bad_tolerance():
    with pytest.raises(ParameterError):
        hermite.phi_sq_cdf(3, 0.5, 0.0)


# ----------------------------------------------------------------------
# mixture density
# ----------------------------------------------------------------------


def test_mixture_single_term_is_normal():
    for x in (-1.0, 0.0, 2.2):
        assert math.isclose(
            hermite.mixture_density(1, x), math.exp(-x * x / 2) / SQRT_2PI, rel_tol=1e-13
        )


def test_mixture_two_terms_at_zero():
    # second term vanishes at 0, leaving half the normal density
    assert math.isclose(hermite.mixture_density(2, 0.0), 0.5 / SQRT_2PI, rel_tol=1e-13)


def test_mixture_matches_explicit_sum():
    xs = np.linspace(-9.0, 9.0, 25)
    for n in (2, 7, 40):
        direct = sum(hermite.phi_squared_many(k, xs) for k in range(n)) / n
        assert np.allclose(hermite.mixture_density_many(n, xs), direct, rtol=1e-11)


def test_mixture_second_moment_equals_size():
    for n in (2, 7, 50):
        cut = hermite.tail_cutoff(n - 1)
        val, _ = hermite.integrate_adaptive(
            lambda xs: xs * xs * hermite.mixture_density_many(n, xs),
            0.0,
            cut,
            1e-9 * n,
            initial_width=hermite.oscillation_width(max(n - 1, 1)),
        )
        assert abs(2.0 * val - n) < 1e-7 * n


# ----------------------------------------------------------------------
# generic quadrature
# ----------------------------------------------------------------------


def test_integrate_adaptive_polynomial_exact():
    val, err = hermite.integrate_adaptive(lambda x: x**4, 0.0, 2.0, 1e-12)
    assert abs(val - 32.0 / 5.0) < 1e-11


def test_integrate_adaptive_needs_positive_tol():
    with pytest.raises(ParameterError):
        hermite.integrate_adaptive(lambda x: x, 0.0, 1.0, -1.0)


def test_integrate_adaptive_refines_sharp_peak():
    val, err = hermite.integrate_adaptive(
        lambda x: 1.0 / (1e-4 + (x - 0.7) ** 2), 0.0, 1.0, 1e-9
    )
    ref = (math.atan(0.3 / 1e-2) + math.atan(0.7 / 1e-2)) / 1e-2
    assert abs(val - ref) < 1e-7 * ref


def test_integrate_adaptive_raises_on_exhausted_budget():
    from guegen.errors import ConvergenceError

    with pytest.raises(ConvergenceError):
        hermite.integrate_adaptive(
            lambda x: 1.0 / (1e-12 + (x - 0.5) ** 2), 0.0, 1.0, 1e-14, max_panels=8
        )
