"""Tests for the one-sided derivatives and the E-kernel convolution theorems."""

import math

import pytest
from scipy.special import gamma as scipy_gamma

from config import QuadConfig
from errors import ParameterOutOfRange
from fraclap import fourier_route, singular_integral_route
from mellin import FracOrder, caputo_multiplier
from onesided import (
    EKernel,
    HalfLineFunction,
    caputo,
    ekernel_convolution,
    hilbert_derivative,
    riemann_liouville,
    riesz_via_caputo,
    riesz_via_riemann_liouville,
    rl_integral,
)
from quadrature import integrate

SQRT_PI = math.sqrt(math.pi)


def power_rule(coeffs, alpha, t, skip_below=0):
    """sum_k c_k Gamma(k+1)/Gamma(k+1-alpha) t^(k-alpha) over k >= skip_below."""
    return sum(
        c * scipy_gamma(k + 1.0) / scipy_gamma(k + 1.0 - alpha) * t ** (k - alpha)
        for k, c in enumerate(coeffs)
        if k >= skip_below
    )


@pytest.mark.parametrize(
    "f, alpha, t, expected",
    [
        (lambda tau: 1.0, 0.5, 1.0, 2.0 / SQRT_PI),
        (lambda tau: tau, 1.0, 2.0, 2.0),
        (lambda tau: tau, 0.5, 1.0, 4.0 / (3.0 * SQRT_PI)),
        (lambda tau: 1.0, 0.5, 4.0, 4.0 / SQRT_PI),
    ],
)
def test_rl_integral_examples(f, alpha, t, expected):
    assert abs(rl_integral(f, alpha, t) - expected) < 1e-10


def test_rl_integral_long_range():
    # J^0.3 t at t = 100 crosses the dyadic split
    expected = scipy_gamma(2.0) / scipy_gamma(2.3) * 100.0 ** 1.3
    assert abs(rl_integral(lambda tau: tau, 0.3, 100.0) - expected) < 1e-9 * expected


def test_caputo_examples():
    identity = HalfLineFunction.polynomial([0.0, 1.0])
    constant = HalfLineFunction.polynomial([1.0])
    square = HalfLineFunction.polynomial([0.0, 0.0, 1.0])
    assert abs(caputo(identity, 0.5, 1.0) - 2.0 / SQRT_PI) < 1e-10
    assert abs(caputo(constant, 0.5, 1.0)) < 1e-14
    assert abs(caputo(square, 1.5, 1.0) - 4.0 / SQRT_PI) < 1e-10
    assert caputo(square, 1.0, 3.0) == 6.0


def test_riemann_liouville_examples():
    assert abs(riemann_liouville(HalfLineFunction.polynomial([1.0]), 0.5, 1.0) - 1.0 / SQRT_PI) < 1e-10
    assert abs(riemann_liouville(HalfLineFunction.polynomial([0.0, 1.0]), 0.5, 1.0) - 2.0 / SQRT_PI) < 1e-10


@pytest.mark.parametrize("alpha", [0.3, 1.7])
@pytest.mark.parametrize("t", [0.5, 2.0])
def test_power_rule(alpha, t):
    coeffs = [1.0, 1.0, 1.0]
    f = HalfLineFunction.polynomial(coeffs)
    m = math.ceil(alpha)
    assert abs(caputo(f, alpha, t) - power_rule(coeffs, alpha, t, skip_below=m)) < 1e-8
    assert abs(riemann_liouville(f, alpha, t) - power_rule(coeffs, alpha, t)) < 1e-8


def test_values_at_time_zero(bump_half_line):
    square = HalfLineFunction.polynomial([0.0, 0.0, 1.0])
    assert caputo(square, 0.5, 0.0) == 0.0
    assert caputo(square, 2.0, 0.0) == 2.0
    assert riemann_liouville(bump_half_line, 1.5, 0.0) == 0.0
    with pytest.raises(ParameterOutOfRange):
        riemann_liouville(HalfLineFunction.polynomial([1.0]), 0.5, 0.0)


def test_argument_checks():
    f = HalfLineFunction.polynomial([1.0, 1.0])
    with pytest.raises(ParameterOutOfRange):
        caputo(f, 0.5, -1.0)
    with pytest.raises(ParameterOutOfRange):
        rl_integral(f, 0.0, 1.0)
    with pytest.raises(ParameterOutOfRange):
        rl_integral(f, 0.5, 0.0)


def test_half_line_function_validation():
    with pytest.raises(ValueError):
        HalfLineFunction(name="empty", derivatives=(), initial_values=())
    with pytest.raises(ValueError):
        HalfLineFunction(name="bad", derivatives=(lambda t: t,), initial_values=(0.0, 1.0))
    f = HalfLineFunction(name="short", derivatives=(lambda t: t,), initial_values=(0.0,))
    with pytest.raises(ValueError, match="derivatives up to order 0"):
        f.derivative(1)
    with pytest.raises(ValueError):
        f.initial_value(1)


def test_consistency_error():
    assert HalfLineFunction.polynomial([1.0, -2.0, 0.5, 0.25]).consistency_error() < 1e-6
    broken = HalfLineFunction(
        name="broken", derivatives=(lambda t: t * t, lambda t: 3.0 * t), initial_values=(0.0,)
    )
    assert broken.consistency_error() > 0.4


def test_ekernel_validation():
    for alpha in (0.0, 2.5):
        with pytest.raises(ParameterOutOfRange):
            EKernel(alpha)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("s", [0.5, 0.5 + 1.0j, 0.5 + 3.0j])
def test_ekernel_mellin_identity(alpha, s):
    kernel = EKernel(alpha)
    closed = complex(kernel.mellin_closed_form(s))
    assert abs(kernel.mellin_numeric(s) - closed) < 1e-8 * max(1.0, abs(closed))


def test_ekernel_at_classical_order():
    kernel = EKernel(2.0)
    assert not kernel.has_smooth_part
    assert kernel.delta_weight == 1.0
    assert abs(kernel.mellin_numeric(0.5 + 1.0j) - 1.0) < 1e-14
    assert abs(kernel.mellin_closed_form(0.5 + 1.0j) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        kernel.mellin_numeric(2.5)


@pytest.mark.parametrize("x", [0.0, 0.5, 1.5])
def test_delta_reduction_at_classical_order(bump, bump_half_line, x):
    value = ekernel_convolution(lambda t: caputo(bump_half_line, 2.0, t), 2.0, x)
    assert abs(value - bump.second_derivative(x)) < 1e-14
    assert riesz_via_caputo(bump_half_line, 2.0, x) == pytest.approx(float(bump.second_derivative(x)))


@pytest.mark.parametrize("alpha", [0.5, 1.5])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_caputo_convolution_theorem(bump, bump_half_line, alpha, x):
    expected = singular_integral_route(bump, FracOrder(alpha), x)
    assert abs(riesz_via_caputo(bump_half_line, alpha, x) - expected) < 1e-4 * max(1.0, abs(expected))


def test_caputo_convolution_at_origin(bump, bump_half_line):
    expected = singular_integral_route(bump, FracOrder(0.5), 0.0)
    assert abs(riesz_via_caputo(bump_half_line, 0.5, 0.0) - expected) < 1e-4 * max(1.0, abs(expected))


@pytest.mark.parametrize("alpha", [0.5, 1.5])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_riemann_liouville_convolution_theorem(bump, bump_half_line, alpha, x):
    expected = singular_integral_route(bump, FracOrder(alpha), x)
    assert abs(riesz_via_riemann_liouville(bump_half_line, alpha, x) - expected) < 1e-4 * max(1.0, abs(expected))


def test_hilbert_derivative_of_cauchy(cauchy):
    assert abs(hilbert_derivative(cauchy, 0.0) + 1.0 / math.pi) < 1e-6
    assert abs(hilbert_derivative(cauchy, 1.0)) < 1e-6


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_hilbert_derivative_matches_fourier_route(gaussian, x):
    expected = fourier_route(gaussian, FracOrder(1.0), x)
    assert abs(hilbert_derivative(gaussian, x) - expected) < 1e-5


@pytest.mark.parametrize("s", [0.5, 0.75])
def test_caputo_mellin_bridge(bump, bump_half_line, s):
    alpha = 0.5
    cfg = QuadConfig(rel_tol=1e-8)

    def integrand(xi):
        return caputo(bump_half_line, alpha, xi, cfg) * xi ** (s - 1.0)

    lhs = integrate(integrand, 0.0, 1.0, cfg).value + integrate(integrand, 1.0, math.inf, cfg).value
    rhs = complex(caputo_multiplier(s, alpha)) * complex(bump.mellin(s - alpha))
    assert abs(lhs - rhs.real) < 1e-5 * abs(rhs)
