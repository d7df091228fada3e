"""Tests for the stable densities and the diffusion-equation checks."""

import math

import mpmath
import pytest
from scipy.special import gamma as scipy_gamma

from corpus import get_test_function
from errors import DimensionUnsupported, ParameterOutOfRange, UnsupportedInput
from fraclap import RouteId
from mellin import forward
from sfde import (
    ASYMPTOTIC_START,
    StableDensity,
    evolution_image,
    fourier_prime_mellin,
    mellin_sfde_walkthrough,
    pdf_second_derivative,
    residual_table,
    self_convolution,
    sfde_residual,
    stable_mellin_image,
    stable_pdf,
    stable_radial_function,
    tail_constant,
    tail_expansion,
    time_derivative,
    total_mass,
)


def test_stable_density_validation():
    with pytest.raises(ParameterOutOfRange):
        StableDensity(2.5)
    with pytest.raises(ParameterOutOfRange):
        StableDensity(1.0, 0.0)
    assert StableDensity(1.5, 8.0).scale == pytest.approx(4.0)
    assert StableDensity(1.5).at(2.0).t == 2.0


def test_stable_pdf_at_origin():
    assert abs(stable_pdf(StableDensity(1.0), 0.0) - 1.0 / math.pi) < 1e-15
    assert abs(stable_pdf(StableDensity(1.5), 0.0) - scipy_gamma(5.0 / 3.0) / math.pi) < 1e-7
    assert abs(stable_pdf(StableDensity(2.0, 0.25), 0.0) - 1.0 / math.sqrt(math.pi)) < 1e-15


def test_quadrature_branch_matches_cauchy_closed_form():
    # alpha just below 1 goes through the cosine integral
    near = stable_pdf(StableDensity(1.0 - 1e-9), 0.7)
    assert abs(near - 1.0 / (math.pi * 1.49)) < 1e-7


def _reference_pdf(alpha, x):
    with mpmath.workdps(30):
        value = mpmath.quad(
            lambda k: mpmath.cos(k * x) * mpmath.exp(-(k ** alpha)),
            mpmath.linspace(0, 40, 81),
        )
        return float(value / mpmath.pi)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 3.0])
def test_stable_pdf_matches_reference_quadrature(x):
    value = stable_pdf(StableDensity(1.5), x)
    assert math.isfinite(value)
    assert abs(value - _reference_pdf(1.5, x)) < 1e-10


@pytest.mark.parametrize("t, x", [(1.0, 0.5), (2.0, 0.0), (2.0, 1.0), (2.0, 2.0), (2.0, 3.0)])
def test_self_similarity(t, x):
    alpha = 1.5
    scale = t ** (1.0 / alpha)
    lhs = stable_pdf(StableDensity(alpha, t), x)
    rhs = stable_pdf(StableDensity(alpha), x / scale) / scale
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


@pytest.mark.parametrize("alpha", [0.75, 1.0, 1.5])
def test_total_mass(alpha):
    assert abs(total_mass(alpha) - 1.0) < 1e-6


@pytest.mark.parametrize("x", [20.0, 40.0, 80.0])
def test_heavy_tail(x):
    value = stable_pdf(StableDensity(1.5), x)
    predicted = tail_constant(1.5) * x ** -2.5
    assert abs(value / predicted - 1.0) < 0.1


@pytest.mark.parametrize("alpha", [0.75, 1.5])
def test_tail_expansion_joins_the_cosine_integral(alpha):
    x = 0.975 * ASYMPTOTIC_START
    series = tail_expansion(alpha, x)
    assert abs(stable_pdf(StableDensity(alpha), x) - series) < 1e-7 * series


@pytest.mark.parametrize("x", [0.0, 0.7, 2.0])
def test_heat_equation_at_classical_order(x):
    d = StableDensity(2.0, 1.3)
    assert abs(time_derivative(d, x) - pdf_second_derivative(d, x)) < 1e-14


def test_cauchy_time_derivative():
    # d/dt t/(pi (x^2 + t^2)) = (x^2 - t^2)/(pi (x^2 + t^2)^2)
    d = StableDensity(1.0, 1.0)
    assert abs(time_derivative(d, 2.0) - 3.0 / (25.0 * math.pi)) < 1e-14


def test_residual_with_singular_route():
    assert sfde_residual(1.0, 1.0, [0.0, 0.5, 1.0, 2.0], RouteId.SINGULAR) <= 1e-6


@pytest.mark.parametrize("route", [RouteId.SINGULAR, RouteId.MELLIN])
def test_residual_for_heavy_tailed_density(route):
    rows = residual_table(1.5, 1.0, [0.0, 0.5, 1.0, 2.0], route)
    for x, dt, lp, residual in rows:
        assert math.isfinite(dt) and math.isfinite(lp)
        assert residual <= 1e-4


def test_residual_table_rows():
    messages = []
    rows = residual_table(
        1.0,
        1.0,
        [0.5, 2.0],
        RouteId.FOURIER,
        output_callback=lambda message, msg_type="info": messages.append(message),
    )
    assert [row[0] for row in rows] == [0.5, 2.0]
    for x, dt, lp, residual in rows:
        assert residual == abs(dt - lp)
        assert residual < 1e-8
    assert messages


def test_residual_argument_checks():
    with pytest.raises(UnsupportedInput):
        residual_table(1.0, 1.0, [0.5], RouteId.RIESZ_CHECK)
    with pytest.raises(ValueError):
        residual_table(1.0, 1.0, [], RouteId.SINGULAR)


@pytest.mark.parametrize("s", [0.3, 0.5 + 2.0j, 1.2 - 1.0j])
def test_stable_image_special_cases(s):
    cauchy = get_test_function("cauchy").mellin_image
    assert abs(stable_mellin_image(StableDensity(1.0))(s) - cauchy(s)) < 1e-12 * abs(cauchy(s))

    heat = complex(stable_mellin_image(StableDensity(2.0))(s))
    expected = 2.0 ** (s - 1.0) * complex(scipy_gamma(s / 2.0)) / (2.0 * math.sqrt(math.pi))
    assert abs(heat - expected) < 1e-12 * abs(expected)


def test_stable_image_matches_quadrature():
    d = StableDensity(1.0)
    radial = stable_radial_function(d)
    s = 0.6 + 1.0j
    assert abs(forward(radial, s) - stable_mellin_image(d)(s)) < 1e-9


def test_stable_radial_function_metadata():
    radial = stable_radial_function(StableDensity(1.5))
    assert radial.decay == ("power", 2.5)
    assert radial.strip == (0.0, 2.5)
    assert abs(radial.fourier_profile(0.0) - 1.0) < 1e-15
    assert abs(radial(-0.5) - radial(0.5)) < 1e-15


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_semigroup_property(x):
    d = StableDensity(1.5)
    assert abs(self_convolution(d, x) - stable_pdf(d.at(2.0), x)) < 1e-5


def test_fourier_prime_closed_form():
    alpha, w = 1.5, 0.5 + 1.0j
    expected = (2.0 * math.pi) ** -w * complex(scipy_gamma(w / alpha)) / alpha
    assert abs(fourier_prime_mellin(alpha, w) - expected) < 1e-12 * abs(expected)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.2, 1.5, 2.0])
def test_mellin_walkthrough(alpha):
    record = mellin_sfde_walkthrough(alpha)
    assert len(record.samples) == 3
    assert record.max_discrepancy <= 1e-7


def test_walkthrough_argument_checks():
    with pytest.raises(DimensionUnsupported):
        mellin_sfde_walkthrough(1.5, n=3)
    with pytest.raises(ValueError):
        mellin_sfde_walkthrough(1.5, samples=[0.25])


@pytest.mark.parametrize("alpha, t", [(0.5, 1.0), (0.5, 2.0), (1.5, 1.0)])
def test_evolution_image_where_the_shifted_image_has_a_pole(alpha, t):
    # the shifted image alone hits a Gamma pole here: s - alpha is 0 or -1
    s = 0.5
    image = stable_mellin_image(StableDensity(alpha, t))
    expected = complex(-(1.0 - s) / (alpha * t) * image(s))
    assert abs(evolution_image(s, alpha, t) - expected) < 1e-12 * abs(expected)
