"""Tests for the Mellin engine and the multiplier algebra."""

import cmath
import math

import numpy as np
import pytest
from scipy.special import gamma as scipy_gamma
from scipy.special import k0

from config import ContourSpec
from corpus import MellinImage, RadialFunction, get_test_function
from errors import CosineZero, OutsideStrip, ParameterOutOfRange, PoleError, ResidualImaginary, StripConflict
from fraclap import fourier_route
from mellin import (
    FracOrder,
    apply_multiplier_and_invert,
    caputo_multiplier,
    caputo_rl_bridge_factor,
    default_abscissa,
    forward,
    image_of,
    laplacian_multiplier,
    mellin_convolution,
    numeric_image,
    real_part,
    riesz_multiplier,
    value_at_origin,
)


def gaussian_value_at_origin(alpha):
    """-(1/pi) int_0^inf k^alpha sqrt(pi) exp(-k^2/4) dk."""
    return -(2.0 ** alpha) * scipy_gamma((alpha + 1.0) / 2.0) / math.sqrt(math.pi)


def test_frac_order_validation():
    assert FracOrder(0.5).m == 1
    assert FracOrder(1.0).m == 1
    assert FracOrder(1.5, 3).m == 2
    for alpha in (0.0, 2.0, -0.5):
        with pytest.raises(ParameterOutOfRange):
            FracOrder(alpha)
    with pytest.raises(ValueError):
        FracOrder(1.0, 0)


def test_forward_examples(gaussian, lorentz):
    exponential = get_test_function("exponential").radial(1)
    assert abs(forward(exponential, 3.0) - 2.0) < 1e-12
    assert abs(forward(gaussian, 1.0) - math.sqrt(math.pi) / 2) < 1e-12
    s = 0.5 + 10j
    expected = (math.pi / 2) / cmath.sin(math.pi * s / 2)
    assert abs(forward(lorentz, s) - expected) < 1e-6 * abs(expected)


def test_forward_outside_strip(gaussian, lorentz):
    with pytest.raises(OutsideStrip):
        forward(lorentz, 2.5)
    with pytest.raises(OutsideStrip):
        forward(gaussian, -0.5)
    with pytest.raises(OutsideStrip):
        forward(get_test_function("constant").radial(1), 0.5)


def test_numeric_image_and_image_of(lorentz):
    plain = RadialFunction(name="plain_lorentz", profile=lorentz.profile, decay=("power", 2.0))
    image = image_of(plain)
    assert not image.continued
    assert image.strip == (0.0, 2.0)
    values = image(np.array([0.5, 1.0]))
    assert np.allclose(values, lorentz.mellin(np.array([0.5, 1.0])), rtol=1e-10)
    assert image_of(lorentz) is lorentz.mellin
    assert isinstance(numeric_image(lorentz), MellinImage)


def test_laplacian_multiplier_examples():
    assert abs(laplacian_multiplier(0.5, FracOrder(1.0, 1)) - 0.5) < 1e-14
    expected = -(2.0 ** 1.5) * scipy_gamma(0.5) * scipy_gamma(1.75) / (scipy_gamma(1.0) * scipy_gamma(-0.25))
    assert abs(laplacian_multiplier(1.0, FracOrder(1.5, 3)) - expected) < 1e-13
    assert abs(expected - 0.94) < 1e-3
    with pytest.raises(PoleError):
        laplacian_multiplier(0.0, FracOrder(1.0, 1))


def test_one_dimensional_forms_agree(rng):
    s = rng.uniform(0.01, 0.99, 500) + 1j * rng.uniform(-20.0, 20.0, 500)
    alphas = rng.uniform(0.05, 1.95, 500)
    for point, alpha in zip(s, alphas):
        general = complex(laplacian_multiplier(point, FracOrder(alpha, 1)))
        cosine_form = complex(riesz_multiplier(point, alpha))
        assert abs(general - cosine_form) <= 1e-12 * abs(general), (point, alpha)


def test_riesz_multiplier_at_classical_order():
    s = 0.5 + 1.0j
    assert abs(riesz_multiplier(s, 2.0) - (s - 1.0) * (s - 2.0)) < 1e-12


def test_riesz_multiplier_cosine_zero():
    with pytest.raises(CosineZero):
        riesz_multiplier(1.5, 0.5)


def test_bridge_factor_examples():
    assert abs(caputo_rl_bridge_factor(0.5, 2.0) - 1.0) < 1e-14
    assert abs(caputo_rl_bridge_factor(0.5, 1.0) - 1.0) < 1e-14
    assert abs(caputo_rl_bridge_factor(0.5, 0.5)) < 1e-14
    with pytest.raises(PoleError):
        caputo_rl_bridge_factor(2.0, 0.5)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_riesz_multiplier_factorises_through_caputo(alpha):
    s = 0.4 + 2.5j
    product = complex(caputo_rl_bridge_factor(s, alpha)) * complex(caputo_multiplier(s, alpha))
    direct = complex(riesz_multiplier(s, alpha))
    assert abs(product - direct) < 1e-12 * abs(direct)


def test_default_abscissa():
    gaussian = get_test_function("gaussian").mellin_image
    lorentz = get_test_function("lorentz").mellin_image
    assert default_abscissa(gaussian, FracOrder(0.5)) == 0.75
    assert default_abscissa(lorentz, FracOrder(0.5)) == 0.75
    assert default_abscissa(gaussian, FracOrder(1.0, 3)) == 2.0
    # (1, 1) is empty: grid search on the continued image
    assert default_abscissa(gaussian, FracOrder(1.0)) == 0.5
    with pytest.raises(StripConflict):
        default_abscissa(MellinImage(lambda s: s, (0.0, 0.5)), FracOrder(1.0))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 1.999])
def test_value_at_origin_for_gaussian(gaussian, alpha):
    value = apply_multiplier_and_invert(gaussian, FracOrder(alpha), 0.0)
    assert abs(value - gaussian_value_at_origin(alpha)) < 1e-10


def test_value_at_origin_for_cauchy(cauchy):
    assert abs(apply_multiplier_and_invert(cauchy, FracOrder(1.0), 0.0) + 1.0 / math.pi) < 1e-10


def test_value_at_origin_needs_image_near_minus_alpha():
    image = MellinImage(lambda s: 1.0 / s, (0.0, 2.0))
    with pytest.raises(StripConflict):
        value_at_origin(image, FracOrder(0.5))


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_inversion_matches_fourier_oracle(gaussian, r):
    order = FracOrder(1.0)
    assert abs(apply_multiplier_and_invert(gaussian, order, r) - fourier_route(gaussian, order, r)) < 1e-8


def test_abscissa_independence(gaussian):
    order = FracOrder(0.5)
    values = [
        apply_multiplier_and_invert(gaussian, order, 1.0, ContourSpec(abscissa=c))
        for c in (0.6, 0.75, 0.9)
    ]
    assert max(values) - min(values) < 1e-8


def test_inversion_argument_checks(gaussian):
    with pytest.raises(ValueError):
        apply_multiplier_and_invert(gaussian, FracOrder(1.0), -1.0)
    with pytest.raises(StripConflict):
        apply_multiplier_and_invert(gaussian, FracOrder(1.0), 1.0, ContourSpec(abscissa=1.5))


def test_real_part_guard():
    assert real_part(2.0 + 1e-12j, "test") == 2.0
    with pytest.raises(ResidualImaginary) as excinfo:
        real_part(1.0 + 1e-3j, "contour inversion")
    assert "contour inversion" in str(excinfo.value)


def test_mellin_convolution_of_exponentials():
    value = mellin_convolution(lambda xi: math.exp(-xi), lambda z: math.exp(-z), 1.0)
    assert abs(value - 2.0 * k0(2.0)) < 1e-11


def test_mellin_convolution_at_origin():
    value = mellin_convolution(lambda xi: xi * math.exp(-xi), lambda z: 3.0, 0.0)
    assert abs(value - 3.0) < 1e-12
