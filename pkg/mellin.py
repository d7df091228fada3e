"""Mellin transform engine and the multiplier algebra of the fractional Laplacian."""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from config import DEFAULT_CONTOUR, DEFAULT_QUAD, ContourSpec, QuadConfig
from corpus import MellinImage, RadialFunction
from errors import (
    CosineZero,
    OutsideStrip,
    ParameterOutOfRange,
    PoleError,
    ResidualImaginary,
    StripConflict,
)
from quadrature import integrate, integrate_line, contour_integral
from specfun import gamma_ratio, log_sin_pi

ABSCISSA_GRID = 20
RESIDUE_NODES = 128
MAX_RESIDUE_RADIUS = 0.25


@dataclass(frozen=True)
class FracOrder:
    """Fractional order alpha in (0, 2) acting in dimension n."""

    alpha: float
    n: int = 1

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not (0.0 < self.alpha < 2.0):
            raise ParameterOutOfRange(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.n < 1:
            raise ParameterOutOfRange(f"Dimension must be at least 1, got {self.n}")

    @property
    def m(self) -> int:
        return math.ceil(self.alpha)


def _imaginary_tolerance(value: complex) -> float:
    return 1e-8 * abs(value.real) + 1e-14


def real_part(value: complex, stage: str) -> float:
    """Drop a negligible imaginary part, raise on a significant one."""
    value = complex(value)
    if abs(value.imag) > _imaginary_tolerance(value):
        raise ResidualImaginary(
            f"imaginary part {value.imag:.3e} against real part {value.real:.3e}", stage=stage
        )
    return value.real


def forward(f: RadialFunction, s, cfg: Optional[QuadConfig] = None) -> complex:
    """
    Numerical Mellin transform int_0^inf f(r) r^(s-1) dr.

    Integrated on the line r = e^u, where f(e^u) e^(s u) decays in both
    directions for Re s inside the strip implied by f's decay metadata.

    Raises:
        OutsideStrip: if Re s is outside that strip
        NoConvergence: on quadrature failure
    """
    s = complex(s)
    strip = f.strip
    if strip is None:
        raise OutsideStrip(f"'{f.name}' has no Mellin strip", stage="mellin forward")
    lo, hi = strip
    if not lo < s.real < hi:
        raise OutsideStrip(
            f"Re s = {s.real} outside the strip ({lo}, {hi}) of '{f.name}'",
            stage="mellin forward",
        )

    def h(u):
        u = np.asarray(u, dtype=float)
        values = np.asarray(f.profile(np.exp(u)), dtype=float)
        with np.errstate(all="ignore"):
            weighted = values * np.exp(s * u)
        return np.where(values == 0.0, 0.0, weighted)

    return complex(integrate_line(h, cfg).value)


def numeric_image(f: RadialFunction, cfg: Optional[QuadConfig] = None) -> MellinImage:
    """MellinImage evaluated by forward quadrature; valid on the strip only."""
    strip = f.strip
    if strip is None:
        raise OutsideStrip(f"'{f.name}' has no Mellin strip", stage="mellin forward")

    def evaluate(s):
        s = np.asarray(s, dtype=complex)
        values = np.array([forward(f, point, cfg) for point in s.ravel()], dtype=complex)
        values = values.reshape(s.shape)
        return values[()] if values.ndim == 0 else values

    return MellinImage(evaluate=evaluate, strip=strip, continued=False)


def image_of(f: RadialFunction, cfg: Optional[QuadConfig] = None) -> MellinImage:
    """Closed-form image when f carries one, numeric image otherwise."""
    if f.mellin is not None:
        return f.mellin
    return numeric_image(f, cfg)


def laplacian_multiplier(s, order: FracOrder):
    """
    Mellin multiplier of -(-Laplacian)^(alpha/2) on radial functions in R^n.

    m(s) = -2^alpha Gamma(s/2) Gamma((n - s + alpha)/2)
           / (Gamma((n - s)/2) Gamma((s - alpha)/2)),

    so that M(L f)(s) = m(s) M f(s - alpha) for 0 < Re s < n. The formula is
    evaluated as a meromorphic function wherever gamma_ratio is defined.

    Raises:
        PoleError: at s = 0, -2, -4, ...
    """
    s = np.asarray(s, dtype=complex)
    alpha, n = order.alpha, order.n
    ratio = gamma_ratio(
        [s / 2.0, (n - s + alpha) / 2.0],
        [(n - s) / 2.0, (s - alpha) / 2.0],
    )
    return -(2.0 ** alpha) * ratio


def riesz_multiplier(s, alpha: float):
    """
    One-dimensional form -Gamma(s) cos(pi s/2) / (Gamma(s - alpha) cos(pi (s - alpha)/2)).

    The cosine ratio goes through log_sin_pi so large |Im s| does not overflow.

    Raises:
        CosineZero: when s - alpha is an odd integer
        PoleError: at s = 0, -1, -2, ...
    """
    s = np.asarray(s, dtype=complex)
    shifted = s - alpha
    odd = (shifted.imag == 0) & np.isclose(np.mod(shifted.real - 1.0, 2.0), 0.0, atol=1e-12)
    odd |= (shifted.imag == 0) & np.isclose(np.mod(shifted.real - 1.0, 2.0), 2.0, atol=1e-12)
    if np.any(odd):
        raise CosineZero(f"cos(pi (s - alpha)/2) vanishes at s - alpha = {shifted}", stage="riesz_multiplier")

    with np.errstate(divide="ignore"):
        cosine_ratio = np.exp(
            np.asarray(log_sin_pi((s + 1.0) / 2.0)) - np.asarray(log_sin_pi((shifted + 1.0) / 2.0))
        )
    value = -np.asarray(gamma_ratio([s], [shifted])) * cosine_ratio
    return value[()] if value.ndim == 0 else value


def caputo_multiplier(s, alpha: float):
    """Gamma(1 - s + alpha) / Gamma(1 - s): M(D^alpha phi)(s) = this * M phi(s - alpha)."""
    s = np.asarray(s, dtype=complex)
    return gamma_ratio([1.0 - s + alpha], [1.0 - s])


def caputo_rl_bridge_factor(s, alpha: float):
    """
    -sin(pi (s - alpha)/2) / sin(pi s/2), the factor turning the one-sided
    Caputo multiplier into the symmetric one.

    Raises:
        PoleError: where sin(pi s/2) vanishes
    """
    s = np.asarray(s, dtype=complex)
    even = (s.imag == 0) & np.isclose(np.mod(s.real, 2.0), 0.0, atol=1e-12)
    even |= (s.imag == 0) & np.isclose(np.mod(s.real, 2.0), 2.0, atol=1e-12)
    if np.any(even):
        raise PoleError(f"sin(pi s/2) vanishes at s = {s}", stage="caputo_rl_bridge_factor")

    with np.errstate(divide="ignore"):
        value = -np.exp(
            np.asarray(log_sin_pi((s - alpha) / 2.0)) - np.asarray(log_sin_pi(s / 2.0))
        )
    return value[()] if value.ndim == 0 else value


def _distance_to_integer(x: float) -> float:
    return abs(x - round(x))


def default_abscissa(image: MellinImage, order: FracOrder) -> float:
    """
    Inversion abscissa c for the image of L f.

    The midpoint of (0, n) intersected with (lo + alpha, hi + alpha). When that
    is empty and the image is a continued closed form, the point of (0, n) on
    a 1/20 grid farthest from integer values of both c and c - alpha.

    Raises:
        StripConflict: if the intersection is empty and the image is not continued
    """
    lo, hi = image.strip
    left = max(0.0, lo + order.alpha)
    right = min(float(order.n), hi + order.alpha)
    if left < right:
        return 0.5 * (left + right)

    if not image.continued:
        raise StripConflict(
            f"strip {image.strip} shifted by alpha = {order.alpha} misses (0, {order.n}) "
            "and the image has no closed-form continuation",
            stage="default_abscissa",
        )

    best, best_score = None, -1.0
    for k in range(1, ABSCISSA_GRID * order.n):
        c = k / ABSCISSA_GRID
        score = min(_distance_to_integer(c), _distance_to_integer(c - order.alpha))
        if score > best_score + 1e-12:
            best, best_score = c, score
    return best


def _check_abscissa(c: float, image: MellinImage, order: FracOrder):
    if not 0.0 < c < order.n:
        raise StripConflict(
            f"abscissa {c} outside (0, {order.n})", stage="contour inversion"
        )
    if not image.continued and not image.contains(c - order.alpha):
        raise StripConflict(
            f"c - alpha = {c - order.alpha} outside the image strip {image.strip}",
            stage="contour inversion",
        )


def _residue_radius(order: FracOrder) -> float:
    # Other singularities of m(s) M f(s - alpha) sit on 2Z and alpha + Z
    gap = _distance_to_integer(order.alpha)
    if gap < 1e-12:
        gap = 1.0
    return min(MAX_RESIDUE_RADIUS, 0.5 * gap)


def value_at_origin(image: MellinImage, order: FracOrder) -> float:
    """
    (L f)(0) as the residue of m(s) M f(s - alpha) at s = 0.

    Moving the inversion line to the left leaves the s = 0 residue as the only
    term that survives r -> 0. The residue is the trapezoid rule on a small
    circle around the origin.
    """
    if not image.continued and not image.contains(-order.alpha):
        raise StripConflict(
            f"value at r = 0 needs the image at s = {-order.alpha}, outside {image.strip}",
            stage="contour inversion",
        )

    radius = _residue_radius(order)
    theta = 2.0 * math.pi * np.arange(RESIDUE_NODES) / RESIDUE_NODES
    nodes = radius * np.exp(1j * theta)
    values = np.asarray(laplacian_multiplier(nodes, order)) * np.asarray(image(nodes - order.alpha))
    residue = complex(radius * np.mean(values * np.exp(1j * theta)))
    return real_part(residue, "contour inversion")


def apply_multiplier_and_invert(
    f: RadialFunction,
    order: FracOrder,
    r: float,
    spec: Optional[ContourSpec] = None,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    (L f)(r) by inverting m(s) M f(s - alpha) on the line Re s = c.

    Args:
        f: Radial function with a Mellin image (closed-form or numeric)
        order: Fractional order and dimension
        r: Radius, r >= 0
        spec: Contour settings; abscissa None selects default_abscissa
        cfg: Quadrature tolerances

    Returns:
        Real value of L f at radius r

    Raises:
        StripConflict: if no admissible abscissa exists
        ResidualImaginary: if the inversion keeps an imaginary part
        TailTooFat, NoConvergence: on contour failure
    """
    spec = spec or DEFAULT_CONTOUR
    cfg = cfg or DEFAULT_QUAD
    if r < 0:
        raise ValueError(f"Radius must be non-negative, got {r}")

    image = image_of(f, cfg)
    if r == 0:
        return value_at_origin(image, order)

    c = spec.abscissa if spec.abscissa is not None else default_abscissa(image, order)
    _check_abscissa(c, image, order)
    log_r = math.log(r)

    def integrand(s):
        s = np.asarray(s, dtype=complex)
        return (
            np.asarray(laplacian_multiplier(s, order))
            * np.asarray(image(s - order.alpha))
            * np.exp(-s * log_r)
        )

    value = contour_integral(integrand, spec.at(c), cfg)
    return real_part(value, "contour inversion")


def mellin_convolution(
    g: Callable,
    k: Callable,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    (g * k)(x) = int_0^inf g(xi) k(x/xi) dxi/xi, whose Mellin transform is M g M k.

    At x = 0 the kernel is the constant k(0).
    """
    cfg = cfg or DEFAULT_QUAD
    x = abs(x)
    if x == 0:
        weight = float(k(0.0))
        return weight * integrate(lambda xi: g(xi) / xi, 0.0, math.inf, cfg).value

    def integrand(xi):
        return g(xi) * k(x / xi) / xi

    return (
        integrate(integrand, 0.0, x, cfg).value
        + integrate(integrand, x, math.inf, cfg).value
    )
