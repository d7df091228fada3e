"""Symmetric stable densities and the space-fractional diffusion equation."""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from config import DEFAULT_QUAD, ContourSpec, QuadConfig
from corpus import MellinImage, RadialFunction
from errors import DimensionUnsupported, ParameterOutOfRange, UnsupportedInput
from fraclap import RouteId, evaluate_route, relative_discrepancy, run_cells
from mellin import FracOrder, forward
from quadrature import integrate
from specfun import gamma, gamma_ratio, log_gamma, log_sin_pi

TWO_PI = 2.0 * math.pi
MASS_CUTOFF = 200.0
TAIL_TERMS = 4

# exp(-kappa^alpha t) is dropped past kappa^alpha t = SPECTRAL_DECAY
SPECTRAL_DECAY = 50.0

# beyond this many length scales the density comes from its tail expansion
ASYMPTOTIC_START = 20.0
ASYMPTOTIC_TERMS = 12


@dataclass(frozen=True)
class StableDensity:
    """
    Symmetric stable law with characteristic function exp(-|kappa|^alpha t).

    P(x; t) = (1/pi) int_0^inf cos(kappa x) exp(-kappa^alpha t) dkappa solves
    dP/dt = L P with P(x; 0) = delta(x).
    """

    alpha: float
    t: float = 1.0

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not 0.0 < self.alpha <= 2.0:
            raise ParameterOutOfRange(f"Stable index must lie in (0, 2], got {self.alpha}")
        if not self.t > 0:
            raise ParameterOutOfRange(f"t must be positive, got {self.t}")

    @property
    def scale(self) -> float:
        """t^(1/alpha), the self-similar length scale."""
        return self.t ** (1.0 / self.alpha)

    def at(self, t: float) -> "StableDensity":
        return StableDensity(self.alpha, t)


def spectral_cutoff(alpha: float, t: float = 1.0) -> float:
    """kappa past which exp(-kappa^alpha t) is below exp(-SPECTRAL_DECAY)."""
    return (SPECTRAL_DECAY / t) ** (1.0 / alpha)


def _cosine_integral(weight: Callable[[float], float], x: float, cutoff: float, cfg: QuadConfig) -> float:
    """int_0^K cos(kappa x) weight(kappa) dkappa, weight negligible past K."""
    x = abs(x)
    if x == 0:
        return integrate(weight, 0.0, cutoff, cfg).value
    return integrate(weight, 0.0, cutoff, cfg, weight="cos", wvar=x).value


def _sine_integral(weight: Callable[[float], float], x: float, cutoff: float, cfg: QuadConfig) -> float:
    if x == 0:
        return 0.0
    sign = math.copysign(1.0, x)
    return sign * integrate(weight, 0.0, cutoff, cfg, weight="sin", wvar=abs(x)).value


def tail_expansion(alpha: float, xi: float, terms: int = ASYMPTOTIC_TERMS) -> float:
    """
    P(xi; 1) from (1/pi) sum_k (-1)^(k+1) Gamma(k alpha + 1) sin(k pi alpha/2) / k! xi^(-k alpha - 1).

    Convergent for alpha < 1, asymptotic for alpha > 1.
    """
    xi = abs(xi)
    if xi == 0:
        raise ParameterOutOfRange("The tail expansion needs xi > 0")
    total = 0.0
    for k in range(1, terms + 1):
        coefficient = (
            (-1) ** (k + 1)
            * float(gamma(k * alpha + 1.0))
            * math.sin(k * math.pi * alpha / 2.0)
            / math.factorial(k)
        )
        total += coefficient * xi ** (-k * alpha - 1.0)
    return total / math.pi


def stable_pdf(d: StableDensity, x: float, cfg: Optional[QuadConfig] = None) -> float:
    """
    Density P(x; t).

    Closed forms at alpha = 2 (heat kernel of variance 2t) and alpha = 1
    (Cauchy); far out the tail expansion; otherwise the cosine integral,
    truncated where exp(-kappa^alpha t) has died out.
    """
    cfg = cfg or DEFAULT_QUAD
    alpha, t = d.alpha, d.t
    if alpha == 2.0:
        return math.exp(-x * x / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    if alpha == 1.0:
        return t / (math.pi * (x * x + t * t))
    xi = abs(x) / d.scale
    if xi >= ASYMPTOTIC_START:
        return tail_expansion(alpha, xi) / d.scale
    cutoff = spectral_cutoff(alpha, t)
    return _cosine_integral(lambda k: math.exp(-(k ** alpha) * t), x, cutoff, cfg) / math.pi


def standard_profile(alpha: float, xi: float, cfg: Optional[QuadConfig] = None) -> float:
    """The t = 1 profile P(xi; 1)."""
    return stable_pdf(StableDensity(alpha, 1.0), xi, cfg)


def standard_profile_derivative(alpha: float, xi: float, cfg: Optional[QuadConfig] = None) -> float:
    """d/dxi P(xi; 1) = -(1/pi) int_0^inf kappa sin(kappa xi) exp(-kappa^alpha) dkappa."""
    cfg = cfg or DEFAULT_QUAD
    StableDensity(alpha, 1.0)
    if alpha == 2.0:
        return -0.5 * xi * math.exp(-xi * xi / 4.0) / math.sqrt(4.0 * math.pi)
    if alpha == 1.0:
        return -2.0 * xi / (math.pi * (1.0 + xi * xi) ** 2)
    return -_sine_integral(lambda k: k * math.exp(-(k ** alpha)), xi, spectral_cutoff(alpha), cfg) / math.pi


def pdf_second_derivative(d: StableDensity, x: float, cfg: Optional[QuadConfig] = None) -> float:
    """d^2/dx^2 P(x; t) = -(1/pi) int_0^inf kappa^2 cos(kappa x) exp(-kappa^alpha t) dkappa."""
    cfg = cfg or DEFAULT_QUAD
    alpha, t = d.alpha, d.t
    if alpha == 2.0:
        return stable_pdf(d, x) * (x * x / (4.0 * t * t) - 1.0 / (2.0 * t))
    if alpha == 1.0:
        return t * (6.0 * x * x - 2.0 * t * t) / (math.pi * (x * x + t * t) ** 3)
    cutoff = spectral_cutoff(alpha, t)
    return -_cosine_integral(lambda k: k * k * math.exp(-(k ** alpha) * t), x, cutoff, cfg) / math.pi


def time_derivative(d: StableDensity, x: float, cfg: Optional[QuadConfig] = None) -> float:
    """
    dP/dt from self-similarity:
    -(1/alpha) t^(-1-1/alpha) [P(xi; 1) + xi P'(xi; 1)] at xi = |x| t^(-1/alpha).
    """
    alpha, t = d.alpha, d.t
    xi = abs(x) / d.scale
    bracket = standard_profile(alpha, xi, cfg) + xi * standard_profile_derivative(alpha, xi, cfg)
    return -t ** (-1.0 - 1.0 / alpha) * bracket / alpha


def stable_mellin_image(d: StableDensity) -> MellinImage:
    """
    M P(s) = Gamma(s) cos(pi s/2) Gamma((1 - s)/alpha) t^(-(1-s)/alpha) / (pi alpha).

    Evaluated in log space; cos(pi s/2) is sin(pi (s/2 + 1/2)).
    """
    alpha, t = d.alpha, d.t
    log_t = math.log(t)

    def evaluate(s):
        s = np.asarray(s, dtype=complex)
        log_value = (
            np.asarray(log_gamma(s))
            + np.asarray(log_gamma((1.0 - s) / alpha))
            + np.asarray(log_sin_pi(s / 2.0 + 0.5))
            - (1.0 - s) / alpha * log_t
            - math.log(math.pi * alpha)
        )
        value = np.exp(log_value)
        return value[()] if value.ndim == 0 else value

    hi = math.inf if alpha == 2.0 else 1.0 + alpha
    return MellinImage(evaluate=evaluate, strip=(0.0, hi), continued=True)


def stable_radial_function(d: StableDensity, cfg: Optional[QuadConfig] = None) -> RadialFunction:
    """P(.; t) as a one-dimensional RadialFunction with its transforms and d2."""
    cfg = cfg or DEFAULT_QUAD
    alpha, t = d.alpha, d.t

    def pointwise(fn):
        scalar = np.vectorize(lambda r: fn(d, float(r), cfg), otypes=[float])

        def wrapper(r):
            values = scalar(r)
            return values[()] if np.ndim(values) == 0 else values

        return wrapper

    decay = ("exponential", 1.0) if alpha == 2.0 else ("power", 1.0 + alpha)
    return RadialFunction(
        name=f"stable{alpha:g}",
        profile=pointwise(stable_pdf),
        n=1,
        d2=pointwise(pdf_second_derivative),
        mellin=stable_mellin_image(d),
        fourier_profile=lambda k: np.exp(-(np.abs(k) ** alpha) * t),
        decay=decay,
    )


def tail_constant(alpha: float) -> float:
    """C with P(x; 1) ~ C x^(-1-alpha) for large x."""
    return float(gamma(1.0 + alpha)) * math.sin(math.pi * alpha / 2.0) / math.pi


def tail_series(alpha: float, cutoff: float, terms: int = TAIL_TERMS) -> float:
    """
    int_X^inf P(x; 1) dx from the asymptotic series
    (1/pi) sum_k (-1)^(k+1) Gamma(k alpha + 1) sin(k pi alpha/2) / k! x^(-k alpha - 1).
    """
    total = 0.0
    for k in range(1, terms + 1):
        coefficient = (
            (-1) ** (k + 1)
            * float(gamma(k * alpha + 1.0))
            * math.sin(k * math.pi * alpha / 2.0)
            / math.factorial(k)
        )
        total += coefficient * cutoff ** (-k * alpha) / (k * alpha)
    return total / math.pi


def total_mass(alpha: float, cfg: Optional[QuadConfig] = None, cutoff: float = MASS_CUTOFF) -> float:
    """
    int P(x; 1) dx over the real line.

    On |x| <= X the order of integration is swapped, giving
    (1/pi) int_0^inf sin(kappa X)/kappa exp(-kappa^alpha) dkappa; the rest is tail_series.
    """
    cfg = cfg or DEFAULT_QUAD
    StableDensity(alpha, 1.0)

    def damped(k):
        return math.exp(-(k ** alpha))

    head = integrate(
        lambda k: cutoff * np.sinc(k * cutoff / math.pi) * damped(k), 0.0, 1.0, cfg
    ).value
    head += integrate(
        lambda k: damped(k) / k, 1.0, spectral_cutoff(alpha), cfg, weight="sin", wvar=cutoff
    ).value
    return 2.0 * (head / math.pi + tail_series(alpha, cutoff))


def self_convolution(d: StableDensity, x: float, cfg: Optional[QuadConfig] = None) -> float:
    """int P(y; t) P(x - y; t) dy, which equals P(x; 2t)."""
    cfg = cfg or DEFAULT_QUAD
    inner = cfg.loosened(0.1)
    breaks = sorted({0.0, float(x)})

    def integrand(y):
        return stable_pdf(d, y, inner) * stable_pdf(d, x - y, inner)

    return integrate(integrand, -math.inf, math.inf, cfg, points=breaks).value


def _residual_cell(d: StableDensity, radial: RadialFunction, order: FracOrder, x, route, cfg, spec):
    def cell():
        dt = time_derivative(d, x, cfg)
        lp = evaluate_route(route, radial, order, x, cfg, spec)
        return [x, dt, lp, abs(dt - lp)]

    return cell


def residual_table(
    alpha: float,
    t: float,
    points: Sequence[float],
    route: RouteId,
    cfg: Optional[QuadConfig] = None,
    spec: Optional[ContourSpec] = None,
    output_callback: Optional[Callable] = None,
) -> List[List[float]]:
    """
    Rows [x, dP/dt, L P, |dP/dt - L P|] for the stable density.

    Points are evaluated concurrently and returned in input order.
    """
    notify = output_callback or (lambda message, msg_type="info": None)
    order = FracOrder(alpha, 1)
    if not route.applicable(order):
        raise UnsupportedInput(f"Route '{route.value}' does not apply to alpha = {alpha}")
    if not points:
        raise ValueError("At least one evaluation point is required")

    d = StableDensity(alpha, t)
    radial = stable_radial_function(d, cfg)
    notify(f"Checking dP/dt = L P with the {route.value} route at {len(points)} points", "info")

    results = run_cells([_residual_cell(d, radial, order, float(x), route, cfg, spec) for x in points])
    for result in results:
        if isinstance(result, Exception):
            notify(f"Residual evaluation failed: {result}", "error")
            raise result
    return results


def sfde_residual(
    alpha: float,
    t: float,
    points: Sequence[float],
    route: RouteId,
    cfg: Optional[QuadConfig] = None,
    spec: Optional[ContourSpec] = None,
    output_callback: Optional[Callable] = None,
) -> float:
    """max over points of |dP/dt - L P|."""
    rows = residual_table(alpha, t, points, route, cfg, spec, output_callback)
    return max(row[3] for row in rows)


def fourier_prime_mellin(alpha: float, w, t: float = 1.0):
    """Closed form of int_0^inf exp(-(2 pi kappa)^alpha t) kappa^(w-1) dkappa."""
    w = np.asarray(w, dtype=complex)
    log_value = (
        -w * math.log(TWO_PI)
        + np.asarray(log_gamma(w / alpha))
        - w / alpha * math.log(t)
        - math.log(alpha)
    )
    value = np.exp(log_value)
    return value[()] if value.ndim == 0 else value


def evolution_image(s, alpha: float, t: float = 1.0) -> complex:
    """
    m(s) M P(s - alpha) for n = 1 as a single Gamma ratio.

    M P(w) is taken in the form 2^(w-1) sqrt(pi) Gamma(w/2) Gamma((1-w)/alpha)
    t^(-(1-w)/alpha) / (pi alpha Gamma((1-w)/2)); at w = s - alpha the factors
    Gamma((s - alpha)/2) and Gamma((1 - s + alpha)/2) of the multiplier cancel
    against it, poles included.
    """
    s = complex(s)
    w = s - alpha
    ratio = gamma_ratio(
        [s / 2.0, (1.0 - s + alpha) / 2.0, w / 2.0, (1.0 - w) / alpha],
        [(1.0 - s) / 2.0, (s - alpha) / 2.0, (1.0 - w) / 2.0],
    )
    prefactor = -(2.0 ** alpha) * 2.0 ** (w - 1.0) / (math.sqrt(math.pi) * alpha)
    return complex(prefactor * ratio * t ** (-(1.0 - w) / alpha))


@dataclass
class WalkthroughRecord:
    """Both sides of the Mellin-space diffusion identities at sample points."""

    alpha: float
    t: float
    n: int
    samples: List[complex] = field(default_factory=list)
    transform_lhs: List[complex] = field(default_factory=list)
    transform_rhs: List[complex] = field(default_factory=list)
    transform_closed: List[complex] = field(default_factory=list)
    evolution_lhs: List[complex] = field(default_factory=list)
    evolution_rhs: List[complex] = field(default_factory=list)

    def discrepancies(self) -> List[float]:
        """Worst relative gap per sample."""
        gaps = []
        for i in range(len(self.samples)):
            gaps.append(
                max(
                    relative_discrepancy(self.transform_lhs[i], self.transform_rhs[i]),
                    relative_discrepancy(self.transform_lhs[i], self.transform_closed[i]),
                    relative_discrepancy(self.evolution_lhs[i], self.evolution_rhs[i]),
                )
            )
        return gaps

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancies(), default=0.0)


def mellin_sfde_walkthrough(
    alpha: float,
    spec: Optional[ContourSpec] = None,
    cfg: Optional[QuadConfig] = None,
    t: float = 1.0,
    n: int = 1,
    samples: Optional[Sequence[complex]] = None,
) -> WalkthroughRecord:
    """
    Check the diffusion equation on the Mellin side.

    With F'P(kappa) = exp(-(2 pi kappa)^alpha t), the time derivative of
    M(F'P)(n - s) equals -(2 pi)^alpha M(F'P)(n - s + alpha); both sides are
    numerical Mellin transforms and are also compared with the Gamma closed
    form. The second identity is M(dP/dt)(s) = m(s) M P(s - alpha), with
    M(dP/dt)(s) = -((1 - s)/(alpha t)) M P(s) from self-similarity.

    spec is accepted for symmetry with the other checks; every contour here
    is a vertical line of samples, so no inversion takes place.
    """
    if n != 1:
        raise DimensionUnsupported(f"The stable density is one-dimensional, got n = {n}")
    d = StableDensity(alpha, t)
    cfg = cfg or DEFAULT_QUAD
    samples = list(samples) if samples is not None else [0.5, 0.5 + 1.0j, 0.5 + 2.0j]
    for s in samples:
        if complex(s).real != 0.5:
            raise ValueError(f"Samples must lie on Re s = 1/2, got {s}")

    rate = TWO_PI ** alpha
    fourier_prime = RadialFunction(
        name="fourier_prime",
        profile=lambda k: np.exp(-((TWO_PI * k) ** alpha) * t),
        decay=("exponential", 1.0),
    )
    fourier_prime_dt = RadialFunction(
        name="fourier_prime_dt",
        profile=lambda k: -((TWO_PI * k) ** alpha) * np.exp(-((TWO_PI * k) ** alpha) * t),
        decay=("exponential", 1.0),
    )
    density_image = stable_mellin_image(d)

    record = WalkthroughRecord(alpha=alpha, t=t, n=n)
    for s in samples:
        s = complex(s)
        w = n - s
        record.samples.append(s)
        record.transform_lhs.append(forward(fourier_prime_dt, w, cfg))
        record.transform_rhs.append(-rate * forward(fourier_prime, w + alpha, cfg))
        record.transform_closed.append(complex(-rate * fourier_prime_mellin(alpha, w + alpha, t)))

        record.evolution_lhs.append(complex(-(1.0 - s) / (alpha * t) * density_image(s)))
        record.evolution_rhs.append(evolution_image(s, alpha, t))

    return record
