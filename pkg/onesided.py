"""One-sided fractional calculus and the E-kernel bridge to the Riesz derivative."""

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import rgamma

from config import DEFAULT_QUAD, QuadConfig
from corpus import RadialFunction, TestFunction
from errors import ParameterOutOfRange
from mellin import mellin_convolution
from quadrature import integrate, principal_value
from specfun import gamma, log_sin_pi

# Convolution range in units of |x|
CONVOLUTION_DECADES = 1e8

# Smooth kernel part is dropped below this |sin(pi alpha/2)|
SINE_FLOOR = 1e-15

CONSISTENCY_POINTS = (0.5, 1.0, 2.0)
CONSISTENCY_STEP = 1e-4


@dataclass(frozen=True)
class HalfLineFunction:
    """
    Function t -> phi(t) on t > 0 with its derivatives.

    derivatives[j] is the j-th derivative (derivatives[0] is phi itself);
    initial_values[j] is the one-sided limit phi^(j)(0+).
    """

    name: str
    derivatives: Tuple[Callable, ...]
    initial_values: Tuple[float, ...]

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not self.derivatives:
            raise ValueError("HalfLineFunction needs at least the profile")
        if len(self.initial_values) > len(self.derivatives):
            raise ValueError("More initial values than derivatives")

    def __call__(self, t):
        return self.derivatives[0](t)

    @property
    def profile(self) -> Callable:
        return self.derivatives[0]

    def derivative(self, order: int) -> Callable:
        """The order-th derivative evaluator."""
        if order >= len(self.derivatives):
            raise ValueError(f"'{self.name}' carries derivatives up to order {len(self.derivatives) - 1}")
        return self.derivatives[order]

    def initial_value(self, order: int) -> float:
        if order >= len(self.initial_values):
            raise ValueError(f"'{self.name}' has no initial value of order {order}")
        return self.initial_values[order]

    def consistency_error(self) -> float:
        """Largest gap between each derivative and a central difference of the previous one."""
        h = CONSISTENCY_STEP
        worst = 0.0
        for j in range(1, len(self.derivatives)):
            lower, upper = self.derivatives[j - 1], self.derivatives[j]
            for t in CONSISTENCY_POINTS:
                estimate = (float(lower(t + h)) - float(lower(t - h))) / (2.0 * h)
                worst = max(worst, abs(estimate - float(upper(t))))
        return worst

    @classmethod
    def polynomial(cls, coeffs: Sequence[float], name: Optional[str] = None) -> "HalfLineFunction":
        """phi(t) = sum_k coeffs[k] t^k with all derivatives up to order 3."""
        poly = np.polynomial.Polynomial(list(coeffs))
        derivatives = tuple(poly.deriv(j) for j in range(4))
        initial_values = tuple(float(d(0.0)) for d in derivatives[:3])
        return cls(
            name=name or f"poly{list(coeffs)}",
            derivatives=derivatives,
            initial_values=initial_values,
        )

    @classmethod
    def from_test_function(cls, function: TestFunction) -> "HalfLineFunction":
        """Restriction of a corpus profile to the half-line."""
        derivatives = (
            function.profile,
            function.first_derivative,
            function.second_derivative,
        )
        return cls(
            name=function.name,
            derivatives=derivatives,
            initial_values=tuple(float(d(0.0)) for d in derivatives[:2]),
        )


Evaluator = Union[HalfLineFunction, Callable]


def _check_positive(alpha: float, t: float):
    if not alpha > 0:
        raise ParameterOutOfRange(f"Order must be positive, got {alpha}")
    if not t > 0:
        raise ParameterOutOfRange(f"t must be positive, got {t}")


def _dyadic_edges(end: float) -> list:
    edges = []
    edge = end / 2.0
    while edge > 1.0:
        edges.append(edge)
        edge /= 2.0
    return sorted(edges)


def rl_integral(f: Evaluator, alpha: float, t: float, cfg: Optional[QuadConfig] = None) -> float:
    """
    Riemann-Liouville integral (1/Gamma(alpha)) int_0^t (t - tau)^(alpha-1) f(tau) dtau.

    The (t - tau)^(alpha-1) factor is the QUADPACK algebraic weight at tau = t.
    For t > 2 the weight is applied on [t/2, t] only and [0, t/2] is split
    at dyadic points.
    """
    cfg = cfg or DEFAULT_QUAD
    _check_positive(alpha, t)
    f = f.profile if isinstance(f, HalfLineFunction) else f
    weight = (0.0, alpha - 1.0)

    if t <= 2.0:
        value = integrate(f, 0.0, t, cfg, weight="alg", wvar=weight).value
    else:
        half = t / 2.0
        value = integrate(f, half, t, cfg, weight="alg", wvar=weight).value
        value += integrate(
            lambda tau: (t - tau) ** (alpha - 1.0) * f(tau),
            0.0,
            half,
            cfg,
            points=_dyadic_edges(t)[:-1] or None,
        ).value
    return value / float(gamma(alpha))


def caputo(f: HalfLineFunction, alpha: float, t: float, cfg: Optional[QuadConfig] = None) -> float:
    """
    Caputo derivative J^(m - alpha) f^(m)(t), m = ceil(alpha).

    Integer alpha returns the ordinary derivative. At t = 0 the value is the
    one-sided limit, which is 0 for fractional alpha.
    """
    m = math.ceil(alpha)
    derivative = f.derivative(m)
    if t == 0 and alpha > 0:
        return float(derivative(0.0)) if m == alpha else 0.0
    _check_positive(alpha, t)
    if m == alpha:
        return float(derivative(t))
    return rl_integral(derivative, m - alpha, t, cfg)


def riemann_liouville(
    f: HalfLineFunction,
    alpha: float,
    t: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    Riemann-Liouville derivative from the Caputo one and the initial values:
    D^alpha f = Caputo + sum_{j<m} f^(j)(0+) t^(j-alpha) / Gamma(j - alpha + 1).

    At t = 0 the limit exists only when the singular initial-value terms vanish.
    """
    value = caputo(f, alpha, t, cfg)
    m = math.ceil(alpha)
    if t == 0:
        if any(f.initial_value(j) != 0 for j in range(m) if j < alpha):
            raise ParameterOutOfRange(
                f"Riemann-Liouville derivative of '{f.name}' is unbounded at t = 0"
            )
        return value
    for j in range(m):
        value += f.initial_value(j) * t ** (j - alpha) * float(rgamma(j - alpha + 1.0))
    return value


@dataclass(frozen=True)
class EKernel:
    """
    E(xi) = (2/pi) sin(pi alpha/2) / (1 - xi^2) - cos(pi alpha/2) xi delta(xi - 1).

    The delta part is kept as a weight and applied by point evaluation.
    """

    alpha: float

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not 0.0 < self.alpha <= 2.0:
            raise ParameterOutOfRange(f"Kernel order must lie in (0, 2], got {self.alpha}")

    @property
    def smooth_coefficient(self) -> float:
        return 2.0 / math.pi * math.sin(math.pi * self.alpha / 2.0)

    @property
    def delta_weight(self) -> float:
        return -math.cos(math.pi * self.alpha / 2.0)

    @property
    def has_smooth_part(self) -> bool:
        return abs(math.sin(math.pi * self.alpha / 2.0)) >= SINE_FLOOR

    def smooth_part(self, xi):
        return self.smooth_coefficient / (1.0 - np.asarray(xi) ** 2)

    def mellin_closed_form(self, s):
        """sin(pi (alpha - s)/2) / sin(pi s/2)."""
        s = np.asarray(s, dtype=complex)
        with np.errstate(divide="ignore"):
            value = np.exp(
                np.asarray(log_sin_pi((self.alpha - s) / 2.0)) - np.asarray(log_sin_pi(s / 2.0))
            )
        return value[()] if value.ndim == 0 else value

    def mellin_numeric(self, s, cfg: Optional[QuadConfig] = None) -> complex:
        """
        PV Mellin transform of the smooth part plus the delta weight.

        In u = log xi the pole sits at u = 0; each half-line is written in
        the form that cannot overflow.
        """
        s = complex(s)
        if not 0.0 < s.real < 2.0:
            raise ValueError(f"Kernel Mellin transform needs 0 < Re s < 2, got {s}")
        coefficient = self.smooth_coefficient

        def integrand(u):
            if u > 0:
                return coefficient * cmath.exp((s - 2.0) * u) / math.expm1(-2.0 * u)
            return -coefficient * cmath.exp(s * u) / math.expm1(2.0 * u)

        smooth = 0j
        if self.has_smooth_part:
            smooth = principal_value(integrand, 0.0, -math.inf, math.inf, cfg, complex_valued=True)
        return complex(smooth) + self.delta_weight


def ekernel_convolution(
    g: Callable,
    alpha: float,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    int_0^inf g(xi) E(|x|/xi) dxi/xi for a one-sided derivative g.

    The smooth part is a principal value in u = log xi over
    xi in [1e-8 |x|, 1e8 max(1, |x|)] with the pole at log |x|; the delta
    part contributes -cos(pi alpha/2) g(|x|). At x = 0 the kernel is the
    constant E(0) and the plain convolution applies.
    """
    cfg = cfg or DEFAULT_QUAD
    kernel = EKernel(alpha)
    x = abs(x)
    value = kernel.delta_weight * float(g(x)) if kernel.delta_weight != 0 else 0.0

    if not kernel.has_smooth_part:
        return value

    if x == 0:
        return value + mellin_convolution(g, lambda z: kernel.smooth_part(z), 0.0, cfg)

    log_x = math.log(x)
    lower = log_x - math.log(CONVOLUTION_DECADES)
    upper = math.log(max(1.0, x) * CONVOLUTION_DECADES)
    coefficient = kernel.smooth_coefficient

    def integrand(u):
        # 1 - (x/xi)^2 with xi = e^u
        return float(g(math.exp(u))) * coefficient / -math.expm1(2.0 * (log_x - u))

    return value + principal_value(integrand, log_x, lower, upper, cfg)


def riesz_via_caputo(
    f: HalfLineFunction,
    alpha: float,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """Symmetric Riesz derivative of f(|x|) from the Caputo derivative and the E-kernel."""
    cfg = cfg or DEFAULT_QUAD
    inner = cfg.loosened(0.1)
    return ekernel_convolution(lambda xi: caputo(f, alpha, xi, inner), alpha, x, cfg)


def riesz_via_riemann_liouville(
    f: HalfLineFunction,
    alpha: float,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """Same as riesz_via_caputo with the Riemann-Liouville derivative."""
    cfg = cfg or DEFAULT_QUAD
    inner = cfg.loosened(0.1)
    return ekernel_convolution(lambda xi: riemann_liouville(f, alpha, xi, inner), alpha, x, cfg)


def hilbert_transform(profile: Callable, x: float, cfg: Optional[QuadConfig] = None) -> float:
    """PV int phi(|y|) / (x - y) dy over the real line."""
    return principal_value(
        lambda y: float(profile(abs(y))) / (x - y), x, -math.inf, math.inf, cfg
    )


def hilbert_derivative(
    f: Union[RadialFunction, Callable],
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    -(1/pi) d/dx PV int phi(|y|)/(x - y) dy, the alpha = 1 Riesz derivative.

    Central differences at h, h/2, h/4 (h = 0.05 max(1, |x|)) with two
    Richardson levels.
    """
    cfg = cfg or DEFAULT_QUAD
    profile = f.profile if isinstance(f, RadialFunction) else f
    h = 0.05 * max(1.0, abs(x))

    def central(step):
        return (
            hilbert_transform(profile, x + step, cfg) - hilbert_transform(profile, x - step, cfg)
        ) / (2.0 * step)

    d1, d2, d3 = central(h), central(h / 2.0), central(h / 4.0)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d3 - d2) / 3.0
    return -(16.0 * r2 - r1) / 15.0 / math.pi
