"""Fractional Laplacian routes and the cross-route equivalence harness."""

import asyncio
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_QUAD, ContourSpec, QuadConfig
from corpus import MellinImage, RadialFunction
from errors import (
    DimensionUnsupported,
    NumericalError,
    ParameterOutOfRange,
    RouteError,
    UnsupportedInput,
)
from mellin import FracOrder, apply_multiplier_and_invert, image_of, laplacian_multiplier
from quadrature import cosine_transform, integrate, sine_transform
from specfun import gamma

SQRT_PI = math.sqrt(math.pi)

# Below this time the heat difference is replaced by t u''(x)
HEAT_SMALL_TIME = 1e-6

# Floor of the relative discrepancy denominator
DISCREPANCY_FLOOR = 1e-12


class RouteId(Enum):
    """Operator routes to L f."""

    HEAT = "heat"
    FOURIER = "fourier"
    SINGULAR = "singular"
    MELLIN = "mellin"
    RIESZ_CHECK = "riesz"

    @classmethod
    def from_name(cls, name: str) -> "RouteId":
        """Parse a command-line route name."""
        for route in cls:
            if route.value == name.strip().lower():
                return route
        raise ValueError(
            f"Unknown route: {name}. Valid routes: {', '.join(r.value for r in cls)}"
        )

    def applicable(self, order: FracOrder) -> bool:
        """Whether this route is defined for the given dimension and order."""
        if self in (RouteId.HEAT, RouteId.SINGULAR):
            return order.n == 1
        if self is RouteId.FOURIER:
            return order.n in (1, 3)
        if self is RouteId.RIESZ_CHECK:
            return order.n == 1 and 1.0 < order.alpha < 2.0
        return True


def _require_dimension(f: RadialFunction, order: FracOrder, allowed: Tuple[int, ...], route: str):
    if order.n not in allowed:
        raise DimensionUnsupported(
            f"{route} route supports n in {allowed}, got n = {order.n}"
        )
    if f.n != order.n:
        raise DimensionUnsupported(
            f"'{f.name}' is bound to n = {f.n} but the order has n = {order.n}"
        )


def _require_integrable(f: RadialFunction, route: str):
    if not f.integrable:
        raise UnsupportedInput(f"{route} route needs a decaying profile, '{f.name}' does not decay")


def heat_semigroup_route(
    f: RadialFunction,
    order: FracOrder,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    L u(x) = (-1/Gamma(-alpha/2)) int_0^inf (e^{t Laplacian} u - u)(x) t^(-1-alpha/2) dt.

    The heat propagator acts on the even extension as
    (1/sqrt(pi)) int_0^inf [u(x + 2 sqrt(t) z) + u(x - 2 sqrt(t) z)] e^(-z^2) dz.
    For t < 1e-6 the difference is t u''(x), integrated in closed form; on
    [1e-6, 1] the difference is integrated in log t; on [1, inf) the
    propagated value is integrated directly and the -u(x) part in closed form.

    Raises:
        DimensionUnsupported: for n != 1
        UnsupportedInput: for a non-decaying profile
    """
    cfg = cfg or DEFAULT_QUAD
    _require_dimension(f, order, (1,), "heat")
    _require_integrable(f, "heat")
    alpha = order.alpha
    outer_cfg = cfg.loosened(10.0)
    u_x = float(f(x))

    def propagated(t: float, subtract: bool) -> float:
        spread = 2.0 * math.sqrt(t)
        # past z = 8 the Gaussian weight is below machine precision
        kink = [abs(x) / spread] if 0 < abs(x) / spread < 8.0 else None
        offset = 2.0 * u_x if subtract else 0.0

        def integrand(z):
            return (f(x + spread * z) + f(x - spread * z) - offset) * math.exp(-z * z)

        return integrate(integrand, 0.0, math.inf, cfg, points=kink).value / SQRT_PI

    small = float(f.second_derivative(x)) * HEAT_SMALL_TIME ** (1.0 - alpha / 2.0) / (1.0 - alpha / 2.0)

    middle = integrate(
        lambda tau: propagated(math.exp(tau), True) * math.exp(-alpha * tau / 2.0),
        math.log(HEAT_SMALL_TIME),
        0.0,
        outer_cfg,
    ).value

    late = integrate(
        lambda t: propagated(t, False) * t ** (-1.0 - alpha / 2.0),
        1.0,
        math.inf,
        outer_cfg,
    ).value - u_x * 2.0 / alpha

    return -(small + middle + late) / float(gamma(-alpha / 2.0))


def _fourier_image(f: RadialFunction, cfg: QuadConfig) -> Callable[[float], float]:
    if f.fourier_profile is not None:
        return lambda k: float(f.fourier_profile(k))
    inner = cfg.loosened(0.1)
    if f.n == 1:
        return lambda k: cosine_transform(f.profile, k, inner)

    def three_dimensional(k):
        if k == 0:
            return 4.0 * math.pi * integrate(lambda r: r * r * f.profile(r), 0.0, math.inf, inner).value
        return 4.0 * math.pi / k * sine_transform(lambda r: r * f.profile(r), k, inner)

    return three_dimensional


def fourier_route(
    f: RadialFunction,
    order: FracOrder,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    Inverse radial Fourier integral of -|kappa|^alpha F f(kappa).

    n = 1: -(1/pi) int_0^inf cos(kappa x) kappa^alpha F f(kappa) dkappa.
    n = 3: -(1/(2 pi^2 |x|)) int_0^inf kappa^(1+alpha) F f(kappa) sin(kappa |x|) dkappa.

    Raises:
        DimensionUnsupported: for n not in {1, 3}
    """
    cfg = cfg or DEFAULT_QUAD
    _require_dimension(f, order, (1, 3), "fourier")
    _require_integrable(f, "fourier")
    alpha = order.alpha
    transform = _fourier_image(f, cfg)
    x = abs(x)

    if order.n == 1:
        integrand = lambda k: k ** alpha * transform(k)
        if x == 0:
            value = integrate(integrand, 0.0, math.inf, cfg).value
        else:
            value = integrate(integrand, 0.0, math.inf, cfg, weight="cos", wvar=x).value
        return -value / math.pi

    if x == 0:
        value = integrate(lambda k: k ** (2.0 + alpha) * transform(k), 0.0, math.inf, cfg).value
        return -value / (2.0 * math.pi ** 2)
    value = integrate(
        lambda k: k ** (1.0 + alpha) * transform(k), 0.0, math.inf, cfg, weight="sin", wvar=x
    ).value
    return -value / (2.0 * math.pi ** 2 * x)


def singular_constant(alpha: float) -> float:
    """Gamma(1 + alpha) sin(pi alpha / 2) / pi."""
    return float(gamma(1.0 + alpha)) * math.sin(math.pi * alpha / 2.0) / math.pi


def singular_integral_route(
    f: RadialFunction,
    order: FracOrder,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    (Gamma(1+alpha)/pi) sin(pi alpha/2) int_0^inf [f(x+z) - 2f(x) + f(x-z)] z^(-1-alpha) dz.

    On (0, delta] the second difference is f''(x) z^2; beyond Z the -2 f(x)
    part is integrated in closed form.
    """
    cfg = cfg or DEFAULT_QUAD
    _require_dimension(f, order, (1,), "singular")
    alpha = order.alpha
    scale = max(1.0, abs(x))
    delta = 1e-3 * scale
    cutoff = 10.0 * scale
    f_x = float(f(x))

    local = float(f.second_derivative(x)) * delta ** (2.0 - alpha) / (2.0 - alpha)

    kink = [abs(x)] if delta < abs(x) < cutoff else None
    middle = integrate(
        lambda z: (f(x + z) - 2.0 * f_x + f(x - z)) * z ** (-1.0 - alpha),
        delta,
        cutoff,
        cfg,
        points=kink,
    ).value

    tail = integrate(
        lambda z: (f(x + z) + f(x - z)) * z ** (-1.0 - alpha),
        cutoff,
        math.inf,
        cfg,
    ).value - 2.0 * f_x * cutoff ** (-alpha) / alpha

    return singular_constant(alpha) * (local + middle + tail)


def mellin_route(
    f: RadialFunction,
    order: FracOrder,
    x: float,
    spec: Optional[ContourSpec] = None,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """Contour inversion of m(s) M f(s - alpha) at r = |x|."""
    if f.n != order.n:
        raise DimensionUnsupported(
            f"'{f.name}' is bound to n = {f.n} but the order has n = {order.n}"
        )
    return apply_multiplier_and_invert(f, order, abs(x), spec, cfg)


def riesz_normalization(alpha: float, n: int = 1) -> float:
    """gamma_n(alpha) = Gamma((n - alpha)/2) / (2^alpha pi^(n/2) Gamma(alpha/2))."""
    if not 0.0 < alpha < n:
        raise ParameterOutOfRange(f"Riesz potential needs 0 < alpha < n = {n}, got {alpha}")
    return float(gamma((n - alpha) / 2.0)) / (
        2.0 ** alpha * math.pi ** (n / 2.0) * float(gamma(alpha / 2.0))
    )


def _riesz_integral(u: Callable, alpha: float, x: float, cfg: QuadConfig) -> float:
    """gamma_1(alpha) int_0^inf [u(x+z) + u(x-z)] z^(alpha-1) dz."""
    normalization = riesz_normalization(alpha, 1)
    x = abs(x)
    cutoff = 10.0 * max(1.0, x)

    def pair(z):
        return u(x + z) + u(x - z)

    if x > 0:
        near = integrate(pair, 0.0, x, cfg, weight="alg", wvar=(alpha - 1.0, 0.0)).value
        near += integrate(lambda z: pair(z) * z ** (alpha - 1.0), x, cutoff, cfg).value
    else:
        near = integrate(pair, 0.0, cutoff, cfg, weight="alg", wvar=(alpha - 1.0, 0.0)).value
    far = integrate(lambda z: pair(z) * z ** (alpha - 1.0), cutoff, math.inf, cfg).value
    return normalization * (near + far)


def riesz_potential(
    f: RadialFunction,
    alpha: float,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    One-dimensional Riesz potential I^alpha f(x), 0 < alpha < 1.

    The weak singularity at z = 0 goes to the QUADPACK algebraic weight.

    Raises:
        ParameterOutOfRange: unless 0 < alpha < 1
        DimensionUnsupported: for n != 1
    """
    cfg = cfg or DEFAULT_QUAD
    if f.n != 1:
        raise DimensionUnsupported(f"Riesz potential is implemented for n = 1, got n = {f.n}")
    _require_integrable(f, "riesz potential")
    return _riesz_integral(f, alpha, x, cfg)


def riesz_potential_image(
    f: RadialFunction,
    alpha: float,
    cfg: Optional[QuadConfig] = None,
) -> RadialFunction:
    """
    I^alpha f as a RadialFunction.

    The profile is evaluated by riesz_potential; the Mellin image is the
    closed form -M f(s + alpha) / m(s + alpha) on (lo, n - alpha), and the
    Fourier profile is |kappa|^(-alpha) F f when F f is known.
    """
    cfg = cfg or DEFAULT_QUAD
    order = FracOrder(alpha, f.n)
    riesz_normalization(alpha, f.n)
    base = image_of(f, cfg)
    lo, _ = base.strip

    def evaluate(s):
        shifted = np.asarray(s, dtype=complex) + alpha
        return -np.asarray(base(shifted)) / np.asarray(laplacian_multiplier(shifted, order))

    def profile(r):
        values = np.vectorize(lambda point: riesz_potential(f, alpha, point, cfg), otypes=[float])(r)
        return values[()] if np.ndim(values) == 0 else values

    fourier = None
    if f.fourier_profile is not None:
        fourier = lambda k: np.abs(k) ** (-alpha) * f.fourier_profile(k)

    return RadialFunction(
        name=f"riesz{alpha:g}_{f.name}",
        profile=profile,
        n=f.n,
        mellin=MellinImage(evaluate, (lo, f.n - alpha), continued=base.continued),
        fourier_profile=fourier,
        decay=("power", f.n - alpha),
    )


def riesz_check_route(
    f: RadialFunction,
    order: FracOrder,
    x: float,
    cfg: Optional[QuadConfig] = None,
) -> float:
    """
    L f = I^(2 - alpha)[f''] for n = 1 and 1 < alpha < 2.

    Raises:
        ParameterOutOfRange: outside 1 < alpha < 2
    """
    cfg = cfg or DEFAULT_QUAD
    _require_dimension(f, order, (1,), "riesz")
    if not 1.0 < order.alpha < 2.0:
        raise ParameterOutOfRange(f"riesz route needs 1 < alpha < 2, got {order.alpha}")
    _require_integrable(f, "riesz")
    return _riesz_integral(f.second_derivative, 2.0 - order.alpha, x, cfg)


def evaluate_route(
    route: RouteId,
    f: RadialFunction,
    order: FracOrder,
    x: float,
    cfg: Optional[QuadConfig] = None,
    spec: Optional[ContourSpec] = None,
) -> float:
    """Dispatch one route at one point."""
    if route is RouteId.HEAT:
        return heat_semigroup_route(f, order, x, cfg)
    if route is RouteId.FOURIER:
        return fourier_route(f, order, x, cfg)
    if route is RouteId.SINGULAR:
        return singular_integral_route(f, order, x, cfg)
    if route is RouteId.MELLIN:
        return mellin_route(f, order, x, spec, cfg)
    if route is RouteId.RIESZ_CHECK:
        return riesz_check_route(f, order, x, cfg)
    raise ValueError(f"Unknown route: {route}")


def relative_discrepancy(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), DISCREPANCY_FLOOR)


@dataclass
class EvalReport:
    """Per-point values of several routes and their pairwise discrepancy."""

    points: List[float]
    values: Dict[RouteId, List[float]] = field(default_factory=dict)
    durations: Dict[RouteId, float] = field(default_factory=dict)

    def record(self, route: RouteId, values: Sequence[float], duration: float = 0.0):
        """Store the values of one route; a route can only be recorded once."""
        if route in self.values:
            raise ValueError(f"Route '{route.value}' already recorded")
        if len(values) != len(self.points):
            raise ValueError(
                f"Route '{route.value}' has {len(values)} values for {len(self.points)} points"
            )
        self.values[route] = [float(v) for v in values]
        self.durations[route] = duration

    @property
    def routes(self) -> List[RouteId]:
        return list(self.values.keys())

    def point_discrepancy(self, index: int) -> float:
        """Largest pairwise relative discrepancy at one point."""
        column = [self.values[route][index] for route in self.routes]
        worst = 0.0
        for i, a in enumerate(column):
            for b in column[i + 1:]:
                worst = max(worst, relative_discrepancy(a, b))
        return worst

    @property
    def pairwise_max_rel_err(self) -> float:
        return max((self.point_discrepancy(i) for i in range(len(self.points))), default=0.0)

    def as_rows(self) -> List[List[float]]:
        """Rows [x, value per route..., discrepancy]."""
        return [
            [x] + [self.values[route][i] for route in self.routes] + [self.point_discrepancy(i)]
            for i, x in enumerate(self.points)
        ]


async def _gather_cells(cells: List[Callable[[], float]]) -> List:
    tasks = [asyncio.to_thread(cell) for cell in cells]
    return await asyncio.gather(*tasks, return_exceptions=True)


def run_cells(cells: List[Callable[[], float]]) -> List:
    """
    Evaluate independent cells concurrently.

    Results come back in the order of cells; failures are returned as
    exception objects for the caller to report.
    """
    return asyncio.run(_gather_cells(cells))


def _timed(route: RouteId, f: RadialFunction, order: FracOrder, x: float, cfg, spec):
    def cell():
        start = time.perf_counter()
        value = evaluate_route(route, f, order, x, cfg, spec)
        return value, time.perf_counter() - start

    return cell


def equivalence_report(
    f: RadialFunction,
    order: FracOrder,
    points: Sequence[float],
    routes: Sequence[RouteId],
    cfg: Optional[QuadConfig] = None,
    spec: Optional[ContourSpec] = None,
    output_callback: Optional[Callable] = None,
) -> EvalReport:
    """
    Evaluate every (point, route) cell and compare the routes.

    Args:
        f: Radial function
        order: Fractional order and dimension
        points: Evaluation points
        routes: Routes to compare
        cfg: Quadrature tolerances
        spec: Contour settings for the Mellin route
        output_callback: Optional callback(message, msg_type) for progress

    Returns:
        EvalReport with values in the order of routes

    Raises:
        UnsupportedInput: if a route does not apply to the order
        RouteError: if a cell fails, tagging the failing route
    """
    notify = output_callback or (lambda message, msg_type="info": None)
    points = [float(x) for x in points]
    routes = list(dict.fromkeys(routes))
    if not points:
        raise ValueError("At least one evaluation point is required")
    if not routes:
        raise ValueError("At least one route is required")
    for route in routes:
        if not route.applicable(order):
            raise UnsupportedInput(
                f"Route '{route.value}' does not apply to alpha = {order.alpha}, n = {order.n}"
            )

    notify(
        f"Evaluating {', '.join(r.value for r in routes)} at {len(points)} points "
        f"(alpha={order.alpha:g}, n={order.n}, f={f.name})",
        "info",
    )

    cells = [_timed(route, f, order, x, cfg, spec) for route in routes for x in points]
    results = run_cells(cells)

    report = EvalReport(points=points)
    for index, route in enumerate(routes):
        chunk = results[index * len(points):(index + 1) * len(points)]
        for result in chunk:
            if isinstance(result, NumericalError):
                notify(f"Route {route.value} failed: {result}", "error")
                raise RouteError(route.value, result) from result
            if isinstance(result, Exception):
                raise result
        report.record(
            route,
            [value for value, _ in chunk],
            duration=sum(elapsed for _, elapsed in chunk),
        )
        notify(f"✓ {route.value}: {report.durations[route]:.2f}s", "success")

    return report
