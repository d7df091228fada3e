"""Numerical integration toolbox built on QUADPACK and Gauss-Legendre panels."""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
from scipy.integrate import quad

from config import DEFAULT_QUAD, ContourSpec, QuadConfig
from errors import NoConvergence, NotSimplePole, TailTooFat

Number = Union[float, complex]

# QUADPACK error estimates are pessimistic; only fail well above tolerance
ERROR_SLACK = 100.0

# QAWF works to an absolute tolerance only; it is scaled by int |f| over these cycles
SCALE_CYCLES = 4

# QUADPACK returns values near the float limit when a cycle fails
OVERFLOW_GUARD = np.finfo(float).max / 2

PANEL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(PANEL_ORDER)

LOG_SCALE_LIMIT = 700.0
MAX_TRAPEZOID_NODES = 1 << 18


@dataclass
class QuadResult:
    """Integral value with its error estimate."""

    value: Number
    error: float
    evaluations: int = 0

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            value=self.value + other.value,
            error=self.error + other.error,
            evaluations=self.evaluations + other.evaluations,
        )


def _tolerance(value: Number, cfg: QuadConfig) -> float:
    return max(cfg.abs_tol, cfg.rel_tol * abs(value))


def _oscillatory_scale(f: Callable[[float], float], a: float, omega: float, cfg: QuadConfig) -> float:
    """Size of int |f| over the first few QAWF cycles."""
    omega = abs(omega)
    if omega == 0.0:
        return 0.0
    cycle = (2 * math.floor(omega) + 1) * math.pi / omega
    out = quad(
        lambda x: abs(float(f(x))),
        a,
        a + SCALE_CYCLES * cycle,
        epsrel=1e-3,
        limit=cfg.max_subdivisions,
        full_output=1,
    )
    return out[0] if math.isfinite(out[0]) else 0.0


def _quad_real(
    f: Callable[[float], float],
    a: float,
    b: float,
    cfg: QuadConfig,
    points: Optional[Sequence[float]] = None,
    weight: Optional[str] = None,
    wvar=None,
) -> QuadResult:
    kwargs = {
        "epsabs": cfg.abs_tol,
        "epsrel": cfg.rel_tol,
        "limit": cfg.max_subdivisions,
        "full_output": 1,
    }
    fourier_tail = weight in ("cos", "sin") and math.isinf(b)
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
        if fourier_tail:
            kwargs["epsabs"] = max(cfg.abs_tol, cfg.rel_tol * _oscillatory_scale(f, a, wvar, cfg))
    elif points:
        kwargs["points"] = list(points)

    out = quad(lambda x: float(f(x)), a, b, **kwargs)
    value, error, info = out[0], out[1], out[2]
    message = out[3] if len(out) > 3 else None
    evaluations = info.get("neval", 0) if isinstance(info, dict) else 0

    if not math.isfinite(value) or abs(value) >= OVERFLOW_GUARD:
        raise NoConvergence(f"non-finite integral on [{a}, {b}]", stage="integrate")
    if fourier_tail and message is not None:
        raise NoConvergence(
            f"{str(message).strip()} (oscillatory tail on [{a}, {b}])",
            stage="integrate",
        )
    if message is not None and error > ERROR_SLACK * _tolerance(value, cfg):
        raise NoConvergence(
            f"{str(message).strip()} (estimate {error:.2e} on [{a}, {b}])",
            stage="integrate",
        )

    return QuadResult(value=value, error=error, evaluations=evaluations)


def _integrate_pieces(f, a, b, cfg, points, weight, wvar) -> QuadResult:
    inner = sorted(p for p in (points or []) if a < p < b)
    if not inner or weight is not None or (math.isfinite(a) and math.isfinite(b)):
        return _quad_real(f, a, b, cfg, points=inner, weight=weight, wvar=wvar)

    # QUADPACK refuses break points on infinite ranges: split by hand
    edges = [a] + inner + [b]
    total = QuadResult(0.0, 0.0)
    for left, right in zip(edges[:-1], edges[1:]):
        total = total + _quad_real(f, left, right, cfg)
    return total


def integrate(
    f: Callable,
    a: float,
    b: float,
    cfg: Optional[QuadConfig] = None,
    points: Optional[Sequence[float]] = None,
    weight: Optional[str] = None,
    wvar=None,
    complex_valued: bool = False,
) -> QuadResult:
    """
    Adaptive integral of f over [a, b].

    Infinite limits, break points and the QUADPACK weights ('alg' for
    algebraic endpoint singularities, 'cos'/'sin' for Fourier integrals) are
    passed through to scipy's quad. Complex integrands are integrated as
    real and imaginary parts.

    Args:
        f: Integrand
        a: Lower limit (may be -inf)
        b: Upper limit (may be inf)
        cfg: Quadrature tolerances
        points: Interior break points
        weight: QUADPACK weight name
        wvar: Weight parameters
        complex_valued: Whether f returns complex values

    Returns:
        QuadResult with value and error estimate

    Raises:
        NoConvergence: when the subdivision budget is exhausted above tolerance
    """
    cfg = cfg or DEFAULT_QUAD
    if a == b:
        return QuadResult(0.0, 0.0)

    if not complex_valued:
        return _integrate_pieces(f, a, b, cfg, points, weight, wvar)

    real = _integrate_pieces(lambda x: complex(f(x)).real, a, b, cfg, points, weight, wvar)
    imag = _integrate_pieces(lambda x: complex(f(x)).imag, a, b, cfg, points, weight, wvar)
    return QuadResult(
        value=complex(real.value, imag.value),
        error=math.hypot(real.error, imag.error),
        evaluations=real.evaluations + imag.evaluations,
    )


def vectorized(f: Callable) -> Callable:
    """Wrap a scalar evaluator so it accepts numpy arrays."""

    def wrapper(x):
        x = np.asarray(x)
        try:
            values = np.asarray(f(x))
            if values.shape == x.shape:
                return values
        except (TypeError, ValueError):
            pass
        return np.vectorize(f, otypes=[complex])(x)

    return wrapper


def _settle_overflow(magnitude: np.ndarray, cutoff: float) -> np.ndarray:
    """
    Zero the NaNs that lie beyond a sample already below cutoff, counted
    outwards from the peak. Those come from inf * 0 once e^u overflows.
    Any other NaN is kept alive as inf.
    """
    magnitude = magnitude.copy()
    nan = np.isnan(magnitude)
    if not nan.any():
        return magnitude
    center = int(np.nanargmax(np.where(np.isinf(magnitude), np.nan, magnitude)))
    small = magnitude <= cutoff

    right = np.nonzero(small[center:])[0]
    if right.size:
        tail = slice(center + right[0], None)
        magnitude[tail] = np.where(nan[tail], 0.0, magnitude[tail])
    left = np.nonzero(small[: center + 1])[0]
    if left.size:
        tail = slice(0, left[-1] + 1)
        magnitude[tail] = np.where(nan[tail], 0.0, magnitude[tail])

    return np.where(np.isnan(magnitude), np.inf, magnitude)


def integrate_line(h: Callable, cfg: Optional[QuadConfig] = None) -> QuadResult:
    """
    Integral of h(u) over the whole real line for analytic, exponentially
    decaying h, by the trapezoid rule with step halving.

    The line is truncated where |h| falls below tail_cutoff_tol relative to
    its peak. This is the r = e^u form of a semi-infinite integral.

    Raises:
        NoConvergence: if the tails do not decay or halving does not settle
    """
    cfg = cfg or DEFAULT_QUAD
    h = vectorized(h)

    grid = np.arange(-LOG_SCALE_LIMIT, LOG_SCALE_LIMIT + 1.0, 1.0)
    with np.errstate(all="ignore"):
        magnitude = np.abs(h(grid))
    finite = magnitude[np.isfinite(magnitude)]
    peak = float(finite.max()) if finite.size else 0.0
    if peak == 0.0:
        return QuadResult(0.0, 0.0, evaluations=grid.size)

    magnitude = _settle_overflow(magnitude, cfg.tail_cutoff_tol * peak)
    alive = np.nonzero(magnitude > cfg.tail_cutoff_tol * peak)[0]
    if alive[0] == 0 or alive[-1] == grid.size - 1:
        raise NoConvergence("integrand does not decay on the log scale", stage="integrate_line")
    u_lo = grid[alive[0]] - 2.0
    u_hi = grid[alive[-1]] + 2.0

    step = 0.5
    nodes = np.arange(u_lo, u_hi + step / 2, step)
    with np.errstate(all="ignore"):
        samples = h(nodes)
    total = step * np.sum(samples)
    # rounding floor of the sum, relevant when the integral cancels
    noise = 64 * np.finfo(float).eps * step * float(np.sum(np.abs(samples)))
    evaluations = grid.size + nodes.size

    while nodes.size < MAX_TRAPEZOID_NODES:
        midpoints = nodes[:-1] + step / 2
        with np.errstate(all="ignore"):
            samples = h(midpoints)
        refined = total / 2 + (step / 2) * np.sum(samples)
        evaluations += midpoints.size
        error = abs(refined - total)
        nodes = np.sort(np.concatenate([nodes, midpoints]))
        step /= 2
        total = refined
        if not np.isfinite(total):
            raise NoConvergence("non-finite trapezoid sum", stage="integrate_line")
        if error <= max(_tolerance(total, cfg), noise) and step <= 0.125:
            value = complex(total)
            return QuadResult(
                value=value if value.imag != 0 else value.real,
                error=float(error),
                evaluations=evaluations,
            )

    raise NoConvergence(
        f"trapezoid halving did not settle (last change {error:.2e})", stage="integrate_line"
    )


def integrate_log_scale(f: Callable, cfg: Optional[QuadConfig] = None) -> QuadResult:
    """Integral of f(r) over (0, inf) under the change of variable r = e^u."""

    def h(u):
        r = np.exp(u)
        values = np.asarray(f(r))
        with np.errstate(all="ignore"):
            return np.where(values == 0, 0.0, values * r)

    return integrate_line(h, cfg)


def cosine_transform(f: Callable, kappa: float, cfg: Optional[QuadConfig] = None) -> float:
    """
    Radial one-dimensional Fourier transform 2 * int_0^inf cos(kappa r) f(r) dr.

    Uses the QUADPACK Fourier-integral algorithm: the range is cut at the
    cycles of the cosine and the alternating series of cycle integrals is
    accelerated with the epsilon algorithm.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if kappa == 0:
        return 2.0 * integrate(f, 0.0, math.inf, cfg).value
    return 2.0 * integrate(f, 0.0, math.inf, cfg, weight="cos", wvar=kappa).value


def sine_transform(f: Callable, kappa: float, cfg: Optional[QuadConfig] = None) -> float:
    """int_0^inf sin(kappa r) f(r) dr by the QUADPACK Fourier-integral algorithm."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if kappa == 0:
        return 0.0
    return integrate(f, 0.0, math.inf, cfg, weight="sin", wvar=kappa).value


def estimate_residue(f: Callable, pole: float, step: float) -> Number:
    """
    Residue of f at a simple pole from symmetric samples at step and step/2.

    Raises:
        NotSimplePole: if the estimate does not stabilise or the one-sided
            limits of (x - pole) f(x) do not meet
    """

    def sample(h):
        right = h * f(pole + h)
        left = -h * f(pole - h)
        return (right + left) / 2, abs(right - left)

    coarse, jump_coarse = sample(step)
    fine, jump_fine = sample(step / 2)
    scale = max(1.0, abs(fine))

    if not (np.isfinite(coarse) and np.isfinite(fine)):
        raise NotSimplePole(f"residue sample at {pole} is not finite", stage="principal_value")
    if abs(fine - coarse) > 1e-4 * scale:
        raise NotSimplePole(
            f"residue estimate at {pole} drifts from {coarse} to {fine}", stage="principal_value"
        )
    if jump_fine > 0.75 * jump_coarse + 1e-9 * scale:
        raise NotSimplePole(
            f"(x - {pole}) f(x) has no limit at the pole", stage="principal_value"
        )
    return fine


def principal_value(
    f: Callable,
    pole: float,
    a: float,
    b: float,
    cfg: Optional[QuadConfig] = None,
    step: Optional[float] = None,
    complex_valued: bool = False,
) -> Number:
    """
    Cauchy principal value of f over [a, b] across a simple pole.

    The residue R is estimated numerically and subtracted: on the symmetric
    window [pole - w, pole + w] the integrand
    [f(pole + v) - R/v] + [f(pole - v) + R/v] is regular at v = 0, and the
    log term R log((b_w - pole)/(pole - a_w)) of the subtracted part vanishes.
    The rest of [a, b] is integrated directly.

    Args:
        f: Integrand with a simple pole
        pole: Pole location, a < pole < b
        a: Lower limit (may be -inf)
        b: Upper limit (may be inf)
        cfg: Quadrature tolerances
        step: Residue sampling step (default 1e-3 * max(1, |pole|))
        complex_valued: Whether f returns complex values

    Returns:
        Principal value

    Raises:
        NotSimplePole: if the residue estimate does not stabilise
        NoConvergence: on quadrature failure
    """
    cfg = cfg or DEFAULT_QUAD
    if not a < pole < b:
        raise ValueError(f"Pole {pole} must lie strictly inside ({a}, {b})")

    scale = max(1.0, abs(pole))
    window = min(pole - a, b - pole, scale)
    step = step if step is not None else 1e-3 * scale
    if not 0 < step < window / 2:
        raise ValueError("Residue sampling step must be positive and well inside the window")

    residue = estimate_residue(f, pole, step)

    def subtracted(v):
        return (f(pole + v) - residue / v) + (f(pole - v) + residue / v)

    total = integrate(subtracted, 0.0, window, cfg, complex_valued=complex_valued).value
    if a < pole - window:
        total += integrate(f, a, pole - window, cfg, complex_valued=complex_valued).value
    if pole + window < b:
        total += integrate(f, pole + window, b, cfg, complex_valued=complex_valued).value
    return total


def _panel_rule(g: Callable, c: float, height: float, panels: int) -> complex:
    edges = np.linspace(-height, height, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    y = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    with np.errstate(all="ignore"):
        values = np.asarray(g(c + 1j * y), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise NoConvergence("non-finite contour integrand", stage="contour_integral")
    return complex(np.sum(w * values))


def contour_integral(
    g: Callable,
    spec: ContourSpec,
    cfg: Optional[QuadConfig] = None,
) -> complex:
    """
    (1/2 pi i) times the integral of g along Re s = c, |Im s| <= H.

    Composite 16-point Gauss-Legendre panels. H doubles until the integrand
    near +-iH is below tail_cutoff_tol relative to its size near the real
    axis; panels double until two estimates agree to target_tol.

    Args:
        g: Vectorised integrand s -> g(s)
        spec: Contour settings (abscissa must be set)
        cfg: Quadrature tolerances (tail cutoff)

    Returns:
        The inversion integral as complex

    Raises:
        TailTooFat: if the integrand has not decayed at max_height
        NoConvergence: if the node budget is exhausted
    """
    cfg = cfg or DEFAULT_QUAD
    if spec.abscissa is None:
        raise ValueError("Contour abscissa must be set before integrating")
    c = spec.abscissa

    def magnitude(ys: List[float]) -> float:
        s = c + 1j * np.array(ys + [-y for y in ys])
        with np.errstate(all="ignore"):
            values = np.abs(np.asarray(g(s), dtype=complex))
        values = np.where(np.isfinite(values), values, np.inf)
        return float(values.max())

    reference = max(1.0, magnitude([0.0, 0.5, 1.0]))
    height = spec.height
    while magnitude([0.9 * height, 0.95 * height, height]) > cfg.tail_cutoff_tol * reference:
        if 2 * height > spec.max_height:
            raise TailTooFat(
                f"integrand still above cutoff at |Im s| = {height}", stage="contour_integral"
            )
        height *= 2

    panels = max(2, math.ceil(spec.nodes / PANEL_ORDER))
    panels += panels % 2
    estimate = _panel_rule(g, c, height, panels)
    while True:
        if 2 * panels * PANEL_ORDER > spec.max_nodes:
            raise NoConvergence(
                f"contour rule did not settle within {spec.max_nodes} nodes",
                stage="contour_integral",
            )
        panels *= 2
        refined = _panel_rule(g, c, height, panels)
        if abs(refined - estimate) <= spec.target_tol * max(1.0, abs(refined)):
            return refined / (2.0 * math.pi)
        estimate = refined
