"""Radial test functions with closed-form Mellin and Fourier images."""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from specfun import gamma_ratio, log_sin_pi

DECAY_KINDS = ("exponential", "power", "none")

Evaluator = Callable[..., object]


@dataclass(frozen=True)
class MellinImage:
    """Mellin transform s -> M f(s) with its strip of convergence."""

    evaluate: Evaluator
    strip: Tuple[float, float]
    continued: bool = False

    def __post_init__(self):
        """Validate configuration after initialization."""
        lo, hi = self.strip
        if not lo < hi:
            raise ValueError(f"Empty Mellin strip {self.strip}")

    def __call__(self, s):
        return self.evaluate(s)

    def contains(self, re_s: float) -> bool:
        """True when Re s lies strictly inside the strip."""
        lo, hi = self.strip
        return lo < re_s < hi


@dataclass(frozen=True)
class RadialFunction:
    """
    Radial profile r -> f(r) in dimension n.

    The function on R^n is f(|x|); in one dimension this is the even
    extension of the profile.
    """

    name: str
    profile: Evaluator
    n: int = 1
    d2: Optional[Evaluator] = None
    mellin: Optional[MellinImage] = None
    fourier_profile: Optional[Evaluator] = None
    decay: Tuple[str, float] = ("exponential", 1.0)
    origin_order: float = 0.0

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.n < 1:
            raise ValueError("Dimension must be at least 1")
        kind, rate = self.decay
        if kind not in DECAY_KINDS:
            raise ValueError(f"Unknown decay kind '{kind}'. Valid kinds: {', '.join(DECAY_KINDS)}")
        if kind != "none" and rate <= 0:
            raise ValueError("Decay rate must be positive")

    def __call__(self, x):
        return self.profile(np.abs(x))

    def second_derivative(self, x):
        """Second radial derivative at |x|; the profile must be even."""
        if self.d2 is None:
            raise ValueError(f"'{self.name}' carries no second derivative")
        return self.d2(np.abs(x))

    @property
    def integrable(self) -> bool:
        return self.decay[0] != "none"

    @property
    def strip(self) -> Optional[Tuple[float, float]]:
        """Mellin strip implied by the decay metadata, None when empty."""
        kind, rate = self.decay
        lo = -self.origin_order
        if kind == "exponential":
            return (lo, math.inf)
        if kind == "power" and rate > lo:
            return (lo, rate)
        return None

    def decay_consistent(self) -> bool:
        """Check the decay tag against samples at r = 10 and r = 20."""
        kind, rate = self.decay
        near = abs(float(self.profile(10.0)))
        far = abs(float(self.profile(20.0)))
        if kind == "exponential":
            return far <= 10.0 * math.exp(-10.0 * rate) * near
        if kind == "power":
            if near == 0.0:
                return False
            expected = 2.0 ** (-rate)
            return expected / 10.0 <= far / near <= expected * 10.0
        return far >= 0.1 * near


@dataclass(frozen=True)
class TestFunction:
    """Named analytic test function used as ground truth."""

    __test__ = False

    name: str
    profile: Evaluator
    first_derivative: Evaluator
    second_derivative: Evaluator
    mellin_image: Optional[MellinImage] = None
    fourier_image_1d: Optional[Evaluator] = None
    fourier_image_3d: Optional[Evaluator] = None
    decay: Tuple[str, float] = ("exponential", 1.0)
    origin_order: float = 0.0
    description: str = ""

    def radial(self, n: int = 1) -> RadialFunction:
        """Bind the profile to dimension n."""
        fourier = {1: self.fourier_image_1d, 3: self.fourier_image_3d}.get(n)
        return RadialFunction(
            name=self.name,
            profile=self.profile,
            n=n,
            d2=self.second_derivative,
            mellin=self.mellin_image,
            fourier_profile=fourier,
            decay=self.decay,
            origin_order=self.origin_order,
        )

    def half_line(self):
        """The profile as a HalfLineFunction of the one-sided calculus."""
        from onesided import HalfLineFunction

        return HalfLineFunction.from_test_function(self)


SQRT_PI = math.sqrt(math.pi)


def _gaussian_mellin(s):
    return 0.5 * gamma_ratio([np.asarray(s) / 2.0], [])


def _exponential_mellin(s):
    return gamma_ratio([s], [])


def _lorentz_mellin(s):
    s = np.asarray(s, dtype=complex)
    return np.exp(math.log(math.pi / 2.0) - np.asarray(log_sin_pi(s / 2.0)))


def _bump_mellin(s):
    return 0.5 * gamma_ratio([np.asarray(s) / 2.0 + 1.0], [])


def _build_corpus() -> Dict[str, TestFunction]:
    functions = [
        TestFunction(
            name="gaussian",
            profile=lambda r: np.exp(-r * r),
            first_derivative=lambda r: -2.0 * r * np.exp(-r * r),
            second_derivative=lambda r: (4.0 * r * r - 2.0) * np.exp(-r * r),
            mellin_image=MellinImage(_gaussian_mellin, (0.0, math.inf), continued=True),
            fourier_image_1d=lambda k: SQRT_PI * np.exp(-k * k / 4.0),
            fourier_image_3d=lambda k: math.pi ** 1.5 * np.exp(-k * k / 4.0),
            decay=("exponential", 1.0),
            description="exp(-r^2)",
        ),
        TestFunction(
            name="exponential",
            profile=lambda r: np.exp(-r),
            first_derivative=lambda r: -np.exp(-r),
            second_derivative=lambda r: np.exp(-r),
            mellin_image=MellinImage(_exponential_mellin, (0.0, math.inf), continued=True),
            fourier_image_1d=lambda k: 2.0 / (1.0 + k * k),
            fourier_image_3d=lambda k: 8.0 * math.pi / (1.0 + k * k) ** 2,
            decay=("exponential", 1.0),
            description="exp(-r)",
        ),
        TestFunction(
            name="lorentz",
            profile=lambda r: 1.0 / (1.0 + r * r),
            first_derivative=lambda r: -2.0 * r / (1.0 + r * r) ** 2,
            second_derivative=lambda r: (6.0 * r * r - 2.0) / (1.0 + r * r) ** 3,
            mellin_image=MellinImage(_lorentz_mellin, (0.0, 2.0), continued=True),
            fourier_image_1d=lambda k: math.pi * np.exp(-np.abs(k)),
            decay=("power", 2.0),
            description="1/(1+r^2)",
        ),
        TestFunction(
            name="cauchy",
            profile=lambda r: 1.0 / (math.pi * (1.0 + r * r)),
            first_derivative=lambda r: -2.0 * r / (math.pi * (1.0 + r * r) ** 2),
            second_derivative=lambda r: (6.0 * r * r - 2.0) / (math.pi * (1.0 + r * r) ** 3),
            mellin_image=MellinImage(
                lambda s: np.asarray(_lorentz_mellin(s)) / math.pi, (0.0, 2.0), continued=True
            ),
            fourier_image_1d=lambda k: np.exp(-np.abs(k)),
            decay=("power", 2.0),
            description="1/(pi (1+r^2)), the alpha = 1 stable density at t = 1",
        ),
        TestFunction(
            name="bump",
            profile=lambda r: r * r * np.exp(-r * r),
            first_derivative=lambda r: (2.0 * r - 2.0 * r ** 3) * np.exp(-r * r),
            second_derivative=lambda r: (2.0 - 10.0 * r * r + 4.0 * r ** 4) * np.exp(-r * r),
            mellin_image=MellinImage(_bump_mellin, (-2.0, math.inf), continued=True),
            fourier_image_1d=lambda k: SQRT_PI * (0.5 - k * k / 4.0) * np.exp(-k * k / 4.0),
            fourier_image_3d=lambda k: math.pi ** 1.5 * (1.5 - k * k / 4.0) * np.exp(-k * k / 4.0),
            decay=("exponential", 1.0),
            origin_order=2.0,
            description="r^2 exp(-r^2), vanishing value and slope at the origin",
        ),
        TestFunction(
            name="constant",
            profile=lambda r: np.ones_like(np.asarray(r, dtype=float))[()],
            first_derivative=lambda r: np.zeros_like(np.asarray(r, dtype=float))[()],
            second_derivative=lambda r: np.zeros_like(np.asarray(r, dtype=float))[()],
            decay=("none", 0.0),
            description="1, not integrable",
        ),
    ]
    return {function.name: function for function in functions}


DEFAULT_FUNCTIONS: Dict[str, TestFunction] = _build_corpus()


def test_corpus() -> List[TestFunction]:
    """All registered test functions."""
    return list(DEFAULT_FUNCTIONS.values())


# Not a pytest test despite the name
test_corpus.__test__ = False


def get_test_function(name: str) -> TestFunction:
    """
    Look up a test function by name.

    Raises:
        ValueError: for unknown names
    """
    if name not in DEFAULT_FUNCTIONS:
        raise ValueError(
            f"Unknown test function: {name}. Available: {', '.join(get_function_list())}"
        )
    return DEFAULT_FUNCTIONS[name]


def get_function_list() -> List[str]:
    """Get list of all registered function names."""
    return list(DEFAULT_FUNCTIONS.keys())
