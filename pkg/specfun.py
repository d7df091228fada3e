"""Complex Gamma family evaluated through log-gamma differences."""

import math
from typing import Sequence, Union

import numpy as np

from errors import PoleError

ComplexLike = Union[complex, float, np.ndarray]

LOG_PI = math.log(math.pi)
LOG_SQRT_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos approximation, g = 7, n = 9
LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _as_complex(z: ComplexLike) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("Gamma family evaluated at a non-finite argument")
    return z


def _pole_mask(z: np.ndarray) -> np.ndarray:
    """True where z is 0, -1, -2, ..."""
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _unwrap(value: np.ndarray):
    return value[()] if value.ndim == 0 else value


def _lanczos_log_gamma(w: np.ndarray) -> np.ndarray:
    """log Gamma(w) for Re w >= 0.5."""
    z = w - 1.0
    series = np.full(z.shape, LANCZOS_COEFFICIENTS[0], dtype=complex)
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series = series + coefficient / (z + i)
    t = z + LANCZOS_G + 0.5
    return LOG_SQRT_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(series)


def log_sin_pi(z: ComplexLike) -> ComplexLike:
    """
    log sin(pi z) without overflow for large |Im z|.

    Uses sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}) in the upper
    half-plane and conjugate symmetry in the lower one.

    Args:
        z: Complex argument (scalar or array), not an integer

    Returns:
        log sin(pi z), imaginary part defined modulo 2 pi
    """
    z = _as_complex(z)
    upper = np.where(z.imag >= 0, z, np.conj(z))
    with np.errstate(divide="ignore"):
        value = -1j * math.pi * upper + np.log(0.5j) + np.log1p(-np.exp(2j * math.pi * upper))
    value = np.where(z.imag >= 0, value, np.conj(value))
    return _unwrap(value)


def log_gamma(z: ComplexLike) -> ComplexLike:
    """
    Principal-branch log Gamma(z).

    Lanczos approximation for Re z >= 0.5 and the reflection formula
    Gamma(z) Gamma(1 - z) = pi / sin(pi z) to the left of it. In the left
    half-plane the imaginary part is only fixed modulo 2 pi.

    Args:
        z: Complex argument (scalar or array)

    Returns:
        log Gamma(z) as complex

    Raises:
        PoleError: if z is a non-positive integer
    """
    z = _as_complex(z)
    if np.any(_pole_mask(z)):
        raise PoleError(f"Gamma has a pole at {_unwrap(z)}", stage="log_gamma")

    reflect = z.real < 0.5
    result = np.empty(z.shape, dtype=complex)

    if np.any(~reflect):
        result[~reflect] = _lanczos_log_gamma(z[~reflect])
    if np.any(reflect):
        left = z[reflect]
        result[reflect] = (
            LOG_PI - np.asarray(log_sin_pi(left)) - _lanczos_log_gamma(1.0 - left)
        )

    return _unwrap(result)


def gamma(z: ComplexLike) -> ComplexLike:
    """Gamma(z); real-valued for real input."""
    arr = np.asarray(z)
    value = np.exp(np.asarray(log_gamma(arr)))
    if not np.iscomplexobj(arr):
        value = value.real
    return _unwrap(np.asarray(value))


def _pole_order(z: complex) -> int:
    return int(round(-z.real))


def _gamma_ratio_scalar(num: Sequence[complex], den: Sequence[complex]) -> complex:
    num_poles = [_pole_order(z) for z in num if _pole_mask(np.asarray(z))]
    den_poles = [_pole_order(z) for z in den if _pole_mask(np.asarray(z))]

    if len(num_poles) > len(den_poles):
        raise PoleError(
            f"Uncancelled Gamma pole in numerator {list(num)} / {list(den)}",
            stage="gamma_ratio",
        )
    if len(num_poles) < len(den_poles):
        # 1/Gamma is entire and vanishes at the poles
        return 0j

    # Matched poles contribute the ratio of residues (-1)^k / k!
    residue_ratio = 1.0
    for k in num_poles:
        residue_ratio *= (-1) ** k / math.factorial(k)
    for k in den_poles:
        residue_ratio /= (-1) ** k / math.factorial(k)

    log_sum = 0j
    for z in num:
        if not _pole_mask(np.asarray(z)):
            log_sum += complex(log_gamma(z))
    for z in den:
        if not _pole_mask(np.asarray(z)):
            log_sum -= complex(log_gamma(z))

    return residue_ratio * complex(np.exp(log_sum))


def gamma_ratio(num: Sequence[ComplexLike], den: Sequence[ComplexLike]) -> ComplexLike:
    """
    Product of Gamma(num) divided by product of Gamma(den).

    Evaluated as exp of log-gamma differences so large |Im| arguments do not
    overflow. Poles cancel pairwise through their residues; an unmatched
    denominator pole gives zero.

    Args:
        num: Numerator arguments (scalars or broadcastable arrays)
        den: Denominator arguments

    Returns:
        The ratio as complex (scalar or array)

    Raises:
        PoleError: on an uncancelled numerator pole
    """
    num_arrays = [_as_complex(z) for z in num]
    den_arrays = [_as_complex(z) for z in den]
    arrays = np.broadcast_arrays(*(num_arrays + den_arrays)) if num_arrays or den_arrays else []
    num_arrays = arrays[: len(num_arrays)]
    den_arrays = arrays[len(num_arrays):]

    any_pole = any(np.any(_pole_mask(z)) for z in num_arrays + den_arrays)

    if not any_pole:
        log_sum = 0j
        for z in num_arrays:
            log_sum = log_sum + np.asarray(log_gamma(z))
        for z in den_arrays:
            log_sum = log_sum - np.asarray(log_gamma(z))
        return _unwrap(np.asarray(np.exp(log_sum)))

    shape = arrays[0].shape
    result = np.empty(shape, dtype=complex)
    for index in np.ndindex(shape):
        result[index] = _gamma_ratio_scalar(
            [complex(z[index]) for z in num_arrays],
            [complex(z[index]) for z in den_arrays],
        )
    return _unwrap(result)
