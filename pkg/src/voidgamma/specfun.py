"""Log-gamma and the polygamma family for positive real arguments.

Each routine shifts its argument upward with the standard recurrence until
it reaches 10, then evaluates the asymptotic (Bernoulli-number) series.
That keeps the absolute error near machine level across [1e-6, 1e6]; for
very large arguments the error is dominated by the rounding of the leading
term itself, a few units in the last place of the result.
"""

from __future__ import annotations

import math

__all__ = ["log_gamma", "digamma", "trigamma", "tetragamma", "polygamma"]

_SHIFT = 10.0
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k - 1)), k = 1..8: Stirling series for log-gamma.
_LOG_GAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# B_{2k} / (2k), k = 1..7: asymptotic series for psi.
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# B_{2k}, k = 1..7: asymptotic series for psi'.
_TRIGAMMA_COEFFS = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)

# (2k + 1) B_{2k}, k = 1..7: asymptotic series for psi''.
_TETRAGAMMA_COEFFS = (
    1.0 / 2.0,
    -1.0 / 6.0,
    1.0 / 6.0,
    -3.0 / 10.0,
    5.0 / 6.0,
    -691.0 / 210.0,
    35.0 / 2.0,
)


def _checked(x: float) -> float:
    x = float(x)
    if not (x > 0.0) or math.isinf(x):
        raise ValueError(f"argument must be a positive finite real, got {x!r}")
    return x


def _horner(coeffs: tuple[float, ...], r: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc


def log_gamma(x: float) -> float:
    """Natural logarithm of the gamma function, x > 0."""
    x = _checked(x)
    y = x
    shift = 0.0
    if y < _SHIFT:
        prod = 1.0
        while y < _SHIFT:
            prod *= y
            y += 1.0
        shift = -math.log(prod)
    r = 1.0 / (y * y)
    tail = _horner(_LOG_GAMMA_COEFFS, r) / y
    return shift + (y - 0.5) * math.log(y) - y + _HALF_LOG_TWO_PI + tail


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function, x > 0."""
    x = _checked(x)
    y = x
    acc = 0.0
    while y < _SHIFT:
        acc -= 1.0 / y
        y += 1.0
    r = 1.0 / (y * y)
    return acc + math.log(y) - 0.5 / y - r * _horner(_DIGAMMA_COEFFS, r)


def trigamma(x: float) -> float:
    """First derivative of digamma, x > 0.  Satisfies trigamma(x) > 1/x."""
    x = _checked(x)
    y = x
    acc = 0.0
    while y < _SHIFT:
        acc += 1.0 / (y * y)
        y += 1.0
    r = 1.0 / (y * y)
    return acc + 1.0 / y + 0.5 * r + (r / y) * _horner(_TRIGAMMA_COEFFS, r)


def tetragamma(x: float) -> float:
    """Second derivative of digamma, x > 0.  Negative everywhere."""
    x = _checked(x)
    y = x
    acc = 0.0
    while y < _SHIFT:
        acc -= 2.0 / (y * y * y)
        y += 1.0
    r = 1.0 / (y * y)
    return acc - r - r / y - r * r * _horner(_TETRAGAMMA_COEFFS, r)


def polygamma(order: int, x: float) -> float:
    """Polygamma of the given order (0, 1 or 2) at x > 0."""
    if order == 0:
        return digamma(x)
    if order == 1:
        return trigamma(x)
    if order == 2:
        return tetragamma(x)
    raise ValueError(f"polygamma order must be 0, 1 or 2, got {order!r}")
