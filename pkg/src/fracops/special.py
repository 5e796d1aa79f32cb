"""Gamma and digamma evaluation on the positive real axis.

Thin, validated wrappers: ``math.gamma``/``math.lgamma`` from the standard
library and ``scipy.special.digamma``.  Ratios of gamma values should go
through :func:`gamma_ratio`, which works in log space so that large
arguments do not overflow.
"""
from __future__ import annotations

import math

from scipy import special as _sp

#: largest argument for which Gamma(x) is representable as a double
GAMMA_OVERFLOW = 171.6243769563027

#: Euler-Mascheroni constant, equal to -psi(1)
EULER_GAMMA = 0.57721566490153286061


class PositiveReal(float):
    """A float that is strictly positive (checked on construction)."""

    def __new__(cls, value):
        value = float(value)
        if not value > 0.0:  # also rejects NaN
            raise ValueError(f"expected a positive real, got {value!r}")
        return super().__new__(cls, value)


def gamma_fn(x: float) -> float:
    """Euler's gamma function for ``x > 0``.

    Raises
    ------
    ValueError
        If ``x <= 0``.
    OverflowError
        If ``x`` exceeds :data:`GAMMA_OVERFLOW`.
    """
    x = PositiveReal(x)
    if x > GAMMA_OVERFLOW:
        raise OverflowError(f"Gamma({x}) exceeds the double range")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    """``ln Gamma(x)`` for ``x > 0``."""
    return math.lgamma(PositiveReal(x))


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)`` computed in log space."""
    if a == b:
        return 1.0
    if max(a, b) < 150.0:
        return gamma_fn(a) / gamma_fn(b)
    return math.exp(log_gamma(a) - log_gamma(b))


def digamma_fn(x: float) -> float:
    """Digamma function ``psi(x) = Gamma'(x)/Gamma(x)`` for ``x > 0``."""
    x = PositiveReal(x)
    return float(_sp.digamma(x))


def harmonic_number(n: int) -> float:
    """``H_n = sum_{k=1}^n 1/k`` (``H_0 = 0``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.fsum(1.0 / k for k in range(1, n + 1))
