"""The Riemann-Liouville fractional integral as a discrete operator.

On a uniform grid the product-integration rules have Toeplitz structure:
row ``i`` of the weight matrix depends on the lag ``k = i - j`` except for
the first column, which gets a per-row correction.  ``ConvKernelWeights``
stores exactly that split, so the operator can be applied either by a
direct convolution or by an FFT convolution plus a rank-one correction.

Two schemes are provided.

``rectangle``
    Product left-endpoint rule, ``f`` piecewise constant on each cell.
    First order.
``trapezoid``
    Product piecewise-linear rule (the weights of the fractional
    Adams-Moulton corrector).  Second order for smooth ``f`` and exact on
    linear functions.

Both integrate the kernel ``(t - s)^(alpha-1) / Gamma(alpha)`` exactly, so no
quadrature of the singular kernel is ever performed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate, signal

from .grid import (SampledFunction, UniformGrid, as_exponent, lp_norm)
from .special import gamma_fn, gamma_ratio, log_gamma

log = logging.getLogger(__name__)

SCHEMES = ("trapezoid", "rectangle")
FFT_CROSSOVER = 256
_SERIES_FROM = 8


class FracOrder(float):
    """Order of integration ``alpha >= 0``; ``alpha = 0`` is the identity."""

    def __new__(cls, value):
        value = float(value)
        if not (value >= 0.0 and math.isfinite(value)):
            raise ValueError(f"order of integration must be >= 0, got {value!r}")
        return super().__new__(cls, value)


def _binom_series(a: float, x: np.ndarray, even_only: bool, sign: float) -> np.ndarray:
    """``sum_{m>=2} C(a, m) (sign*x)^m`` (only even ``m`` if ``even_only``)."""
    total = np.zeros_like(x)
    coef = a * (a - 1.0) / 2.0   # C(a, 2)
    term_pow = x * x
    m = 2
    while m < 80:
        term = coef * term_pow * (sign ** m)
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
        step = 2 if even_only else 1
        for _ in range(step):
            coef *= (a - m) / (m + 1.0)
            m += 1
            term_pow = term_pow * x
    return total


def _second_difference(a: float, k: np.ndarray) -> np.ndarray:
    """``(k+1)^a - 2 k^a + (k-1)^a`` for integer ``k >= 1`` without cancellation."""
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = k < _SERIES_FROM
    ks = k[small]
    out[small] = (ks + 1) ** a - 2 * ks ** a + (ks - 1) ** a
    kl = k[~small]
    out[~small] = 2.0 * kl ** a * _binom_series(a, 1.0 / kl, True, 1.0)
    return out


def _trapezoid_first_column(alpha: float, i: np.ndarray) -> np.ndarray:
    """``(i-1)^(alpha+1) - (i-1-alpha) i^alpha`` for ``i >= 1``."""
    a = alpha + 1.0
    i = np.asarray(i, dtype=float)
    out = np.empty_like(i)
    small = i < _SERIES_FROM
    s = i[small]
    out[small] = (s - 1) ** a - (s - 1 - alpha) * s ** alpha
    big = i[~small]
    out[~small] = big ** a * _binom_series(a, 1.0 / big, False, -1.0)
    return out


def _first_difference(alpha: float, k: np.ndarray) -> np.ndarray:
    """``k^alpha - (k-1)^alpha`` for integer ``k >= 1``."""
    k = np.asarray(k, dtype=float)
    out = np.ones_like(k)
    big = k > 1
    kb = k[big]
    out[big] = -kb ** alpha * np.expm1(alpha * np.log1p(-1.0 / kb))
    return out


@dataclass(frozen=True, eq=False)
class ConvKernelWeights:
    """Quadrature weights for ``J^alpha`` on a grid.

    The weight of node ``j`` in row ``i`` is ``conv_weights[i - j]`` for
    ``j <= i``, plus ``boundary_weights[i]`` when ``j == 0``.
    """

    alpha: float
    grid: UniformGrid
    scheme: str
    conv_weights: np.ndarray
    boundary_weights: np.ndarray

    def column_zero(self) -> np.ndarray:
        return self.conv_weights + self.boundary_weights

    def dense(self) -> np.ndarray:
        """The full lower-triangular ``n x n`` weight matrix."""
        n = self.grid.n
        idx = np.arange(n)
        lag = idx[:, None] - idx[None, :]
        mat = np.where(lag >= 0, self.conv_weights[np.clip(lag, 0, n - 1)], 0.0)
        mat[:, 0] += self.boundary_weights
        return mat

    def row_sums(self) -> np.ndarray:
        return np.cumsum(self.conv_weights) + self.boundary_weights


def build_weights(grid: UniformGrid, alpha: float, scheme: str = "trapezoid") -> ConvKernelWeights:
    """Closed-form product-integration weights for ``J^alpha`` on ``grid``."""
    alpha = float(alpha)
    if not alpha > 0.0:
        raise ValueError(f"weights need alpha > 0, got {alpha}")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    n = grid.n
    k = np.arange(n, dtype=float)
    conv = np.zeros(n)
    bound = np.zeros(n)
    if scheme == "rectangle":
        scale = math.exp(alpha * math.log(grid.h) - log_gamma(alpha + 1.0))
        conv[1:] = scale * _first_difference(alpha, k[1:])
    else:
        scale = math.exp(alpha * math.log(grid.h) - log_gamma(alpha + 2.0))
        conv[0] = scale
        conv[1:] = scale * _second_difference(alpha + 1.0, k[1:])
        bound[0] = -conv[0]
        bound[1:] = scale * _trapezoid_first_column(alpha, k[1:]) - conv[1:]
    conv.setflags(write=False)
    bound.setflags(write=False)
    return ConvKernelWeights(alpha, grid, scheme, conv, bound)


def _convolve(weights: ConvKernelWeights, values: np.ndarray, path: str) -> np.ndarray:
    n = weights.grid.n
    c = weights.conv_weights
    if path == "fft":
        out = signal.fftconvolve(values, c[:, None], axes=0)[:n]
    else:
        out = np.empty_like(values)
        for col in range(values.shape[1]):
            out[:, col] = np.convolve(values[:, col], c)[:n]
    return out + np.outer(weights.boundary_weights, values[0])


def apply_frac_integral(f: SampledFunction, alpha: float, scheme: str = "trapezoid",
                        path: Optional[str] = None,
                        weights: Optional[ConvKernelWeights] = None) -> SampledFunction:
    """Node values of ``J^alpha f``.

    ``path`` is ``"direct"`` (O(n^2) convolution), ``"fft"`` or ``None`` to
    pick FFT from :data:`FFT_CROSSOVER` nodes on.  ``alpha = 0`` returns ``f``
    itself.  Precomputed ``weights`` can be passed to skip the build.
    """
    alpha = FracOrder(alpha)
    if alpha == 0.0:
        return f
    if weights is None:
        weights = build_weights(f.grid, alpha, scheme)
    elif weights.grid != f.grid or weights.alpha != alpha:
        raise ValueError("weights were built for a different grid or order")
    if path is None:
        path = "fft" if f.n >= FFT_CROSSOVER else "direct"
    if path not in ("direct", "fft"):
        raise ValueError(f"unknown path {path!r}")
    if path == "fft" and f.n < 8:
        raise ValueError("the fft path needs at least 8 nodes")
    return SampledFunction(f.grid, _convolve(weights, f.values, path))


def power_rule_coefficient(nu: float, alpha: float) -> float:
    """``Gamma(nu+1)/Gamma(nu+alpha+1)``, so ``J^a (t-t0)^nu = coeff (t-t0)^(nu+a)``."""
    if not nu > -1.0:
        raise ValueError(f"nu must exceed -1, got {nu}")
    alpha = FracOrder(alpha)
    return gamma_ratio(nu + 1.0, nu + alpha + 1.0)


def semigroup_defect(f: SampledFunction, a: float, b: float, p, scheme: str = "trapezoid") -> float:
    """``|| J^a J^b f - J^(a+b) f ||_p`` on the grid of ``f``."""
    a, b = FracOrder(a), FracOrder(b)
    if a == 0.0 or b == 0.0:
        return 0.0
    composed = apply_frac_integral(apply_frac_integral(f, b, scheme), a, scheme)
    direct = apply_frac_integral(f, a + b, scheme)
    return lp_norm(composed - direct, p)


def alpha_zero_profile(f: SampledFunction, p, alphas: Iterable[float],
                       scheme: str = "trapezoid") -> list[tuple[float, float]]:
    """``[(alpha, ||J^alpha f - f||_p), ...]`` for orders approaching zero."""
    out = []
    for alpha in alphas:
        alpha = FracOrder(alpha)
        if alpha >= 1.0:
            raise ValueError("alpha-zero profile expects orders in [0, 1)")
        if alpha == 0.0:
            out.append((0.0, 0.0))
            continue
        out.append((float(alpha), lp_norm(apply_frac_integral(f, alpha, scheme) - f, p)))
    return out


def loglog_slope(profile: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(defect)`` against ``log(alpha)``."""
    pts = np.array([(a, d) for a, d in profile if a > 0 and d > 0])
    if len(pts) < 2:
        raise ValueError("need at least two positive points")
    slope, _ = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return float(slope)


def _abs_power_difference_integral(a: float, a0: float, length: float) -> float:
    """``int_0^L |w^(a-1) - w^(a0-1)| dw``, split where the integrand changes sign (w = 1)."""
    def prim(w):
        return w ** a / a - w ** a0 / a0
    if length <= 1.0:
        return abs(prim(length))
    return abs(prim(1.0)) + abs(prim(length) - prim(1.0))


def eta_bound(a: float, a0: float, length: float) -> float:
    """Upper bound for ``||J^a - J^a0||`` on an interval of the given length."""
    if a == a0:
        return 0.0
    first = _abs_power_difference_integral(a, a0, length) / gamma_fn(a)
    second = length ** a0 * abs(gamma_fn(a0) - gamma_fn(a)) / (gamma_fn(a) * gamma_fn(a0 + 1.0))
    return first + second


def alpha_continuity_defect(a: float, a0: float, grid: UniformGrid, p,
                            scheme: str = "trapezoid", seed: int = 0) -> tuple[float, float]:
    """``(||K_a - K_a0||_{p->p}, eta bound)`` for two orders on ``grid``."""
    from .norm_est import matrix_p_norm

    a, a0 = float(a), float(a0)
    if not (a > 0.0 and a0 > 0.0):
        raise ValueError("both orders must be positive")
    if a == a0:
        return 0.0, 0.0
    diff = build_weights(grid, a, scheme).dense() - build_weights(grid, a0, scheme).dense()
    gap = matrix_p_norm(diff, as_exponent(p).p, seed=seed).value
    return gap, eta_bound(a, a0, grid.interval.length)


def sigma_p_norm(alpha: float, p) -> float:
    """``||sigma_p||`` on ``[t0, inf)``: ``(alpha p)^(-1/p)``, and 1 for ``p = inf``."""
    p = as_exponent(p)
    if p.is_infinite:
        return 1.0
    return (alpha * p.p) ** (-1.0 / p.p)


def _sigma_image(alpha: float, p: float, tau: float) -> float:
    """``J^alpha sigma_p`` at elapsed time ``tau`` (zero for ``tau <= 1``)."""
    if tau <= 1.0:
        return 0.0
    val, _ = integrate.quad(lambda s: s ** (-(alpha + 1.0 / p)), 1.0, tau,
                            weight="alg", wvar=(0.0, alpha - 1.0), limit=200)
    return val / gamma_fn(alpha)


def divergence_profile(alpha: float, p, horizons: Sequence[float],
                       t0: float = 0.0) -> list[tuple[float, float]]:
    """Norms of ``J^alpha sigma_p`` on ``[t0, T]`` for growing horizons ``T``.

    ``sigma_inf`` is the constant function, whose image has sup norm
    ``(T - t0)^alpha / Gamma(alpha + 1)``.  For finite ``p`` the image of the
    tail function is integrated numerically; its ``L^p`` norm grows without
    bound (logarithmically in ``T``).
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    p = as_exponent(p)
    taus = [float(T) - t0 for T in horizons]
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ValueError("horizons must be strictly increasing")
    if p.is_infinite:
        return [(T, tau ** alpha / gamma_fn(alpha + 1.0)) for T, tau in zip(horizons, taus)]
    if taus[0] <= 1.0:
        raise ValueError("horizons must exceed t0 + 1")

    def integrand(tau):
        return _sigma_image(alpha, p.p, tau) ** p.p

    out = []
    acc = 0.0
    left = 1.0
    for T, tau in zip(horizons, taus):
        # break points at powers of two keep each quad piece well scaled
        edges = [left]
        while edges[-1] * 2.0 < tau:
            edges.append(edges[-1] * 2.0)
        edges.append(tau)
        for lo, hi in zip(edges, edges[1:]):
            acc += integrate.quad(integrand, lo, hi, limit=200)[0]
        left = tau
        out.append((float(T), acc ** (1.0 / p.p)))
    return out
