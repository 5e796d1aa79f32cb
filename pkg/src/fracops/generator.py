"""The infinitesimal generator of the semigroup ``alpha -> J^alpha``.

For ``f`` in its domain

    A f(t) = -psi(1) f(t) + d/dt Phi(t),   Phi(t) = int_{t0}^t ln(t - s) f(s) ds,

and on monomials ``phi_n(t) = (t - t0)^n`` the action is explicit:
``A phi_n(t) = (t - t0)^n [ln(t - t0) - psi(n + 1)]``.  The norm ratio
``||A phi_n|| / ||phi_n||`` grows like the harmonic number ``H_n``, which
is why ``A`` is unbounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .fracint import FracOrder, apply_frac_integral
from .grid import (Family, SampledFunction, UniformGrid, as_exponent, lp_norm,
                   trapezoid_weights)
from .special import digamma_fn

_SERIES_FROM = 8
#: nodes within this many steps of t0 are not held to generator accuracy
LOW_ACCURACY_NODES = 2


def _log_cell_moments(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Moments of ``ln v`` against the two hat halves on ``[k-1, k]``.

    Returns ``(int ln v (v-k+1) dv, int ln v (k-v) dv)`` for integers ``k >= 1``.
    """
    k = np.asarray(k, dtype=float)
    ma = np.empty_like(k)
    mb = np.empty_like(k)
    one = k == 1
    ma[one], mb[one] = -0.25, -0.75
    small = (k > 1) & (k < _SERIES_FROM)
    ks = k[small]

    def g0(v):
        return v * np.log(v) - v

    def g1(v):
        return 0.5 * v * v * np.log(v) - 0.25 * v * v

    m0 = g0(ks) - g0(ks - 1)
    m1 = g1(ks) - g1(ks - 1)
    ma[small] = m1 - (ks - 1) * m0
    mb[small] = ks * m0 - m1
    # large k: ln v = ln k + log1p(-(1-x)/k); expand the log1p term
    big = k >= _SERIES_FROM
    kb = k[big]
    sa = np.zeros_like(kb)
    sb = np.zeros_like(kb)
    inv = 1.0 / kb
    power = inv.copy()
    for j in range(1, 60):
        sa -= power / (j * (j + 1) * (j + 2))
        sb -= power / (j * (j + 2))
        power = power * inv
        if power.max() < 1e-18:
            break
    half_log = 0.5 * np.log(kb)
    ma[big] = half_log + sa
    mb[big] = half_log + sb
    return ma, mb


def log_kernel_weights(grid: UniformGrid) -> tuple[np.ndarray, np.ndarray]:
    """``(conv, boundary)`` weights of the product trapezoid rule for ``Phi``.

    ``Phi(t_i) ~ sum_{j<=i} conv[i-j] f_j + boundary[i] f_0``.
    """
    n = grid.n
    h = grid.h
    k = np.arange(1, n + 1, dtype=float)
    ma, mb = _log_cell_moments(k)
    half = 0.5 * math.log(h)
    A = h * (half + ma)     # weight of the far node of cell k
    B = h * (half + mb)     # weight of the near node of cell k
    conv = np.empty(n)
    conv[0] = B[0]
    conv[1:] = A[: n - 1] + B[1:n]
    boundary = -B[:n]
    return conv, boundary


@dataclass(frozen=True, eq=False)
class LogConvolution:
    input: SampledFunction
    output: SampledFunction


def log_kernel_convolve(f: SampledFunction) -> LogConvolution:
    """``Phi(t_i) = int_{t0}^{t_i} ln(t_i - s) f(s) ds`` by direct product integration."""
    conv, boundary = log_kernel_weights(f.grid)
    n = f.n
    out = np.empty_like(f.values)
    for col in range(f.d):
        out[:, col] = np.convolve(f.values[:, col], conv)[:n]
    out += np.outer(boundary, f.values[0])
    return LogConvolution(f, SampledFunction(f.grid, out))


def differentiate(y: np.ndarray, h: float, order: int = 4) -> np.ndarray:
    """Finite-difference derivative along axis 0 (centered inside, one-sided at the ends)."""
    y = np.asarray(y, dtype=float)
    if order == 2:
        return np.gradient(y, h, axis=0, edge_order=2)
    if order != 4:
        raise ValueError("order must be 2 or 4")
    n = y.shape[0]
    if n < 5:
        raise ValueError("fourth-order differences need at least 5 nodes")
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * h)
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12 * h)
    return d


def generator_apply(f: SampledFunction, order: int = 4) -> SampledFunction:
    """``A f = -psi(1) f + d/dt Phi`` with ``Phi`` differentiated numerically.

    The result is flagged singular at ``t0`` whenever ``f(t0) != 0``
    (``A f`` then has a logarithmic singularity there).  Values within
    :data:`LOW_ACCURACY_NODES` steps of ``t0`` are low accuracy in any case.
    """
    phi = log_kernel_convolve(f).output
    values = -digamma_fn(1.0) * f.values + differentiate(phi.values, f.grid.h, order)
    singular = bool(np.any(f.values[0] != 0.0)) or f.singular_at_t0
    return SampledFunction(f.grid, values, singular)


def generator_power_closed_form(n: int, grid: UniformGrid, x=(1.0,)) -> SampledFunction:
    """Node values of ``A phi_n = (t - t0)^n [ln(t - t0) - psi(n + 1)] x``."""
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    s = grid.elapsed
    scalar = np.zeros(grid.n)
    scalar[1:] = s[1:] ** n * (np.log(s[1:]) - digamma_fn(n + 1.0))
    return SampledFunction(grid, np.outer(scalar, np.asarray(x, dtype=float)), n == 0)


def digamma_power_identity(n: int, t: float) -> tuple[float, float]:
    """Both sides of ``Gamma(n+1) J_{0,t}^n ln(t) = t^n [ln t + psi(1) - psi(n+1)]``.

    The left side is expanded binomially into the elementary integrals
    ``int_0^t s^k ln s ds``; nothing is integrated numerically.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if not t > 0:
        raise ValueError("t must be positive")
    lt = math.log(t)
    terms = []
    for k in range(n):
        moment = t ** (k + 1) * (lt / (k + 1) - 1.0 / (k + 1) ** 2)
        terms.append(math.comb(n - 1, k) * t ** (n - 1 - k) * (-1) ** k * moment)
    lhs = n * math.fsum(terms)
    rhs = t ** n * (lt + digamma_fn(1.0) - digamma_fn(n + 1.0))
    return lhs, rhs


def difference_quotient_defect(f: SampledFunction, alpha: float, p,
                               scheme: str = "trapezoid") -> float:
    """``|| (J^alpha f - f)/alpha - A f ||_p`` for a monomial family member ``f``."""
    alpha = FracOrder(alpha)
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    pe = as_exponent(p)
    if f.family is None or not f.family.is_monomial:
        if not np.any(f.values):
            return 0.0
        raise ValueError("the closed form of A f is only available for monomials")
    degree = f.family.monomial_degree
    if pe.is_infinite and degree == 0:
        raise ValueError("A applied to a constant is not bounded (log singularity); use p < inf")
    direction = f.values[-1] / max(f.grid.interval.length ** degree, 1e-300)
    af = generator_power_closed_form(degree, f.grid, direction)
    quotient = (apply_frac_integral(f, alpha, scheme) - f) * (1.0 / alpha)
    return lp_norm(quotient - af, pe)


def unboundedness_ratio(n: int, p, interval) -> tuple[float, float | None]:
    """``||(A + psi(1)) phi_n||_p / ||phi_n||_p`` and the lower bound it must exceed.

    The bound is ``[H_n - ln T] (1 - 2^(-np-1))^(1/p)``, reported as ``None``
    when it is not positive.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    p = as_exponent(p).p
    if p == 1.0 or math.isinf(p):
        raise ValueError("unboundedness ratio needs 1 < p < inf")
    from .grid import Interval
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    T = interval.length
    harmonic = digamma_fn(n + 1.0) - digamma_fn(1.0)
    shift = math.log(T) - harmonic
    if p == 2.0:
        m = 2 * n + 1
        ratio = math.sqrt(shift * shift - 2.0 * shift / m + 2.0 / (m * m))
    else:
        def integrand(u):
            return u ** (n * p) * abs(math.log(u) + shift) ** p if u > 0 else 0.0
        pts = [math.exp(-shift)] if 0 < math.exp(-shift) < 1 else None
        val, _ = integrate.quad(integrand, 0.0, 1.0, points=pts, limit=200,
                                epsabs=0.0, epsrel=1e-13)
        ratio = ((n * p + 1.0) * val) ** (1.0 / p)
    factor = harmonic - math.log(T)
    bound = factor * (1.0 - 2.0 ** (-n * p - 1.0)) ** (1.0 / p) if factor > 0 else None
    return ratio, bound


def interior_l2(f: SampledFunction, g: SampledFunction, exclude: int = LOW_ACCURACY_NODES) -> float:
    """Discrete L^2 distance over nodes more than ``exclude`` steps from ``t0``."""
    w = trapezoid_weights(f.grid)
    w[: exclude + 1] = 0.0
    diff = np.linalg.norm(f.values - g.values, axis=1)
    return float(math.sqrt(np.dot(w, diff ** 2)))
