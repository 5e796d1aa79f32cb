"""Closed-form constants for the L^p -> L^p norm of the fractional integral.

Notation: ``T = t1 - t0``, ``p*`` the Hoelder conjugate of ``p`` and
``N_{alpha,p}`` the operator norm of ``J^alpha`` on ``L^p(t0, t1)``.

* ``N_{alpha,1} = N_{alpha,inf} = T^alpha / Gamma(alpha+1)`` (the generic bound).
* For ``1 < p < inf`` two Young/Hoelder type bounds are available when
  ``alpha > 1/p*`` resp. ``alpha > 1/p``.  For ``alpha < 1`` they only beat
  the generic bound beyond the threshold exponents ``p_{1,alpha}`` and
  ``p_{2,alpha}``, the roots of ``eta(p) = alpha`` and ``theta(p) = alpha``.
* The power functions ``(t - t0)^(-beta)`` give the computable lower
  bounds ``zeta(beta)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .grid import Interval, as_exponent
from .special import gamma_ratio, log_gamma

log = logging.getLogger(__name__)


def _length(interval) -> float:
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    return interval.length


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive, got {alpha}")
    return alpha


def _check_open_p(p) -> float:
    p = as_exponent(p).p
    if p == 1.0 or math.isinf(p):
        raise ValueError("this bound needs 1 < p < inf")
    return p


def generic_upper_bound(alpha: float, interval) -> float:
    """``T^alpha / Gamma(alpha + 1)``."""
    alpha = _check_alpha(alpha)
    T = _length(interval)
    return math.exp(alpha * math.log(T) - log_gamma(alpha + 1.0))


def exact_norm_endpoint(alpha: float, p, interval) -> float:
    """Exact norm for ``p = 1`` or ``p = inf``."""
    p = as_exponent(p).p
    if not (p == 1.0 or math.isinf(p)):
        raise ValueError("the norm is only known in closed form for p = 1 and p = inf")
    return generic_upper_bound(alpha, interval)


def _young_bound(alpha: float, p: float, q: float, T: float) -> float:
    """``T^a / (Gamma(a) [(a-1) p + 1]^(1/p) (a q)^(1/q))`` in log space."""
    logv = (alpha * math.log(T) - log_gamma(alpha)
            - math.log((alpha - 1.0) * p + 1.0) / p - math.log(alpha * q) / q)
    return math.exp(logv)


def upper_bound_i(alpha: float, p: float, T: float) -> Optional[float]:
    """Bound (i), valid when ``alpha > 1/p*``; ``None`` otherwise."""
    q = p / (p - 1.0)
    if not alpha > 1.0 / q:
        return None
    return _young_bound(alpha, p, q, T)


def upper_bound_ii(alpha: float, p: float, T: float) -> Optional[float]:
    """Bound (ii), valid when ``alpha > 1/p``; ``None`` otherwise."""
    q = p / (p - 1.0)
    if not alpha > 1.0 / p:
        return None
    return _young_bound(alpha, q, p, T)


def eta(p: float) -> float:
    """``eta(p) = p^(p-1) (p-1) / (p^p - (p-1)^(p-1))``, increasing from 0 to 1."""
    return _eta_eps(_excess(p))


def theta(p: float) -> float:
    """``theta(p) = p^(1/(p-1)) / (p^(p/(p-1)) - (p-1))``, decreasing from 1 to 0."""
    return _theta_eps(_excess(p))


def eval_eta_theta(p: float) -> tuple[float, float]:
    return eta(p), theta(p)


def _excess(p: float) -> float:
    p = float(p)
    if not p > 1.0:
        raise ValueError(f"eta and theta are defined for p > 1, got {p}")
    return p - 1.0


# Both functions are rewritten in terms of e = p - 1 after dividing out the
# dominant power, which keeps them accurate near p = 1 and for huge p.
def _eta_eps(e: float) -> float:
    # eta = e / (1 + e - (e / (1 + e))^e)
    x = e * (math.log(e) - math.log1p(e))
    return e / (e - math.expm1(x))


def _theta_eps(e: float) -> float:
    # theta = 1 / (1 - e * expm1(-log(1 + e) / e))
    return 1.0 / (1.0 - e * math.expm1(-math.log1p(e) / e))


def _solve_log_excess(func, alpha: float, increasing: bool) -> float:
    """Root of ``func(e) = alpha`` by bisection in ``log e`` over ``[1e-300, 1e300]``."""
    lo, hi = math.log(1e-300), math.log(1e300)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = func(math.exp(mid))
        if (val < alpha) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(mid)):
            break
    return math.exp(0.5 * (lo + hi))


def threshold_exponents(alpha: float) -> tuple[float, float]:
    """``(p_{1,alpha}, p_{2,alpha})`` solving ``eta(p1) = alpha`` and ``theta(p2) = alpha``.

    For very small ``alpha`` the root ``p1`` is closer to 1 than double
    precision can express and is returned as ``1.0``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("threshold exponents exist only for 0 < alpha < 1")
    e1 = _solve_log_excess(_eta_eps, alpha, increasing=True)
    e2 = _solve_log_excess(_theta_eps, alpha, increasing=False)
    return 1.0 + e1, 1.0 + e2


def refined_upper_bounds(alpha: float, p, interval):
    """``(upper_i, upper_ii, best, strict_flag)`` for ``1 < p < inf``.

    ``best`` is the smallest available bound, never above the generic one.
    ``strict_flag`` is True when ``best`` is provably below the generic
    bound: always for ``alpha >= 1``; for ``alpha < 1`` when bound (i)
    applies with ``p < p_{1,alpha}`` or bound (ii) applies with
    ``p > p_{2,alpha}``.
    """
    alpha = _check_alpha(alpha)
    p = _check_open_p(p)
    T = _length(interval)
    up_i = upper_bound_i(alpha, p, T)
    up_ii = upper_bound_ii(alpha, p, T)
    generic = generic_upper_bound(alpha, interval)
    best = min([generic] + [b for b in (up_i, up_ii) if b is not None])
    if alpha >= 1.0:
        strict = True
    else:
        p1, p2 = threshold_exponents(alpha)
        strict = (up_i is not None and p < p1) or (up_ii is not None and p > p2)
    return up_i, up_ii, best, bool(strict)


def zeta_lower_bound(alpha: float, p, beta: float, interval) -> float:
    """Norm ratio of ``(t - t0)^(-beta)``, a lower bound for ``N_{alpha,p}``.

    ``T^a Gamma(1-b) (1-b p)^(1/p) / (Gamma(a+1-b) [(a-b) p + 1]^(1/p))``.
    """
    alpha = _check_alpha(alpha)
    p = _check_open_p(p)
    beta = float(beta)
    if not 0.0 <= beta < 1.0 / p:
        raise ValueError(f"beta must lie in [0, 1/p), got {beta}")
    T = _length(interval)
    logv = (alpha * math.log(T) + log_gamma(1.0 - beta) - log_gamma(alpha + 1.0 - beta)
            + (math.log1p(-beta * p) - math.log((alpha - beta) * p + 1.0)) / p)
    return math.exp(logv)


def phi_beta_ratio(alpha: float, p, beta: float, interval) -> float:
    """Achieved ratio ``||J^a phi_b|| / ||phi_b||`` of ``phi_b = (t - t0)^(-b)``.

    ``p = 1`` accepts ``beta`` in ``(0, 1)``; the ratio tends to the exact
    norm as ``beta -> 1`` without reaching it.
    """
    alpha = _check_alpha(alpha)
    p = as_exponent(p).p
    if p == 1.0:
        beta = float(beta)
        if not 0.0 < beta < 1.0:
            raise ValueError("for p = 1, beta must lie in (0, 1)")
        return _length(interval) ** alpha * gamma_ratio(2.0 - beta, alpha + 2.0 - beta)
    return zeta_lower_bound(alpha, p, beta, interval)


def best_lower_bound(alpha: float, p, interval, scan_points: int = 64) -> tuple[float, float]:
    """Maximise ``zeta(beta)`` over ``[0, 1/p)``; returns ``(beta_star, value)``."""
    alpha = _check_alpha(alpha)
    p = _check_open_p(p)
    hi = 1.0 / p - 1e-9
    betas = np.linspace(0.0, hi, scan_points)
    vals = np.array([zeta_lower_bound(alpha, p, b, interval) for b in betas])
    rises = np.diff(vals) > 0
    if np.count_nonzero(rises[1:] != rises[:-1]) > 1:
        log.warning("zeta scan is not unimodal for alpha=%g, p=%g", alpha, p)
    k = int(np.argmax(vals))
    lo_b, hi_b = betas[max(k - 1, 0)], betas[min(k + 1, len(betas) - 1)]
    sol = optimize.minimize_scalar(lambda b: -zeta_lower_bound(alpha, p, b, interval),
                                   bounds=(lo_b, hi_b), method="bounded",
                                   options={"xatol": 1e-13})
    beta_star, value = float(sol.x), -float(sol.fun)
    zeta0 = vals[0]
    if value < zeta0 or (k == 0 and _zeta_slope(alpha, p, 0.0, interval) <= 0):
        return 0.0, float(zeta0)
    return beta_star, value


def _zeta_slope(alpha, p, beta, interval, step=1e-7):
    b2 = min(beta + step, 1.0 / p - 1e-12)
    return (zeta_lower_bound(alpha, p, b2, interval) - zeta_lower_bound(alpha, p, beta, interval)) / (b2 - beta)


@dataclass(frozen=True)
class NormBoundReport:
    alpha: float
    p: float
    t0: float
    t1: float
    generic_upper: float
    upper_i: Optional[float]
    upper_ii: Optional[float]
    best_upper: float
    lower: float
    p1_alpha: Optional[float]
    p2_alpha: Optional[float]
    strict_flag: bool

    def to_dict(self) -> dict:
        return asdict(self)


def compile_report(alpha: float, p, interval) -> NormBoundReport:
    """All closed-form bounds for one ``(alpha, p, interval)``.

    ``lower`` is the power-function bound at ``beta = 0`` (the computable
    lower bound); :func:`best_lower_bound` gives the optimised one.
    """
    alpha = _check_alpha(alpha)
    p = as_exponent(p).p
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    generic = generic_upper_bound(alpha, interval)
    p1 = p2 = None
    if 0.0 < alpha < 1.0:
        p1, p2 = threshold_exponents(alpha)
    if p == 1.0 or math.isinf(p):
        exact = exact_norm_endpoint(alpha, p, interval)
        return NormBoundReport(alpha, p, interval.t0, interval.t1, generic, None, None,
                               exact, exact, p1, p2, False)
    up_i, up_ii, best, strict = refined_upper_bounds(alpha, p, interval)
    lower = zeta_lower_bound(alpha, p, 0.0, interval)
    return NormBoundReport(alpha, p, interval.t0, interval.t1, generic, up_i, up_ii,
                           best, lower, p1, p2, strict)
