"""Numerical estimation of ``N_{alpha,p}``, the ``L^p -> L^p`` norm of ``J^alpha``.

On a uniform grid the factor ``h^(1/p)`` in the discrete ``L^p`` norm is the
same for input and output, so the operator norm of the discretised
integral equals the matrix ``p``-norm of the weight matrix ``K``.

* ``p = 1`` and ``p = inf``: maximum column / row sum (exact).
* ``p = 2``: top singular value (dense SVD for small ``n``, otherwise power
  iteration on ``K^T K``).
* other ``p``: Boyd's nonlinear power method.  For entrywise nonnegative
  ``K`` it converges to the global maximiser from any positive start;
  restarts are kept as a guard.

:func:`brute_force_norm` is an independent multistart coordinate-ascent
oracle for tiny matrices.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg, optimize
from scipy.sparse.linalg import LinearOperator, svds

from .fracint import build_weights
from .grid import LebesgueExponent, SampledFunction, UniformGrid, as_exponent

log = logging.getLogger(__name__)

DENSE_SVD_MAX_N = 512
DEFAULT_RESTARTS = 16
METHODS = ("svd", "power2", "boyd", "brute", "rowsum", "colsum")


class NonConvergenceError(RuntimeError):
    """An iterative estimate hit its iteration cap; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("FRACOPS_THREADS", "1")))
    except ValueError:
        return 1


def tol_disc(n: int) -> float:
    """Allowance between a discrete estimate on ``n`` nodes and the continuum value."""
    return max(5.0 / n, 1e-3)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    alpha: float
    grid: UniformGrid
    scheme: str

    @property
    def n(self) -> int:
        return self.grid.n


@dataclass(frozen=True, eq=False)
class MatrixNorm:
    """Result of :func:`matrix_p_norm` on a bare array."""

    value: float
    p: float
    method: str
    iterations: int
    residual: float
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class NormEstimate:
    value: float
    p: LebesgueExponent
    method: str
    n: int
    iterations: int
    residual: float
    maximizer: SampledFunction = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "p": self.p.p,
            "method": self.method,
            "n": self.n,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def build_operator_matrix(grid: UniformGrid, alpha: float, scheme: str = "trapezoid") -> OperatorMatrix:
    entries = build_weights(grid, alpha, scheme).dense()
    entries.setflags(write=False)
    return OperatorMatrix(entries, float(alpha), grid, scheme)


def _vec_pnorm(x: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(x)))
    s = np.max(np.abs(x))
    if s == 0.0:
        return 0.0
    return float(s * np.sum((np.abs(x) / s) ** p) ** (1.0 / p))


def _boyd_run(K: np.ndarray, p: float, x0: np.ndarray, tol: float, max_iter: int):
    """Boyd's iteration ``x <- dual(K^T dual_p(K x))`` from one start."""
    q = 1.0 / (p - 1.0)              # exponent mapping back to the primal space
    x = x0 / _vec_pnorm(x0, p)
    y = K @ x
    gamma = _vec_pnorm(y, p)
    resid = math.inf
    for it in range(1, max_iter + 1):
        if gamma == 0.0:
            return 0.0, x, it, 0.0
        u = np.sign(y) * np.abs(y / gamma) ** (p - 1.0)
        z = K.T @ u
        zmax = np.max(np.abs(z))
        if zmax == 0.0:
            return 0.0, x, it, 0.0
        x_new = np.sign(z) * np.abs(z / zmax) ** q
        x_new /= _vec_pnorm(x_new, p)
        y = K @ x_new
        g_new = _vec_pnorm(y, p)
        resid = abs(g_new - gamma) / g_new if g_new > 0 else 0.0
        step = _vec_pnorm(x_new - x, p)
        x, gamma = x_new, g_new
        if resid <= tol and step <= math.sqrt(tol):
            return gamma, x, it, resid
    raise NonConvergenceError(
        f"nonlinear power method did not converge in {max_iter} iterations "
        f"(p={p}, residual={resid:.3g})", best=(gamma, x, max_iter, resid))


def _power2(K: np.ndarray, tol: float, max_iter: int, x0: np.ndarray):
    x = x0 / np.linalg.norm(x0)
    lam = 0.0
    resid = math.inf
    for it in range(1, max_iter + 1):
        w = K.T @ (K @ x)
        lam_new = float(x @ w)            # Rayleigh quotient of K^T K
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, x, it, 0.0
        x = w / nw
        resid = abs(lam_new - lam) / lam_new
        lam = lam_new
        if resid <= tol:
            lam = float(x @ (K.T @ (K @ x)))
            return math.sqrt(lam), x, it, resid
    raise NonConvergenceError(f"power iteration did not converge in {max_iter} iterations",
                              best=(math.sqrt(lam), x, max_iter, resid))


def _orient(v: np.ndarray) -> np.ndarray:
    return -v if v.sum() < 0 else v


def matrix_p_norm(K: np.ndarray, p: float, *, method: Optional[str] = None,
                  restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                  tol: float = 1e-13, max_iter: int = 50000,
                  x0: Optional[np.ndarray] = None) -> MatrixNorm:
    """Matrix ``p``-norm ``max ||K x||_p / ||x||_p`` of a square array.

    ``method`` defaults to the exact formula for ``p in {1, inf}``, ``svd``
    or ``power2`` for ``p = 2`` (by size) and ``boyd`` otherwise.  ``x0``
    adds a caller-supplied start to the random restarts.
    """
    K = np.asarray(K, dtype=float)
    p = as_exponent(p).p
    n = K.shape[1]
    if p == 1.0 or math.isinf(p):
        if math.isinf(p):
            sums = np.abs(K).sum(axis=1)
            i = int(np.argmax(sums))
            vec = np.sign(K[i])
            vec[vec == 0] = 1.0
            return MatrixNorm(float(sums[i]), p, "rowsum", 0, 0.0, vec)
        sums = np.abs(K).sum(axis=0)
        j = int(np.argmax(sums))
        vec = np.zeros(n)
        vec[j] = 1.0
        return MatrixNorm(float(sums[j]), p, "colsum", 0, 0.0, vec)

    if method is None:
        method = "boyd" if p != 2.0 else ("svd" if n <= DENSE_SVD_MAX_N else "power2")
    if method == "svd":
        if p != 2.0:
            raise ValueError("svd only gives the 2-norm")
        _, s, vt = linalg.svd(K)
        return MatrixNorm(float(s[0]), p, "svd", 0, 0.0, _orient(vt[0]))
    if method == "brute":
        return MatrixNorm(brute_force_norm(K, p, seed=seed), p, "brute", 0, 0.0, np.ones(n))

    rng = np.random.default_rng(seed)
    nonneg = bool(np.all(K >= 0))
    starts = [np.ones(n)] if x0 is None else [np.asarray(x0, dtype=float)]
    for _ in range(max(restarts - 1, 0) if method == "boyd" else 0):
        starts.append(rng.random(n) + 1e-3 if nonneg else rng.standard_normal(n))

    if method == "power2":
        val, vec, it, res = _power2(K, tol, max_iter, starts[0])
        return MatrixNorm(val, p, "power2", it, res, _orient(vec))
    if method != "boyd":
        raise ValueError(f"unknown method {method!r}")

    def run(x):
        return _boyd_run(K, p, x, tol, max_iter)

    workers = min(thread_count(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(x) for x in starts]
    best = max(results, key=lambda r: r[0])
    spread = max(r[0] for r in results) - min(r[0] for r in results)
    if spread > 1e-9 * max(best[0], 1e-300):
        log.info("restarts disagree by %.3g (p=%g); keeping the maximum", spread, p)
    return MatrixNorm(best[0], p, "boyd", sum(r[2] for r in results), best[3], _orient(best[1]))


def estimate_norm(matrix: OperatorMatrix, p, *, method: Optional[str] = None,
                  restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                  tol: float = 1e-13, max_iter: int = 50000) -> NormEstimate:
    """Estimate the discrete operator norm of ``J^alpha`` and return the maximiser."""
    pe = as_exponent(p)
    res = matrix_p_norm(matrix.entries, pe.p, method=method, restarts=restarts,
                        seed=seed, tol=tol, max_iter=max_iter)
    maximizer = SampledFunction(matrix.grid, res.vector / _vec_pnorm(res.vector, np.inf))
    return NormEstimate(res.value, pe, res.method, matrix.n, res.iterations, res.residual, maximizer)


def richardson(coarse: float, fine: float, order: float = 1.0) -> float:
    """Extrapolate values at ``n`` and ``2n`` nodes assuming error ``~ C n^-order``."""
    r = 2.0 ** order
    return fine + (fine - coarse) / (r - 1.0)


def _ratios(KT: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    """Row-wise ``||K x|| / ||x||`` for a stack of nonnegative vectors ``X``."""
    num = np.sum((X @ KT) ** p, axis=-1) ** (1.0 / p)
    den = np.sum(X ** p, axis=-1) ** (1.0 / p)
    return num / den


def brute_force_norm(K: np.ndarray, p: float, starts: int = 1024, seed: int = 0,
                     max_sweeps: int = 400) -> float:
    """Oracle for ``max ||K x||_p / ||x||_p`` over nonnegative ``x``, ``n <= 8``.

    Multistart coordinate ascent on the box ``[0, 1]^n`` (the ratio is scale
    invariant, so the box contains a maximiser).  Each coordinate move is a
    zooming grid search; the best few starts are polished with L-BFGS-B.
    For ``p = 2`` the result is cross-checked against a dense SVD.
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[1]
    if n > 8:
        raise ValueError("brute force is limited to n <= 8")
    if np.any(K < 0):
        raise ValueError("brute force assumes an entrywise nonnegative matrix")
    p = float(p)
    if math.isinf(p):
        return float(np.abs(K).sum(axis=1).max())
    KT = K.T
    rng = np.random.default_rng(seed)
    X = rng.random((starts, n))
    X[: n] = np.eye(n) + 1e-3     # near-vertex starts
    X[n] = 1.0
    grid_pts = np.linspace(0.0, 1.0, 17)
    best_prev = -np.inf
    for sweep in range(max_sweeps):
        for j in range(n):
            lo = np.zeros(len(X))
            hi = np.ones(len(X))
            for _zoom in range(6):
                cand = lo[:, None] + (hi - lo)[:, None] * grid_pts[None, :]
                trial = np.repeat(X[:, None, :], len(grid_pts), axis=1)
                trial[:, :, j] = cand
                r = _ratios(KT, trial, p)
                r[~np.isfinite(r)] = -np.inf
                k = np.argmax(r, axis=1)
                X[:, j] = cand[np.arange(len(X)), k]
                width = (hi - lo) / (len(grid_pts) - 1)
                lo = np.maximum(X[:, j] - width, 0.0)
                hi = np.minimum(X[:, j] + width, 1.0)
            # rescale so that the largest entry is 1 (keeps the box constraint slack)
            X /= np.max(X, axis=1, keepdims=True)
        vals = _ratios(KT, X, p)
        best = float(np.max(vals))
        if sweep >= 3 and len(X) > 32:
            X = X[np.argsort(vals)[-32:]]
        if best - best_prev <= 1e-15 * best:
            break
        best_prev = best

    def neg(x):
        x = np.abs(x)
        return -_ratios(KT, x[None, :], p)[0]

    vals = _ratios(KT, X, p)
    result = float(np.max(vals))
    for idx in np.argsort(vals)[-4:]:
        sol = optimize.minimize(neg, X[idx], method="L-BFGS-B",
                                bounds=[(0.0, 1.0)] * n, options={"ftol": 1e-16, "gtol": 1e-12})
        if np.isfinite(sol.fun):
            result = max(result, -float(sol.fun))
    if p == 2.0:
        s = float(linalg.svdvals(K)[0])
        if abs(s - result) > 1e-8 * s:
            log.warning("brute force %.16g disagrees with SVD %.16g", result, s)
    return result


def singular_spectrum(matrix, k: int) -> np.ndarray:
    """Top ``k`` singular values (descending) of an operator matrix or array."""
    K = matrix.entries if isinstance(matrix, OperatorMatrix) else np.asarray(matrix, dtype=float)
    n = K.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if n <= 2 * DENSE_SVD_MAX_N or k >= n // 2:
        return linalg.svdvals(K)[:k]
    s = svds(K, k=k, v0=np.ones(n), return_singular_vectors=False, tol=0)
    return np.sort(s)[::-1]
