"""Uniform grids, sampled vector-valued functions and discrete L^p norms.

A function ``f: [t0, t1] -> R^d`` is stored by its node values on a uniform
grid.  Functions with an integrable singularity at ``t0`` (negative powers)
carry the ``singular_at_t0`` flag: the stored value at ``t0`` is a
placeholder 0, and norms ignore that node.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Interval:
    t0: float
    t1: float

    def __post_init__(self):
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "t1", float(self.t1))
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)):
            raise ValueError("interval endpoints must be finite")
        if not self.t0 < self.t1:
            raise ValueError(f"need t0 < t1, got [{self.t0}, {self.t1}]")

    @property
    def length(self) -> float:
        return self.t1 - self.t0


@dataclass(frozen=True)
class UniformGrid:
    """``n`` equispaced nodes ``t0 + i*h`` covering ``interval`` exactly."""

    interval: Interval
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"a grid needs at least 2 nodes, got n={self.n}")

    @property
    def h(self) -> float:
        return self.interval.length / (self.n - 1)

    @property
    def t0(self) -> float:
        return self.interval.t0

    @property
    def t1(self) -> float:
        return self.interval.t1

    def node(self, i: int) -> float:
        if i == self.n - 1:
            return self.interval.t1
        return self.interval.t0 + i * self.h

    @property
    def nodes(self) -> np.ndarray:
        t = self.interval.t0 + self.h * np.arange(self.n, dtype=float)
        t[-1] = self.interval.t1
        return t

    @property
    def elapsed(self) -> np.ndarray:
        """Offsets ``t_i - t0``, computed as ``i*h`` to avoid cancellation."""
        return self.h * np.arange(self.n, dtype=float)


def make_uniform_grid(interval: Interval | tuple, n: int) -> UniformGrid:
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    return UniformGrid(interval, int(n))


@dataclass(frozen=True)
class LebesgueExponent:
    """Exponent ``p`` in ``[1, inf]`` together with its Hoelder conjugate."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise ValueError(f"Lebesgue exponent must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def conjugate(self) -> float:
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.p)

    def __float__(self):
        return self.p


def as_exponent(p) -> LebesgueExponent:
    if isinstance(p, LebesgueExponent):
        return p
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in ("inf", "infinity", "oo") else float(p)
    return LebesgueExponent(p)


@dataclass(frozen=True)
class Family:
    """Descriptor of an analytic test function.

    ``kind`` is one of ``constant``, ``power``, ``monomial``, ``sigma_p``,
    ``table``.  ``x`` is the direction in ``R^d`` (default ``e_1``).
    """

    kind: str
    nu: float = 0.0
    degree: int = 0
    alpha: float = 0.0
    p: float = math.inf
    x: tuple = (1.0,)
    values: Optional[tuple] = field(default=None, repr=False, compare=False)

    @classmethod
    def constant(cls, x=(1.0,)):
        return cls("constant", x=tuple(x))

    @classmethod
    def power(cls, nu: float, x=(1.0,)):
        if not nu > -1.0:
            raise ValueError(f"(t - t0)^nu is not integrable for nu={nu} <= -1")
        return cls("power", nu=float(nu), x=tuple(x))

    @classmethod
    def monomial(cls, degree: int, x=(1.0,)):
        if int(degree) != degree or degree < 0:
            raise ValueError("monomial degree must be a non-negative integer")
        return cls("monomial", degree=int(degree), nu=float(degree), x=tuple(x))

    @classmethod
    def sigma_p(cls, alpha: float, p, x=(1.0,)):
        return cls("sigma_p", alpha=float(alpha), p=as_exponent(p).p, x=tuple(x))

    @classmethod
    def table(cls, values):
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        return cls("table", values=tuple(map(tuple, arr)), x=(1.0,) * arr.shape[1])

    @property
    def is_monomial(self) -> bool:
        return self.kind == "constant" or self.kind == "monomial"

    @property
    def monomial_degree(self) -> int:
        if self.kind == "constant":
            return 0
        if self.kind == "monomial":
            return self.degree
        raise ValueError(f"{self.kind} family is not a monomial")


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Node values (``n x d``) of a function on a :class:`UniformGrid`."""

    grid: UniformGrid
    values: np.ndarray
    singular_at_t0: bool = False
    family: Optional[Family] = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[1] < 1:
            raise ValueError("values must be an n x d array")
        if v.shape[0] != self.grid.n:
            raise ValueError(f"{v.shape[0]} rows for a grid of {self.grid.n} nodes")
        check = v[1:] if self.singular_at_t0 else v
        if not np.all(np.isfinite(check)):
            raise ValueError("non-finite node values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def n(self) -> int:
        return self.grid.n

    def pointwise_norm(self) -> np.ndarray:
        """Euclidean norm of ``f(t_i)`` at every node."""
        if self.d == 1:
            return np.abs(self.values[:, 0])
        return np.linalg.norm(self.values, axis=1)

    def with_values(self, values, singular_at_t0: Optional[bool] = None) -> "SampledFunction":
        flag = self.singular_at_t0 if singular_at_t0 is None else singular_at_t0
        return SampledFunction(self.grid, values, flag)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        _check_same_grid(self, other)
        return SampledFunction(self.grid, self.values + other.values,
                               self.singular_at_t0 or other.singular_at_t0)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        _check_same_grid(self, other)
        return SampledFunction(self.grid, self.values - other.values,
                               self.singular_at_t0 or other.singular_at_t0)

    def __mul__(self, c: float) -> "SampledFunction":
        return SampledFunction(self.grid, float(c) * self.values, self.singular_at_t0)

    __rmul__ = __mul__


def _check_same_grid(f: SampledFunction, g: SampledFunction) -> None:
    if f.grid != g.grid:
        raise ValueError("functions live on different grids")


def _direction(x, d: Optional[int] = None) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if d is not None and d > x.size:
        x = np.concatenate([x, np.zeros(d - x.size)])
    return x


def sample_family(family: Family, grid: UniformGrid, d: Optional[int] = None) -> SampledFunction:
    """Node values of an analytic family on ``grid``.

    ``d`` pads the direction vector with zeros, so ``d=3`` with the default
    direction gives ``x = (1, 0, 0)``.
    """
    s = grid.elapsed
    singular = False
    if family.kind == "table":
        values = np.asarray(family.values, dtype=float)
        return SampledFunction(grid, values, family=family)
    x = _direction(family.x, d)
    if family.kind == "constant":
        scalar = np.ones(grid.n)
    elif family.kind in ("power", "monomial"):
        nu = family.nu
        if not nu > -1.0:
            raise ValueError(f"(t - t0)^nu is not integrable for nu={nu} <= -1")
        scalar = np.empty(grid.n)
        scalar[1:] = s[1:] ** nu
        if nu > 0:
            scalar[0] = 0.0
        elif nu == 0:
            scalar[0] = 1.0
        else:
            scalar[0] = 0.0
            singular = True
    elif family.kind == "sigma_p":
        if math.isinf(family.p):
            scalar = np.ones(grid.n)
        else:
            expo = -(family.alpha + 1.0 / family.p)
            scalar = np.zeros(grid.n)
            tail = s > 1.0
            scalar[tail] = s[tail] ** expo
    else:
        raise ValueError(f"unknown family kind {family.kind!r}")
    return SampledFunction(grid, np.outer(scalar, x), singular, family)


def trapezoid_weights(grid: UniformGrid, singular_at_t0: bool = False) -> np.ndarray:
    w = np.full(grid.n, grid.h)
    w[0] = w[-1] = 0.5 * grid.h
    if singular_at_t0:
        w[0] = 0.0
    return w


def lp_norm(f: SampledFunction, p) -> float:
    """Discrete ``L^p(t0, t1; R^d)`` norm of ``f``.

    Finite ``p`` uses the composite trapezoid rule on ``|f(t)|^p``;
    ``p = inf`` is the maximum over nodes.  A node flagged singular is
    skipped in both cases.
    """
    p = as_exponent(p)
    r = f.pointwise_norm()
    if f.singular_at_t0:
        r = r.copy()
        r[0] = 0.0
    scale = float(np.max(r))
    if p.is_infinite or scale == 0.0:
        return scale
    w = trapezoid_weights(f.grid, f.singular_at_t0)
    # normalising first keeps r**p in range for large p
    return float(scale * np.dot(w, (r / scale) ** p.p) ** (1.0 / p.p))


def read_table_csv(source, interval_tol: float = 1e-9) -> SampledFunction:
    """Parse ``t,v1..vd`` CSV text (or a path) into a sampled function.

    The ``t`` column must be strictly increasing and uniform to within
    ``interval_tol * h``.
    """
    if isinstance(source, str) and "\n" not in source and "," not in source:
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source if isinstance(source, str) else source.read()
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], [r for r in rows[1:] if r]
    if not header or header[0].strip() != "t" or len(header) < 2:
        raise ValueError("CSV header must be 't,v1,...,vd'")
    data = np.array([[float(c) for c in r] for r in body], dtype=float)
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValueError("ragged CSV rows")
    t = data[:, 0]
    if t.size < 2 or np.any(np.diff(t) <= 0):
        raise ValueError("t column must be strictly increasing with at least 2 rows")
    grid = make_uniform_grid(Interval(t[0], t[-1]), t.size)
    if np.max(np.abs(t - grid.nodes)) > interval_tol * grid.h:
        raise ValueError("t column is not a uniform grid")
    return sample_family(Family.table(data[:, 1:]), grid)


def write_table_csv(f: SampledFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"v{k + 1}" for k in range(f.d)])
    for t, row in zip(f.grid.nodes, f.values):
        w.writerow([format(t, ".17g")] + [format(v, ".17g") for v in row])
    return buf.getvalue()
