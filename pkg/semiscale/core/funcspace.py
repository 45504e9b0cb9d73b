"""
Functions, grids and the norms of C_b(R).

A Function is a closed-form evaluation rule, never a sampled array: the
translation semigroup and every quadrature evaluate at arbitrary points.
Sup-norms are grid maxima and therefore lower bounds for the true sup.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from ..config import Config
from .exceptions import ArgumentError, EvaluationError

logger = logging.getLogger(__name__)

Rule = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Function:
    """An evaluable real function on the real line.

    Args:
        rule: Vectorized rule mapping an array of x to an array of values
        label: Identifier, `name` or `name:param` for library functions
        bound_hint: Known bound for sup |f|, if any
    """

    rule: Rule = field(compare=False, repr=False)
    label: str
    bound_hint: float | None = None

    def __call__(self, x: Any) -> Any:
        arr = np.asarray(x, dtype=float)
        values = np.asarray(self.rule(arr), dtype=float)
        if values.shape != arr.shape:
            values = np.broadcast_to(values, arr.shape).copy()
        if arr.ndim == 0:
            return float(values)
        return values

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on an array and reject non-finite values."""
        x = np.asarray(x, dtype=float)
        values = np.atleast_1d(self(x))
        bad = ~np.isfinite(values)
        if bad.any():
            index = int(np.argmax(bad))
            raise EvaluationError(np.atleast_1d(x)[index], self.label, float(values[index]))
        return values

    def __add__(self, other: "Function") -> "Function":
        return _combine(self, other, np.add, "+")

    def __sub__(self, other: "Function") -> "Function":
        return _combine(self, other, np.subtract, "-")

    def __neg__(self) -> "Function":
        return self.scale(-1.0)

    def __mul__(self, other: "Function | float") -> "Function":
        if isinstance(other, Function):
            return _combine(self, other, np.multiply, "*")
        return self.scale(float(other))

    __rmul__ = __mul__

    def scale(self, c: float) -> "Function":
        """Return x -> c * f(x)."""
        rule = self.rule
        hint = None if self.bound_hint is None else abs(c) * self.bound_hint
        return Function(lambda x: c * rule(x), f"{c!r}*({self.label})", hint)

    @classmethod
    def constant(cls, c: float, label: str | None = None) -> "Function":
        c = float(c)
        return cls(lambda x: np.full(np.shape(x), c), label or f"const:{c!r}", abs(c))

    @classmethod
    def from_samples(cls, points: np.ndarray, values: np.ndarray, label: str = "samples") -> "Function":
        """Piecewise-linear function through samples, constant beyond the ends."""
        xs = np.asarray(points, dtype=float).copy()
        ys = np.asarray(values, dtype=float).copy()
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ArgumentError("from_samples needs two equal-length 1-D arrays with at least two points")
        if not np.all(np.isfinite(ys)):
            index = int(np.argmax(~np.isfinite(ys)))
            raise EvaluationError(xs[index], label, float(ys[index]))
        return cls(lambda x: np.interp(x, xs, ys), label, float(np.max(np.abs(ys))))


def _combine(f: Function, g: Function, op: Callable, symbol: str) -> Function:
    hint = None
    if f.bound_hint is not None and g.bound_hint is not None:
        if symbol == "*":
            hint = f.bound_hint * g.bound_hint
        else:
            hint = f.bound_hint + g.bound_hint
    frule, grule = f.rule, g.rule
    return Function(lambda x: op(frule(x), grule(x)), f"({f.label}){symbol}({g.label})", hint)


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [a, b] with n points including both endpoints."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.a >= self.b:
            raise ArgumentError(f"Grid needs finite a < b, got [{self.a}, {self.b}]")
        if self.n < 2:
            raise ArgumentError(f"Grid needs n >= 2, got {self.n}")

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n)

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    def window_mask(self, fraction: float) -> np.ndarray:
        """Mask of the points in the centered sub-window of relative width `fraction`."""
        half = 0.5 * fraction * (self.b - self.a)
        slack = 1e-9 * self.spacing
        return np.abs(self.points - self.center) <= half + slack

    def mask_for(self, K: "CompactSet") -> np.ndarray:
        """Mask of the grid points lying in K."""
        slack = 1e-9 * self.spacing
        if K.a < self.a - slack or K.b > self.b + slack:
            raise ArgumentError(f"Compact set [{K.a}, {K.b}] is not inside the grid [{self.a}, {self.b}]")
        mask = (self.points >= K.a - slack) & (self.points <= K.b + slack)
        if not mask.any():
            raise ArgumentError(f"Compact set [{K.a}, {K.b}] contains no grid point")
        return mask

    def to_record(self) -> dict[str, float | int]:
        return {"a": self.a, "b": self.b, "n": self.n}


@dataclass(frozen=True)
class CompactSet:
    """A compact interval K = [a, b]."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ArgumentError(f"Compact set needs finite endpoints, got [{self.a}, {self.b}]")
        if self.a > self.b:
            raise ArgumentError(f"Compact set needs a <= b, got [{self.a}, {self.b}]")

    def sample_points(self, density: int) -> np.ndarray:
        if density < 1:
            raise ArgumentError(f"density must be positive, got {density}")
        if density == 1 or self.a == self.b:
            return np.array([self.a])
        return np.linspace(self.a, self.b, density)

    def __str__(self) -> str:
        return f"[{self.a:g},{self.b:g}]"


def default_grid(config: Config | None = None) -> Grid:
    """Estimation grid from configuration ([-40, 40], n = 16001 by default)."""
    values = (config or Config()).section("grid")
    return Grid(float(values["grid_a"]), float(values["grid_b"]), int(values["grid_n"]))


def sample(f: Function, g: Grid) -> np.ndarray:
    """Values of f at the grid points, in order."""
    return f.evaluate(g.points)


def sup_norm(f: Function, g: Grid) -> float:
    """Grid maximum of |f|, a lower bound for the sup-norm."""
    return float(np.max(np.abs(sample(f, g))))


def compact_seminorm(f: Function, K: CompactSet, density: int | None = None) -> float:
    """p_K(f) = max |f| over `density` uniform points of K."""
    if density is None:
        density = int(Config().get("compact_density"))
    return float(np.max(np.abs(f.evaluate(K.sample_points(density)))))


def holder_quotient(f: Function, alpha: float, g: Grid, lag_max: int) -> float:
    """Sup of |f(x) - f(y)| / |x - y|^alpha over grid pairs at most `lag_max` indices apart."""
    if not 0.0 < alpha <= 1.0:
        raise ArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    if lag_max < 1:
        raise ArgumentError(f"lag_max must be positive, got {lag_max}")
    values = sample(f, g)
    best = 0.0
    for lag in range(1, min(lag_max, g.n - 1) + 1):
        diffs = np.abs(values[lag:] - values[:-lag])
        best = max(best, float(diffs.max()) / (lag * g.spacing) ** alpha)
    return best
