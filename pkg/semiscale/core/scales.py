"""
Favard and Hölder scales: norm estimates, membership tests and the
classification chain C^1 -> Lip -> h_b -> h_b,loc -> C^alpha -> BUC -> C_b.

Finiteness of a supremum over an unbounded parameter range cannot be decided
numerically. Estimates are therefore slope-based (log-log trend of the quotient
as t -> 0 or lambda -> inf) and also report the window growth
gamma = log2(value on the full grid / value on the centered half grid), which
exposes behavior that only appears at spatial infinity.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np
from scipy import integrate, stats

from ..config import Config
from ..utils.sweep_cache import SweepCache
from .constants import (
    C1_TOLERANCE,
    CHAIN_LABELS,
    DEFAULT_COMPACT_SETS,
    EXPONENT_T_MAX,
    EXPONENT_T_MIN,
    FAVARD_DIVERGING_SLOPE,
    FAVARD_FINITE_SLOPE,
    FAVARD_FIT_DECADES,
    GROWTH_DIVERGING,
    GROWTH_STABLE,
    HALF_WINDOW,
    LITTLE_DECAY_FRACTION,
    LITTLE_FIT_DECADES,
    LITTLE_MEMBER_SLOPE,
    LITTLE_PLATEAU_FACTOR,
    LITTLE_PLATEAU_SLOPE,
    LITTLE_TOL_FACTOR,
    ZERO_RELATIVE,
)
from .exceptions import ArgumentError, ChainConsistencyError
from .funcspace import CompactSet, Function, Grid, default_grid, sample, sup_norm
from .resolvent import resolvent_defect
from .semigroups import QuadratureSpec, SemigroupDescriptor, apply, generator_apply, orbit_integral

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    FINITE = "finite"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


class Membership(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    INCONCLUSIVE = "inconclusive"


class ChainVerdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProbeSchedule:
    """Geometric t- and lambda-grids used by every sweep."""

    t_min: float = 1e-6
    t_max: float = 1e2
    t_points: int = 81
    lambda_min: float = 1e-2
    lambda_max: float = 1e6
    lambda_points: int = 81

    def __post_init__(self):
        for lo, hi, n, name in (
            (self.t_min, self.t_max, self.t_points, "t"),
            (self.lambda_min, self.lambda_max, self.lambda_points, "lambda"),
        ):
            if not (0.0 < lo < hi and math.isfinite(hi)):
                raise ArgumentError(f"{name}-grid needs 0 < min < max, got [{lo}, {hi}]")
            if n < 2:
                raise ArgumentError(f"{name}-grid needs at least 2 points, got {n}")

    @classmethod
    def from_config(cls, config: Config | None = None) -> "ProbeSchedule":
        values = (config or Config()).section("schedule")
        return cls(**{key: int(v) if key.endswith("_points") else float(v) for key, v in values.items()})

    @cached_property
    def t_grid(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.t_points)

    @cached_property
    def lambda_grid(self) -> np.ndarray:
        return np.geomspace(self.lambda_min, self.lambda_max, self.lambda_points)

    def refined(self) -> "ProbeSchedule":
        """Schedule with twice the density; every old point is kept."""
        return ProbeSchedule(
            self.t_min,
            self.t_max,
            2 * self.t_points - 1,
            self.lambda_min,
            self.lambda_max,
            2 * self.lambda_points - 1,
        )

    def to_record(self) -> dict[str, float | int]:
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "t_points": self.t_points,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "lambda_points": self.lambda_points,
        }


@dataclass(frozen=True)
class FavardEstimate:
    """Estimated Favard norm with its sweep and finiteness verdict.

    `slope` is the trend of log quotient against log t (or log 1/lambda) toward the
    limit; when the verdict comes from window growth it is min(slope, -window_growth).
    """

    alpha: float
    value: float
    sup_location: float
    slope: float
    verdict: Verdict
    parameter: str
    params: np.ndarray = field(repr=False, compare=False)
    quotients: np.ndarray = field(repr=False, compare=False)
    window_growth: float = 0.0
    quotient_slope: float = 0.0

    def to_record(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "slope": self.slope,
            "verdict": self.verdict.value,
            "sup_location": self.sup_location,
            "parameter": self.parameter,
            "window_growth": self.window_growth,
        }


@dataclass(frozen=True)
class SetDiagnostic:
    K: CompactSet
    value: float
    slope: float
    verdict: Membership
    quotients: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False, compare=False)


@dataclass(frozen=True)
class MembershipResult:
    """Membership verdict with the quotient at the smallest t and its fitted slope."""

    verdict: Membership
    value: float
    slope: float
    tolerance: float
    window_growth: float = 0.0
    params: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False, compare=False)
    quotients: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False, compare=False)
    per_set: tuple[SetDiagnostic, ...] = ()
    favard: FavardEstimate | None = None

    def to_record(self) -> dict[str, Any]:
        record: dict[str, Any] = {
            "value": self.value,
            "slope": self.slope,
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "window_growth": self.window_growth,
        }
        if self.per_set:
            record["per_set"] = [
                {"K": str(d.K), "value": d.value, "slope": d.slope, "verdict": d.verdict.value} for d in self.per_set
            ]
        return record


@dataclass(frozen=True)
class ExponentEstimate:
    value: float
    raw_slope: float
    fixed_point: bool
    params: np.ndarray = field(repr=False, compare=False)
    differences: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class WeightEstimate:
    """sup |q|^alpha |f| on the grid with its window growth."""

    value: float
    window_growth: float
    verdict: Verdict


@dataclass(frozen=True)
class ChainResult:
    alpha: float
    labels: tuple[str, ...]
    verdicts: tuple[ChainVerdict, ...]
    diagnostics: dict[str, Any]

    @property
    def consistent(self) -> bool:
        return chain_violation(self.verdicts) is None

    def to_record(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "labels": list(self.labels),
            "verdicts": [v.value for v in self.verdicts],
            "consistent": self.consistent,
            "diagnostics": self.diagnostics,
        }


# Profiles


def _profile_key(kind: str, sg: SemigroupDescriptor, f: Function, grid: Grid, params: np.ndarray, shifted: bool):
    return (kind, sg.key, shifted, f.label, grid.a, grid.b, grid.n, tuple(float(p) for p in params))


def difference_profile(
    sg: SemigroupDescriptor,
    f: Function,
    t_grid: np.ndarray,
    grid: Grid,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> np.ndarray:
    """Matrix |T(t)f - f| with one row per t and one column per grid point."""

    def compute() -> np.ndarray:
        base = sample(f, grid)
        rows = np.empty((len(t_grid), grid.n))
        for i, t in enumerate(t_grid):
            rows[i] = np.abs(sample(apply(sg, float(t), f, shifted), grid) - base)
        logger.debug(f"[Scales] difference profile of {f.label}: {len(t_grid)} x {grid.n}")
        return rows

    if cache is None:
        return compute()
    return cache.get_or_compute(_profile_key("sg", sg, f, grid, t_grid, shifted), compute)


def defect_profile(
    sg: SemigroupDescriptor,
    f: Function,
    lambda_grid: np.ndarray,
    grid: Grid,
    quad: QuadratureSpec,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> np.ndarray:
    """Matrix |lambda R(lambda)f - f| with one row per lambda."""

    def compute() -> np.ndarray:
        rows = np.empty((len(lambda_grid), grid.n))
        for i, lam in enumerate(lambda_grid):
            rows[i] = np.abs(sample(resolvent_defect(sg, float(lam), f, quad, shifted, grid), grid))
        logger.debug(f"[Scales] resolvent profile of {f.label}: {len(lambda_grid)} x {grid.n}")
        return rows

    if cache is None:
        return compute()
    key = _profile_key("res", sg, f, grid, lambda_grid, shifted) + (quad,)
    return cache.get_or_compute(key, compute)


# Fits and shared criteria


def fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x over the points with y > 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (y > 0.0) & np.isfinite(y)
    if keep.sum() < 2:
        return math.nan
    return float(stats.linregress(np.log(x[keep]), np.log(y[keep])).slope)


def window_growth(full: float, half: float) -> float:
    """log2(full / half); 0 for vanishing values, inf when only the outer window sees anything."""
    if full <= 0.0:
        return 0.0
    if half <= 0.0:
        return math.inf
    return math.log2(full / half)


def _decades_mask(params: np.ndarray, decades: int, from_top: bool = False) -> np.ndarray:
    if from_top:
        return params >= params[-1] / 10.0**decades * (1.0 - 1e-9)
    return params <= params[0] * 10.0**decades * (1.0 + 1e-9)


def _zero_tol(fnorm: float) -> float:
    return ZERO_RELATIVE * (1.0 + fnorm)


def _favard_verdict(quotient_slope: float, growth: float) -> tuple[Verdict, float]:
    if math.isnan(quotient_slope):
        return Verdict.INCONCLUSIVE, quotient_slope
    trend = quotient_slope
    if growth >= GROWTH_DIVERGING:
        trend = min(trend, -growth)
    if trend <= FAVARD_DIVERGING_SLOPE:
        return Verdict.DIVERGING, trend
    if quotient_slope >= FAVARD_FINITE_SLOPE and growth < GROWTH_STABLE:
        return Verdict.FINITE, trend
    return Verdict.INCONCLUSIVE, trend


def _local_verdict(t: np.ndarray, q: np.ndarray, mask: np.ndarray, tol: float, zero: float) -> tuple[Membership, float]:
    """Little-o criterion on one window: member, plateau (non-member) or inconclusive."""
    if float(np.max(q[mask])) <= zero:
        return Membership.MEMBER, 0.0
    slope = fit_slope(t[mask], q[mask])
    if math.isnan(slope):
        return Membership.INCONCLUSIVE, slope
    q0 = float(q[0])
    if q0 > LITTLE_PLATEAU_FACTOR * tol and abs(slope) <= LITTLE_PLATEAU_SLOPE:
        return Membership.NON_MEMBER, slope
    decayed = q0 <= tol or q0 <= LITTLE_DECAY_FRACTION * float(np.max(q[mask]))
    if slope >= LITTLE_MEMBER_SLOPE and decayed:
        return Membership.MEMBER, slope
    return Membership.INCONCLUSIVE, slope


def _defaults(sched: ProbeSchedule | None, grid: Grid | None) -> tuple[ProbeSchedule, Grid]:
    return sched or ProbeSchedule.from_config(), grid or default_grid()


def _check_alpha(alpha: float, closed: bool) -> None:
    upper_ok = alpha <= 1.0 if closed else alpha < 1.0
    if not (alpha > 0.0 and upper_ok):
        interval = "(0, 1]" if closed else "(0, 1)"
        raise ArgumentError(f"alpha must lie in {interval}, got {alpha}")


# Estimators


def favard_sg(
    sg: SemigroupDescriptor,
    f: Function,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> FavardEstimate:
    """sup_t |T(t)f - f| / t^alpha over the t-grid with a finiteness verdict."""
    _check_alpha(alpha, closed=True)
    sched, grid = _defaults(sched, grid)
    t = sched.t_grid
    profile = difference_profile(sg, f, t, grid, shifted, cache)
    half = grid.window_mask(HALF_WINDOW)
    d_full = profile.max(axis=1)
    d_half = profile[:, half].max(axis=1)
    q_full = d_full / t**alpha
    q_half = d_half / t**alpha
    return _favard_estimate(alpha, "t", t, q_full, q_half, d_full, _zero_tol(sup_norm(f, grid)), np.log(t))


def favard_res(
    sg: SemigroupDescriptor,
    f: Function,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    quad: QuadratureSpec | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> FavardEstimate:
    """sup_lambda lambda^alpha |lambda R(lambda)f - f| over the lambda-grid with a finiteness verdict."""
    _check_alpha(alpha, closed=True)
    sched, grid = _defaults(sched, grid)
    quad = quad or QuadratureSpec.from_config()
    lam = sched.lambda_grid
    profile = defect_profile(sg, f, lam, grid, quad, shifted, cache)
    half = grid.window_mask(HALF_WINDOW)
    e_full = profile.max(axis=1)
    e_half = profile[:, half].max(axis=1)
    q_full = lam**alpha * e_full
    q_half = lam**alpha * e_half
    # a fixed point leaves only quadrature error in the defect
    fnorm = sup_norm(f, grid)
    zero = max(_zero_tol(fnorm), quad.tol * (1.0 + fnorm))
    return _favard_estimate(alpha, "lambda", lam, q_full, q_half, e_full, zero, -np.log(lam))


def _favard_estimate(
    alpha: float,
    parameter: str,
    params: np.ndarray,
    q_full: np.ndarray,
    q_half: np.ndarray,
    raw: np.ndarray,
    zero: float,
    fit_x: np.ndarray,
) -> FavardEstimate:
    """Verdict and value from a quotient sweep; `raw` at or below `zero` everywhere means f is a fixed point."""
    index = int(np.argmax(q_full))
    value = float(q_full[index])
    if float(raw.max()) <= zero:
        return FavardEstimate(alpha, 0.0, float(params[index]), 0.0, Verdict.FINITE, parameter, params, q_full)

    mask = _decades_mask(params, FAVARD_FIT_DECADES, from_top=parameter == "lambda")
    keep = mask & (q_full > 0.0)
    if keep.sum() >= 2:
        quotient_slope = float(stats.linregress(fit_x[keep], np.log(q_full[keep])).slope)
    else:
        quotient_slope = math.nan
    growth = window_growth(value, float(q_half.max()))
    verdict, trend = _favard_verdict(quotient_slope, growth)
    if verdict == Verdict.INCONCLUSIVE:
        logger.warning(f"[Scales] inconclusive Favard-{alpha:g} ({parameter}): slope {quotient_slope:.3f}, growth {growth:.3f}")
    return FavardEstimate(
        alpha, value, float(params[index]), trend, verdict, parameter, params, q_full, growth, quotient_slope
    )


def holder_quotients(
    sg: SemigroupDescriptor,
    f: Function,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """t-grid and psi(t) = |T(t)f - f| / t^alpha."""
    sched, grid = _defaults(sched, grid)
    profile = difference_profile(sg, f, sched.t_grid, grid, shifted, cache)
    return sched.t_grid, profile.max(axis=1) / sched.t_grid**alpha


def little_holder(
    sg: SemigroupDescriptor,
    f: Function,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> MembershipResult:
    """Is |T(t)f - f| / t^alpha -> 0 as t -> 0 in the sup-norm?"""
    _check_alpha(alpha, closed=False)
    sched, grid = _defaults(sched, grid)
    t = sched.t_grid
    profile = difference_profile(sg, f, t, grid, shifted, cache)
    half = grid.window_mask(HALF_WINDOW)
    q_full = profile.max(axis=1) / t**alpha
    q_half = profile[:, half].max(axis=1) / t**alpha
    fnorm = sup_norm(f, grid)
    tol = LITTLE_TOL_FACTOR * (1.0 + fnorm)
    mask = _decades_mask(t, LITTLE_FIT_DECADES)
    growth0 = window_growth(float(q_full[0]), float(q_half[0]))

    verdict, slope = _local_verdict(t, q_full, mask, tol, _zero_tol(fnorm))
    # quotient escaping toward the window edge
    if growth0 >= GROWTH_DIVERGING and float(q_full[0]) > LITTLE_DECAY_FRACTION * tol:
        verdict = Membership.NON_MEMBER
    return MembershipResult(verdict, float(q_full[0]), slope, tol, growth0, t, q_full)


def bicont_holder(
    sg: SemigroupDescriptor,
    f: Function,
    alpha: float,
    Ks: list[CompactSet] | None = None,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> MembershipResult:
    """Bounded Favard quotient that tends to 0 in every compact seminorm p_K."""
    _check_alpha(alpha, closed=False)
    sched, grid = _defaults(sched, grid)
    Ks = Ks or [CompactSet(a, b) for a, b in DEFAULT_COMPACT_SETS]
    t = sched.t_grid
    favard = favard_sg(sg, f, alpha, sched, grid, shifted, cache)
    profile = difference_profile(sg, f, t, grid, shifted, cache)
    fnorm = sup_norm(f, grid)
    tol = LITTLE_TOL_FACTOR * (1.0 + fnorm)
    mask = _decades_mask(t, LITTLE_FIT_DECADES)

    diagnostics = []
    for K in Ks:
        q = profile[:, grid.mask_for(K)].max(axis=1) / t**alpha
        verdict, slope = _local_verdict(t, q, mask, tol, _zero_tol(fnorm))
        diagnostics.append(SetDiagnostic(K, float(q[0]), slope, verdict, q))

    local = [d.verdict for d in diagnostics]
    if favard.verdict == Verdict.DIVERGING or Membership.NON_MEMBER in local:
        verdict = Membership.NON_MEMBER
    elif favard.verdict == Verdict.FINITE and all(v == Membership.MEMBER for v in local):
        verdict = Membership.MEMBER
    else:
        verdict = Membership.INCONCLUSIVE
    worst = max(diagnostics, key=lambda d: d.value)
    return MembershipResult(
        verdict, worst.value, worst.slope, tol, favard.window_growth, t, favard.quotients, tuple(diagnostics), favard
    )


def strong_continuity(
    sg: SemigroupDescriptor,
    f: Function,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> MembershipResult:
    """Does |T(t)f - f| -> 0 as t -> 0 (the space of norm strong continuity)?

    The trend is read where the full and half windows agree, so differences that
    only grow toward the edge of the grid are not mistaken for decay.
    """
    sched, grid = _defaults(sched, grid)
    t = sched.t_grid
    profile = difference_profile(sg, f, t, grid, shifted, cache)
    half = grid.window_mask(HALF_WINDOW)
    d_full = profile.max(axis=1)
    d_half = profile[:, half].max(axis=1)
    fnorm = sup_norm(f, grid)
    tol = LITTLE_TOL_FACTOR * (1.0 + fnorm)
    zero = _zero_tol(fnorm)
    if float(d_full.max()) <= zero:
        return MembershipResult(Membership.MEMBER, 0.0, 0.0, tol, 0.0, t, d_full)

    growth = np.array([window_growth(float(a), float(b)) for a, b in zip(d_full, d_half, strict=True)])
    unstable = np.nonzero(growth >= GROWTH_STABLE)[0]
    start = 0 if unstable.size == 0 else int(unstable[-1]) + 1
    if start >= len(t) - 1:
        return MembershipResult(Membership.INCONCLUSIVE, float(d_full[0]), math.nan, tol, float(growth[0]), t, d_full)

    ts, ds = t[start:], d_full[start:]
    mask = _decades_mask(ts, FAVARD_FIT_DECADES)
    slope = fit_slope(ts[mask], ds[mask])
    if slope >= LITTLE_MEMBER_SLOPE:
        verdict = Membership.MEMBER
    elif abs(slope) <= LITTLE_PLATEAU_SLOPE and float(ds[0]) > LITTLE_PLATEAU_FACTOR * tol:
        verdict = Membership.NON_MEMBER
    else:
        verdict = Membership.INCONCLUSIVE
    return MembershipResult(verdict, float(ds[0]), slope, tol, float(growth[0]), t, d_full)


def holder_exponent(
    sg: SemigroupDescriptor,
    f: Function,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> ExponentEstimate:
    """Slope of log |T(t)f - f| against log t for t in [1e-4, 1e-1], clamped to [0, 1]."""
    sched, grid = _defaults(sched, grid)
    t = sched.t_grid
    window = (t >= EXPONENT_T_MIN * (1.0 - 1e-9)) & (t <= EXPONENT_T_MAX * (1.0 + 1e-9))
    if window.sum() < 2:
        raise ArgumentError(f"t-grid needs at least two points in [{EXPONENT_T_MIN}, {EXPONENT_T_MAX}]")
    profile = difference_profile(sg, f, t, grid, shifted, cache)
    d = profile.max(axis=1)[window]
    tw = t[window]
    if float(d.max()) <= _zero_tol(sup_norm(f, grid)):
        return ExponentEstimate(1.0, math.nan, True, tw, d)
    slope = fit_slope(tw, d)
    value = 0.0 if math.isnan(slope) else min(max(slope, 0.0), 1.0)
    return ExponentEstimate(value, slope, False, tw, d)


def interpolation_norm(
    sg: SemigroupDescriptor,
    f: Function,
    alpha: float,
    p: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
    cache: SweepCache | None = None,
) -> float:
    """L^p norm of psi(t) = t^-alpha |T(t)f - f| against dt/t over the schedule's t-window."""
    _check_alpha(alpha, closed=True)
    if not (p >= 1.0):
        raise ArgumentError(f"p must lie in [1, inf], got {p}")
    t, psi = holder_quotients(sg, f, alpha, sched, grid, shifted, cache)
    if math.isinf(p):
        return float(psi.max())
    return float(integrate.trapezoid(psi**p, np.log(t)) ** (1.0 / p))


def multiplier_weight_norm(q: Function, f: Function, alpha: float, grid: Grid | None = None) -> WeightEstimate:
    """sup |q|^alpha |f|: finite exactly for f in the Favard space of the multiplication semigroup."""
    _check_alpha(alpha, closed=True)
    grid = grid or default_grid()
    weighted = np.abs(sample(q, grid)) ** alpha * np.abs(sample(f, grid))
    value = float(weighted.max())
    growth = window_growth(value, float(weighted[grid.window_mask(HALF_WINDOW)].max()))
    if growth >= GROWTH_DIVERGING:
        verdict = Verdict.DIVERGING
    elif growth < GROWTH_STABLE:
        verdict = Verdict.FINITE
    else:
        verdict = Verdict.INCONCLUSIVE
    return WeightEstimate(value, growth, verdict)


def mean_regularize(
    sg: SemigroupDescriptor, f: Function, n: int, panels: int | None = None, shifted: bool = False
) -> Function:
    """x_n = n * integral_0^(1/n) T(s)f ds, an element of D(A) converging to f in X_0-closure of D(A)."""
    if n < 1:
        raise ArgumentError(f"n must be a positive integer, got {n}")
    return orbit_integral(sg, 1.0 / n, f, panels, shifted).scale(float(n))


# Classification chain


def chain_violation(verdicts: tuple[ChainVerdict, ...]) -> tuple[int, int] | None:
    """First pair (i, j), i < j, with yes at i but no at j, or None."""
    for i, vi in enumerate(verdicts):
        if vi != ChainVerdict.YES:
            continue
        for j in range(i + 1, len(verdicts)):
            if verdicts[j] == ChainVerdict.NO:
                return i, j
    return None


def _from_verdict(v: Verdict | Membership) -> ChainVerdict:
    if v in (Verdict.FINITE, Membership.MEMBER):
        return ChainVerdict.YES
    if v in (Verdict.DIVERGING, Membership.NON_MEMBER):
        return ChainVerdict.NO
    return ChainVerdict.INCONCLUSIVE


def _c1_verdict(sg: SemigroupDescriptor, f: Function, grid: Grid) -> tuple[ChainVerdict, dict[str, float]]:
    h = grid.spacing
    coarse = sample(generator_apply(sg, f, h), grid)
    fine = sample(generator_apply(sg, f, h / 2.0), grid)
    change = float(np.max(np.abs(coarse - fine)))
    top = float(np.max(np.abs(fine)))
    tol = C1_TOLERANCE * (1.0 + top)
    growth = window_growth(top, float(np.max(np.abs(fine[grid.window_mask(HALF_WINDOW)]))))
    verdict = ChainVerdict.YES if change <= tol and growth < GROWTH_DIVERGING else ChainVerdict.NO
    return verdict, {"mesh_change": change, "tolerance": tol, "derivative_growth": growth}


def _bounded_verdict(f: Function, grid: Grid) -> tuple[ChainVerdict, dict[str, float]]:
    values = np.abs(sample(f, grid))
    full = float(values.max())
    growth = window_growth(full, float(values[grid.window_mask(HALF_WINDOW)].max()))
    verdict = ChainVerdict.YES if growth < GROWTH_DIVERGING else ChainVerdict.NO
    return verdict, {"sup": full, "window_growth": growth}


def classify_chain(
    f: Function,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    Ks: list[CompactSet] | None = None,
    cache: SweepCache | None = None,
    sg: SemigroupDescriptor | None = None,
) -> ChainResult:
    """Verdicts for C^1, Lip, h_b, h_b,loc, C^alpha, BUC, C_b under the translation semigroup.

    Raises:
        ChainConsistencyError: a yes is followed by a no along the inclusion order
    """
    _check_alpha(alpha, closed=False)
    sched, grid = _defaults(sched, grid)
    sg = sg or SemigroupDescriptor.translation()
    cache = cache if cache is not None else SweepCache()

    c1, c1_info = _c1_verdict(sg, f, grid)
    lip = favard_sg(sg, f, 1.0, sched, grid, cache=cache)
    little = little_holder(sg, f, alpha, sched, grid, cache=cache)
    local = bicont_holder(sg, f, alpha, Ks, sched, grid, cache=cache)
    holder = favard_sg(sg, f, alpha, sched, grid, cache=cache)
    buc = strong_continuity(sg, f, sched, grid, cache=cache)
    bounded, bounded_info = _bounded_verdict(f, grid)

    verdicts = (
        c1,
        _from_verdict(lip.verdict),
        _from_verdict(little.verdict),
        _from_verdict(local.verdict),
        _from_verdict(holder.verdict),
        _from_verdict(buc.verdict),
        bounded,
    )
    diagnostics: dict[str, Any] = {
        "C1": c1_info,
        "Lip": lip.to_record(),
        "h_b": little.to_record(),
        "h_b_loc": local.to_record(),
        "C_alpha": holder.to_record(),
        "BUC": buc.to_record(),
        "C_b": bounded_info,
    }
    result = ChainResult(alpha, CHAIN_LABELS, verdicts, diagnostics)
    logger.info(f"[Scales] chain of {f.label} at alpha={alpha:g}: {', '.join(v.value for v in verdicts)}")

    violation = chain_violation(verdicts)
    if violation is not None:
        i, j = violation
        raise ChainConsistencyError(
            f"{f.label}: '{CHAIN_LABELS[i]}' is yes but the larger space '{CHAIN_LABELS[j]}' is no",
            result.to_record(),
        )
    return result
