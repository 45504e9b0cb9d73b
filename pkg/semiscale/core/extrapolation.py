"""
The extrapolation space X_-1 stored by preimage.

An ExtrapolatedVector with representative f stands for the element (A - sigma)f of
X_-1, so its norm is sup |f| and the extrapolated semigroup acts on f directly.
Every vector carries the descriptor (and thereby the shift sigma) it was built for.
"""

import logging
from dataclasses import dataclass
from typing import Any

from ..utils.sweep_cache import SweepCache
from .exceptions import ArgumentError, ShiftMismatchError, ShiftRequiredError
from .funcspace import Function, Grid, default_grid, sup_norm
from .resolvent import ResolventRequest, resolve
from .scales import (
    FavardEstimate,
    Membership,
    MembershipResult,
    ProbeSchedule,
    favard_sg,
    little_holder,
    strong_continuity,
)
from .semigroups import QuadratureSpec, SemigroupDescriptor, apply, generator_apply

logger = logging.getLogger(__name__)


def _require_shift(sg: SemigroupDescriptor) -> None:
    if not sg.effective_bound < 0.0:
        raise ShiftRequiredError(sg.omega, sg.sigma)


@dataclass(frozen=True)
class ExtrapolatedVector:
    """The element (A - sigma) rep of X_-1.

    Args:
        rep: Preimage in X_0
        sg: Descriptor whose shifted family has negative growth bound
    """

    rep: Function
    sg: SemigroupDescriptor

    def __post_init__(self):
        _require_shift(self.sg)

    def norm(self, grid: Grid | None = None) -> float:
        return sup_norm(self.rep, grid or default_grid())

    def _check_same(self, other: "ExtrapolatedVector") -> None:
        if other.sg != self.sg:
            raise ShiftMismatchError(
                f"cannot combine vectors of {self.sg.selection} (sigma={self.sg.sigma}) "
                f"and {other.sg.selection} (sigma={other.sg.sigma})"
            )

    def __add__(self, other: "ExtrapolatedVector") -> "ExtrapolatedVector":
        self._check_same(other)
        return ExtrapolatedVector(self.rep + other.rep, self.sg)

    def __sub__(self, other: "ExtrapolatedVector") -> "ExtrapolatedVector":
        self._check_same(other)
        return ExtrapolatedVector(self.rep - other.rep, self.sg)

    def scale(self, c: float) -> "ExtrapolatedVector":
        return ExtrapolatedVector(self.rep.scale(c), self.sg)

    def in_lower_space(self, sched: ProbeSchedule | None = None, grid: Grid | None = None) -> bool:
        """True when rep is norm strongly continuous under the shifted family (vector in the closure of X_0)."""
        result = strong_continuity(self.sg, self.rep, sched, grid, shifted=True)
        return result.verdict == Membership.MEMBER

    def to_record(self, grid: Grid | None = None) -> dict[str, Any]:
        return {
            "semigroup": self.sg.selection,
            "sigma": self.sg.sigma,
            "rep_label": self.rep.label,
            "norm": self.norm(grid),
        }


def a_inverse(
    sg: SemigroupDescriptor, f: Function, quad: QuadratureSpec | None = None, method: str = "auto"
) -> Function:
    """(A - sigma)^-1 f = -integral_0^inf exp(-sigma s) T(s) f ds."""
    _require_shift(sg)
    quad = quad or QuadratureSpec.from_config()
    resolved = resolve(sg, ResolventRequest(0.0, quad), f, shifted=True, method=method)
    return Function((-resolved).rule, f"Ainv[{sg.selection},{sg.sigma!r}]({f.label})", resolved.bound_hint)


def embed(sg: SemigroupDescriptor, g: Function, quad: QuadratureSpec | None = None) -> ExtrapolatedVector:
    """g in X_0 viewed as an element of X_-1."""
    return ExtrapolatedVector(a_inverse(sg, g, quad), sg)


def generator_image(sg: SemigroupDescriptor, f: Function) -> ExtrapolatedVector:
    """The element (A - sigma)_-1 f, defined for every f in X_0."""
    return ExtrapolatedVector(f, sg)


def ext_apply(sg: SemigroupDescriptor, t: float, x: ExtrapolatedVector) -> ExtrapolatedVector:
    """T_-1(t) x: the shifted family acts on the representative."""
    if x.sg != sg:
        raise ShiftMismatchError(f"vector built for {x.sg.selection} (sigma={x.sg.sigma}), got {sg.selection}")
    return ExtrapolatedVector(apply(sg, t, x.rep, shifted=True), sg)


def favard0_norm(
    sg: SemigroupDescriptor,
    g: Function,
    sched: ProbeSchedule | None = None,
    quad: QuadratureSpec | None = None,
    grid: Grid | None = None,
    cache: SweepCache | None = None,
) -> FavardEstimate:
    """Favard-0 norm of g: the Favard-1 norm of (A - sigma)^-1 g under the shifted family."""
    return favard_sg(sg, a_inverse(sg, g, quad), 1.0, sched, grid, shifted=True, cache=cache)


def favard_ext(
    sg: SemigroupDescriptor,
    x: ExtrapolatedVector,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    cache: SweepCache | None = None,
) -> FavardEstimate:
    """Favard norm of order alpha - 1 of x."""
    if x.sg != sg:
        raise ShiftMismatchError(f"vector built for {x.sg.selection} (sigma={x.sg.sigma}), got {sg.selection}")
    return favard_sg(sg, x.rep, alpha, sched, grid, shifted=True, cache=cache)


def little_ext(
    sg: SemigroupDescriptor,
    x: ExtrapolatedVector,
    alpha: float,
    sched: ProbeSchedule | None = None,
    grid: Grid | None = None,
    cache: SweepCache | None = None,
) -> MembershipResult:
    """Little-Hölder membership of order alpha - 1 of x."""
    if x.sg != sg:
        raise ShiftMismatchError(f"vector built for {x.sg.selection} (sigma={x.sg.sigma}), got {sg.selection}")
    return little_holder(sg, x.rep, alpha, sched, grid, shifted=True, cache=cache)


def isometry_defect(
    sg: SemigroupDescriptor,
    g: Function,
    quad: QuadratureSpec | None = None,
    grid: Grid | None = None,
    h: float = 1e-4,
) -> float:
    """| |(A - sigma) g|_-1 - |g| | for smooth g, with the generator from `generator_apply`."""
    grid = grid or default_grid()
    image = generator_apply(sg, g, h, shifted=True)
    return abs(embed(sg, image, quad).norm(grid) - sup_norm(g, grid))


def norm_band(
    sg: SemigroupDescriptor,
    gs: list[Function],
    sched: ProbeSchedule | None = None,
    quad: QuadratureSpec | None = None,
    grid: Grid | None = None,
) -> tuple[float, float]:
    """Smallest and largest ratio favard0_norm(g) / sup |g| over the nonzero g."""
    grid = grid or default_grid()
    ratios = []
    for g in gs:
        size = sup_norm(g, grid)
        if size == 0.0:
            continue
        ratios.append(favard0_norm(sg, g, sched, quad, grid).value / size)
        logger.debug(f"[Extrapolation] Favard-0 ratio of {g.label}: {ratios[-1]:.6g}")
    if not ratios:
        raise ArgumentError("norm_band needs at least one function with nonzero norm")
    return min(ratios), max(ratios)
