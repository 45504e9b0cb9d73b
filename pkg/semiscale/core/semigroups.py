"""
The three concrete semigroups on C_b(R) and their shared quadrature kernel.

    translation      (T(t)f)(x) = f(x + t)
    multiplication   (T(t)f)(x) = exp(t q(x)) f(x),  q < 0
    heat             (T(t)f)(x) = (G_t * f)(x),  G_t(y) = exp(-y^2/4t) / sqrt(4 pi t)

Every operation takes `shifted`: False selects T(t), True the rescaled family
exp(-sigma t) T(t) whose generator is A - sigma.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from ..config import Config
from .constants import (
    HEAT_IDENTITY_STEPS,
    HEAT_KERNEL_RESOLUTION,
    HEAT_KERNEL_WIDTHS,
    HEAT_NODES,
    HEAT_STEP,
    HEAT_WIDTH,
)
from .exceptions import ArgumentError, DomainError
from .funcspace import Function, Grid, default_grid, sample
from .library import get_function

logger = logging.getLogger(__name__)


class SemigroupKind(str, Enum):
    TRANSLATION = "translation"
    MULTIPLICATION = "multiplication"
    HEAT = "heat"


@dataclass(frozen=True)
class SemigroupDescriptor:
    """One of the concrete semigroups with its type constants (M, omega) and shift sigma."""

    kind: SemigroupKind
    q: Function | None = None
    M: float = 1.0
    omega: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind == SemigroupKind.MULTIPLICATION and self.q is None:
            raise ArgumentError("multiplication semigroup needs a multiplier q")
        if self.M < 1.0:
            raise ArgumentError(f"type constant M must be >= 1, got {self.M}")
        if self.sigma < 0.0:
            raise ArgumentError(f"shift sigma must be >= 0, got {self.sigma}")

    @classmethod
    def translation(cls, sigma: float = 1.0) -> "SemigroupDescriptor":
        return cls(SemigroupKind.TRANSLATION, sigma=sigma)

    @classmethod
    def heat(cls, sigma: float = 1.0) -> "SemigroupDescriptor":
        return cls(SemigroupKind.HEAT, sigma=sigma)

    @classmethod
    def multiplication(cls, q: Function, grid: Grid | None = None, sigma: float = 0.0) -> "SemigroupDescriptor":
        """Multiplication by exp(t q); omega is the grid maximum of q and must be negative."""
        grid = grid or default_grid()
        omega = float(np.max(sample(q, grid)))
        if omega >= 0.0:
            raise DomainError(f"multiplier '{q.label}' must be strictly negative, grid max is {omega!r}")
        return cls(SemigroupKind.MULTIPLICATION, q=q, omega=omega, sigma=sigma)

    @classmethod
    def parse(cls, selection: str, grid: Grid | None = None, sigma: float | None = None) -> "SemigroupDescriptor":
        """Parse `translation`, `heat` or `multiplication:<q label>`."""
        name, _, q_label = selection.strip().partition(":")
        if name == SemigroupKind.TRANSLATION.value and not q_label:
            return cls.translation(1.0 if sigma is None else sigma)
        if name == SemigroupKind.HEAT.value and not q_label:
            return cls.heat(1.0 if sigma is None else sigma)
        if name == SemigroupKind.MULTIPLICATION.value:
            if not q_label:
                raise ArgumentError("multiplication needs a multiplier label, e.g. multiplication:const:-1")
            return cls.multiplication(get_function(q_label), grid, 0.0 if sigma is None else sigma)
        raise ArgumentError(f"Unknown semigroup '{selection}'. Use translation, heat or multiplication:<q>")

    @property
    def selection(self) -> str:
        if self.kind == SemigroupKind.MULTIPLICATION:
            return f"multiplication:{self.q.label}"  # type: ignore[union-attr]
        return self.kind.value

    @property
    def key(self) -> tuple:
        return (self.selection, self.omega, self.sigma)

    @property
    def effective_bound(self) -> float:
        """Growth bound omega - sigma of the shifted family."""
        return self.omega - self.sigma

    def growth_bound(self, shifted: bool = False) -> float:
        return self.effective_bound if shifted else self.omega

    def with_sigma(self, sigma: float) -> "SemigroupDescriptor":
        return replace(self, sigma=sigma)

    def to_record(self) -> dict:
        return {"semigroup": self.selection, "M": self.M, "omega": self.omega, "sigma": self.sigma}


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and node-count policy for the improper integrals over s.

    Args:
        panels: Composite Simpson panels; at least 2 * panels intervals are used
        tol: Target absolute tolerance of the truncated tail
        max_step: Largest step in s (or in the scaled kernel variable)
        max_intervals: Hard cap on intervals per quadrature
        kernel_max_nodes: Cap on tabulated heat-kernel nodes
    """

    panels: int = 256
    tol: float = 1e-6
    max_step: float = 0.1
    max_intervals: int = 4096
    kernel_max_nodes: int = 8193

    def __post_init__(self):
        if self.panels < 16:
            raise ArgumentError(f"panels must be >= 16, got {self.panels}")
        if not self.tol > 0.0:
            raise ArgumentError(f"tol must be positive, got {self.tol}")
        if not self.max_step > 0.0:
            raise ArgumentError(f"max_step must be positive, got {self.max_step}")
        if self.max_intervals < 2 * self.panels:
            raise ArgumentError(f"max_intervals must be >= 2 * panels, got {self.max_intervals}")
        if self.kernel_max_nodes < 3:
            raise ArgumentError(f"kernel_max_nodes must be >= 3, got {self.kernel_max_nodes}")

    @classmethod
    def from_config(cls, config: Config | None = None) -> "QuadratureSpec":
        values = (config or Config()).section("quadrature")
        return cls(
            panels=int(values["quad_panels"]),
            tol=float(values["quad_tol"]),
            max_step=float(values["quad_max_step"]),
            max_intervals=int(values["quad_max_intervals"]),
            kernel_max_nodes=int(values["kernel_max_nodes"]),
        )

    def tail_cutoff(self, bound: float, rate: float, tol: float | None = None) -> float:
        """s_max with bound * exp(-rate * s_max) / rate <= tol."""
        tol = self.tol if tol is None else tol
        if rate <= 0.0:
            raise DomainError(f"tail decay rate must be positive, got {rate!r}")
        floor = 1.0 / rate
        if bound <= 0.0:
            return floor
        return max(math.log(bound / (tol * rate)) / rate, floor)

    def intervals_for(self, length: float) -> int:
        """Even interval count for a Simpson rule over `length`."""
        n = max(2 * self.panels, math.ceil(length / self.max_step))
        if n > self.max_intervals:
            logger.warning(
                f"[Quadrature] {n} intervals needed over length {length:.4g}, clamped to {self.max_intervals}"
            )
            n = self.max_intervals
        return n + (n % 2)

    def to_record(self) -> dict:
        return {
            "panels": self.panels,
            "tol": self.tol,
            "max_step": self.max_step,
            "max_intervals": self.max_intervals,
            "kernel_max_nodes": self.kernel_max_nodes,
        }


def simpson_rule(a: float, b: float, intervals: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Simpson's rule on [a, b]."""
    intervals = max(2, intervals + (intervals % 2))
    nodes = np.linspace(a, b, intervals + 1)
    h = (b - a) / intervals
    weights = np.full(intervals + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    return nodes, weights * (h / 3.0)


def _scaled_hint(f: Function, factor: float) -> float | None:
    return None if f.bound_hint is None else f.bound_hint * factor


def apply(sg: SemigroupDescriptor, t: float, f: Function, shifted: bool = False) -> Function:
    """Return x -> (T(t)f)(x); T(0) is the identity."""
    if t < 0.0 or not math.isfinite(t):
        raise DomainError(f"t must be a finite nonnegative number, got {t!r}")
    if t == 0.0:
        return f

    damping = math.exp(-sg.sigma * t) if shifted else 1.0
    hint = _scaled_hint(f, sg.M * math.exp(sg.omega * t) * damping)
    label = f"{sg.selection}{'~' if shifted else ''}[{t!r}]({f.label})"
    frule = f.rule

    if sg.kind == SemigroupKind.TRANSLATION:
        return Function(lambda x: damping * frule(x + t), label, hint)

    if sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]
        return Function(lambda x: damping * np.exp(t * qrule(x)) * frule(x), label, hint)

    width = HEAT_WIDTH * math.sqrt(2.0 * t)
    step = HEAT_STEP * t ** (1.0 / 3.0)
    ys, w = simpson_rule(-width, width, max(HEAT_NODES - 1, math.ceil(2.0 * width / step)))
    coeffs = w * np.exp(-ys * ys / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    coeffs *= damping / coeffs.sum()

    def heat_rule(x: np.ndarray) -> np.ndarray:
        acc = np.zeros(np.shape(x))
        for y, c in zip(ys, coeffs, strict=True):
            acc += c * frule(x - y)
        return acc

    return Function(heat_rule, label, hint)


def generator_apply(sg: SemigroupDescriptor, f: Function, h: float = 1e-3, shifted: bool = False) -> Function:
    """Generator action: central difference, q*f, or second difference.

    Non-smooth f gives large stencil values; compare against h/2 to detect f outside D(A).
    """
    frule = f.rule
    label = f"A{'~' if shifted else ''}[{sg.selection},{h!r}]({f.label})"

    if sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]
        base = lambda x: qrule(x) * frule(x)  # noqa: E731
    elif not h > 0.0:
        raise ArgumentError(f"stencil width h must be positive, got {h!r}")
    elif sg.kind == SemigroupKind.TRANSLATION:
        base = lambda x: (frule(x + h) - frule(x - h)) / (2.0 * h)  # noqa: E731
    else:
        base = lambda x: (frule(x + h) - 2.0 * frule(x) + frule(x - h)) / (h * h)  # noqa: E731

    if not shifted or sg.sigma == 0.0:
        return Function(base, label)
    sigma = sg.sigma
    return Function(lambda x: base(x) - sigma * frule(x), label)


@dataclass(frozen=True)
class HeatMixture:
    """Tabulated kernel of sum_j w_j G_{s_j}: result = delta * f(x) + sum_i c_i f(x - y_i)."""

    ys: np.ndarray
    coeffs: np.ndarray
    delta: float


def heat_mixture(nodes: np.ndarray, weights: np.ndarray, quad: QuadratureSpec) -> HeatMixture:
    """Tabulate a Gaussian mixture kernel on a Simpson grid in y.

    Components narrower than HEAT_IDENTITY_STEPS y-steps act as the identity.
    """
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    positive = nodes > 0.0
    if not positive.any():
        return HeatMixture(np.zeros(0), np.zeros(0), float(weights.sum()))

    widths = np.sqrt(2.0 * nodes[positive])
    extent = HEAT_KERNEL_WIDTHS * float(widths.max())
    step = min(quad.max_step, float(widths.min()) / HEAT_KERNEL_RESOLUTION)
    count = math.ceil(2.0 * extent / step)
    count += count % 2
    if count + 1 > quad.kernel_max_nodes:
        count = quad.kernel_max_nodes - 1 - ((quad.kernel_max_nodes - 1) % 2)
        logger.debug(f"[Heat] kernel table capped at {count + 1} nodes")
    ys, yw = simpson_rule(-extent, extent, count)
    dy = ys[1] - ys[0]

    wide = widths >= HEAT_IDENTITY_STEPS * dy
    delta = float(weights[~positive].sum() + weights[positive][~wide].sum())
    kernel = np.zeros_like(ys)
    for s, w in zip(nodes[positive][wide], weights[positive][wide], strict=True):
        kernel += w * np.exp(-ys * ys / (4.0 * s)) / math.sqrt(4.0 * math.pi * s)
    coeffs = yw * kernel
    keep = np.abs(coeffs) > 1e-18 * max(float(np.abs(coeffs).sum()), 1e-300)
    logger.debug(f"[Heat] mixture of {int(wide.sum())} components on {keep.sum()} nodes, dy={dy:.3g}")
    return HeatMixture(ys[keep], coeffs[keep], delta)


def superpose(
    sg: SemigroupDescriptor,
    nodes: np.ndarray,
    weights: np.ndarray,
    f: Function,
    shifted: bool = False,
    quad: QuadratureSpec | None = None,
    label: str | None = None,
) -> Function:
    """Return x -> sum_j w_j (T(s_j)f)(x) for nodes s_j >= 0."""
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if nodes.shape != weights.shape:
        raise ArgumentError("superpose needs nodes and weights of equal shape")
    if np.any(nodes < 0.0):
        raise DomainError("superpose needs nonnegative nodes")
    if shifted and sg.sigma:
        weights = weights * np.exp(-sg.sigma * nodes)

    frule = f.rule
    mass = float(np.sum(np.abs(weights) * sg.M * np.exp(sg.omega * nodes)))
    hint = _scaled_hint(f, mass)
    label = label or f"sum[{sg.selection},{len(nodes)}]({f.label})"

    if sg.kind == SemigroupKind.TRANSLATION:

        def translation_rule(x: np.ndarray) -> np.ndarray:
            acc = np.zeros(np.shape(x))
            for s, w in zip(nodes, weights, strict=True):
                if w != 0.0:
                    acc += w * frule(x + s)
            return acc

        return Function(translation_rule, label, hint)

    if sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]

        def multiplication_rule(x: np.ndarray) -> np.ndarray:
            qx = qrule(x)
            acc = np.zeros(np.shape(x))
            for s, w in zip(nodes, weights, strict=True):
                acc += w * np.exp(s * qx)
            return acc * frule(x)

        return Function(multiplication_rule, label, hint)

    mixture = heat_mixture(nodes, weights, quad or QuadratureSpec.from_config())

    def heat_rule(x: np.ndarray) -> np.ndarray:
        acc = mixture.delta * frule(x) if mixture.delta else np.zeros(np.shape(x))
        for y, c in zip(mixture.ys, mixture.coeffs, strict=True):
            acc = acc + c * frule(x - y)
        return acc

    return Function(heat_rule, label, hint)


def orbit_integral(
    sg: SemigroupDescriptor,
    t: float,
    f: Function,
    panels: int | None = None,
    shifted: bool = False,
    quad: QuadratureSpec | None = None,
) -> Function:
    """Return x -> integral_0^t (T(s)f)(x) ds by composite Simpson with `panels` intervals."""
    if not t > 0.0:
        raise DomainError(f"orbit integral needs t > 0, got {t!r}")
    quad = quad or QuadratureSpec.from_config()
    panels = panels or quad.panels
    nodes, weights = simpson_rule(0.0, t, panels)
    return superpose(sg, nodes, weights, f, shifted, quad, label=f"orbit[{sg.selection},{t!r}]({f.label})")
