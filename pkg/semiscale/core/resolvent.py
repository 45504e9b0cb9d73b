"""
Laplace-transform resolvents R(lambda, A) f = integral_0^inf exp(-lambda s) T(s) f ds,
resolvent powers, Hille-Yosida probes and the Euler formula.

Closed forms are used where they exist (multiplication everywhere, the heat
resolvent kernel exp(-sqrt(mu)|y|) / (2 sqrt(mu))); the Laplace quadrature stays
available as a cross-check through method="laplace".
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .constants import ERLANG_TAIL, EULER_COMPACT_SET
from .exceptions import ArgumentError, DomainError, SpectralParameterError
from .funcspace import CompactSet, Function, Grid, compact_seminorm, default_grid, sample, sup_norm
from .semigroups import QuadratureSpec, SemigroupDescriptor, SemigroupKind, apply, simpson_rule, superpose

logger = logging.getLogger(__name__)

METHODS = ("auto", "laplace")


@dataclass(frozen=True)
class ResolventRequest:
    """Spectral parameter and quadrature policy for one resolvent evaluation."""

    lam: float
    quad: QuadratureSpec

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ArgumentError(f"lambda must be finite, got {self.lam!r}")


@dataclass(frozen=True)
class EulerError:
    m: int
    sup_error: float
    compact_error: float


def _bound(f: Function, grid: Grid | None = None) -> float:
    if f.bound_hint is not None:
        return f.bound_hint
    return sup_norm(f, grid or default_grid())


def _zero_like(label: str) -> Function:
    return Function(lambda x: np.zeros(np.shape(x)), label, 0.0)


def _check_lambda(sg: SemigroupDescriptor, lam: float, shifted: bool) -> float:
    """Validate lambda for the chosen family; return the raw-family parameter mu."""
    bound = sg.growth_bound(shifted)
    if not lam > bound:
        raise SpectralParameterError(lam, bound)
    return lam + sg.sigma if shifted else lam


def resolve(
    sg: SemigroupDescriptor,
    req: ResolventRequest,
    f: Function,
    shifted: bool = False,
    method: str = "auto",
    grid: Grid | None = None,
) -> Function:
    """Return R(lambda, A) f (or R(lambda, A - sigma) f when shifted).

    The Laplace tail is cut at s_max = ln(|f| / (tol (lambda - omega))) / (lambda - omega).
    """
    if method not in METHODS:
        raise ArgumentError(f"Unknown resolvent method '{method}', use one of {METHODS}")
    mu = _check_lambda(sg, req.lam, shifted)
    rate = mu - sg.omega
    label = f"R{'~' if shifted else ''}[{sg.selection},{req.lam!r}]({f.label})"
    bound = _bound(f, grid)
    if bound == 0.0:
        return _zero_like(label)
    frule = f.rule

    if method == "auto" and sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]
        return Function(lambda x: frule(x) / (mu - qrule(x)), label, sg.M * bound / rate)

    if method == "auto" and sg.kind == SemigroupKind.HEAT:
        root = math.sqrt(mu)
        cutoff = max(math.log(bound / (req.quad.tol * mu)), 1.0) if bound > req.quad.tol * mu else 1.0
        us, w = simpson_rule(0.0, cutoff, req.quad.intervals_for(cutoff))
        coeffs = 0.5 * w * np.exp(-us) / mu
        ys = us / root

        def heat_rule(x: np.ndarray) -> np.ndarray:
            acc = np.zeros(np.shape(x))
            for y, c in zip(ys, coeffs, strict=True):
                acc += c * (frule(x - y) + frule(x + y))
            return acc

        return Function(heat_rule, label, bound / mu)

    s_max = req.quad.tail_cutoff(sg.M * bound, rate)
    nodes, w = simpson_rule(0.0, s_max, req.quad.intervals_for(s_max))
    logger.debug(f"[Resolvent] {label}: s_max={s_max:.4g}, {len(nodes)} nodes")
    result = superpose(sg, nodes, w * np.exp(-mu * nodes), f, False, req.quad, label)
    return Function(result.rule, label, sg.M * bound / rate)


def resolvent_defect(
    sg: SemigroupDescriptor,
    lam: float,
    f: Function,
    quad: QuadratureSpec,
    shifted: bool = False,
    grid: Grid | None = None,
) -> Function:
    """Return lambda R(lambda) f - f = A R(lambda) f without forming lambda R f first.

    The tail tolerance is quad.tol / max(1, lambda) so that lambda^alpha times the
    defect keeps absolute accuracy for alpha <= 1.
    """
    mu = _check_lambda(sg, lam, shifted)
    rate = mu - sg.omega
    label = f"AR{'~' if shifted else ''}[{sg.selection},{lam!r}]({f.label})"
    bound = _bound(f, grid)
    if bound == 0.0:
        return _zero_like(label)
    tol = quad.tol / max(1.0, lam)
    frule = f.rule
    ratio = lam / mu

    if sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]
        return Function(lambda x: frule(x) * (lam - mu + qrule(x)) / (mu - qrule(x)), label)

    if sg.kind == SemigroupKind.HEAT:
        root = math.sqrt(mu)
        cutoff = max(math.log(max(2.0 * bound * ratio / tol, math.e)), 1.0)
        us, w = simpson_rule(0.0, cutoff, quad.intervals_for(cutoff))
        coeffs = 0.5 * ratio * w * np.exp(-us)
        ys = us / root
        mass = ratio * (1.0 - math.exp(-cutoff))

        def heat_rule(x: np.ndarray) -> np.ndarray:
            fx = frule(x)
            acc = np.zeros(np.shape(x))
            for y, c in zip(ys, coeffs, strict=True):
                if y > 0.0:
                    acc += c * (frule(x - y) + frule(x + y) - 2.0 * fx)
            return acc + (mass - 1.0) * fx

        return Function(heat_rule, label)

    s_max = quad.tail_cutoff(2.0 * sg.M * bound * lam, rate, tol)
    nodes, w = simpson_rule(0.0, s_max, quad.intervals_for(s_max))
    weights = lam * w * np.exp(-mu * nodes)
    spread = superpose(sg, nodes, weights, f, False, quad)
    srule = spread.rule
    total = float(weights.sum())
    mass = ratio * (1.0 - math.exp(-mu * s_max))
    return Function(lambda x: (srule(x) - total * frule(x)) + (mass - 1.0) * frule(x), label)


def _erlang_nodes(
    k: int, mu: float, rate: float, log_scale: float, quad: QuadratureSpec, bound: float
) -> tuple[np.ndarray, np.ndarray]:
    """Simpson nodes and weights for exp(log_scale) * mu^k s^(k-1) exp(-mu s) / (k-1)! on its essential support."""
    eps = min(max(quad.tol / max(bound, 1e-300), ERLANG_TAIL), 0.5)
    dist = stats.gamma(k, scale=1.0 / rate)
    hi = float(dist.isf(eps / 2.0))
    lo = float(dist.ppf(eps / 2.0)) if k > 1 else 0.0
    nodes, w = simpson_rule(lo, hi, quad.intervals_for(hi - lo))
    with np.errstate(divide="ignore"):
        log_density = stats.gamma.logpdf(nodes, k, scale=1.0 / mu)
    return nodes, w * np.exp(log_density + log_scale)


def resolve_power(
    sg: SemigroupDescriptor,
    lam: float,
    k: int,
    f: Function,
    quad: QuadratureSpec,
    shifted: bool = False,
    method: str = "erlang",
    grid: Grid | None = None,
) -> Function:
    """Return R(lambda)^k f.

    method="erlang" integrates once against s^(k-1) exp(-lambda s) / (k-1)!, which equals the
    k-fold composition; method="compose" applies resolve k times, materializing each level on `grid`.
    """
    if k < 1:
        raise ArgumentError(f"power k must be a positive integer, got {k}")
    if method not in ("erlang", "compose"):
        raise ArgumentError(f"Unknown power method '{method}', use erlang or compose")
    mu = _check_lambda(sg, lam, shifted)
    if k == 1:
        return resolve(sg, ResolventRequest(lam, quad), f, shifted, grid=grid)

    rate = mu - sg.omega
    label = f"R{'~' if shifted else ''}^{k}[{sg.selection},{lam!r}]({f.label})"
    bound = _bound(f, grid)
    if bound == 0.0:
        return _zero_like(label)
    hint = sg.M * bound / rate**k

    if sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]
        frule = f.rule
        return Function(lambda x: frule(x) / (mu - qrule(x)) ** k, label, hint)

    if method == "compose":
        grid = grid or default_grid()
        level = f
        req = ResolventRequest(lam, quad)
        for i in range(k):
            level = resolve(sg, req, level, shifted, grid=grid)
            level = Function.from_samples(grid.points, sample(level, grid), f"{label}#{i + 1}")
        return Function(level.rule, label, hint)

    nodes, weights = _erlang_nodes(k, mu, rate, -k * math.log(mu), quad, hint)
    logger.debug(f"[Resolvent] {label}: Erlang support [{nodes[0]:.4g}, {nodes[-1]:.4g}], {len(nodes)} nodes")
    result = superpose(sg, nodes, weights, f, False, quad, label)
    return Function(result.rule, label, hint)


def hy_probe(
    sg: SemigroupDescriptor,
    lam: float,
    k: int,
    probes: list[Function],
    quad: QuadratureSpec | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
) -> float:
    """Lower bound for |R(lambda)^k|: max over probes of |R^k f| / |f|; zero probes are skipped."""
    if not probes:
        raise ArgumentError("hy_probe needs at least one probe function")
    quad = quad or QuadratureSpec.from_config()
    grid = grid or default_grid()
    best: float | None = None
    for f in probes:
        norm = sup_norm(f, grid)
        if norm == 0.0:
            logger.debug(f"[Resolvent] skipping zero probe {f.label}")
            continue
        ratio = sup_norm(resolve_power(sg, lam, k, f, quad, shifted, grid=grid), grid) / norm
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise ArgumentError("hy_probe needs at least one probe with nonzero norm")
    return best


def minimal_growth_bound(
    sg: SemigroupDescriptor,
    lambdas: list[float],
    probes: list[Function],
    quad: QuadratureSpec | None = None,
    grid: Grid | None = None,
    shifted: bool = False,
) -> float:
    """Lower bound for M in |lambda R(lambda)| <= M along the probed lambdas."""
    if not lambdas:
        raise ArgumentError("minimal_growth_bound needs at least one lambda")
    return max(lam * hy_probe(sg, lam, 1, probes, quad, grid, shifted) for lam in lambdas)


def euler_approx(
    sg: SemigroupDescriptor,
    t: float,
    m: int,
    f: Function,
    quad: QuadratureSpec | None = None,
    shifted: bool = False,
    method: str = "erlang",
    grid: Grid | None = None,
) -> Function:
    """Return ((m/t) R(m/t))^m f.

    method="erlang" averages T(S)f over S ~ Gamma(m, t/m); method="iterate" applies
    (m/t) R(m/t) m times, materializing each level on `grid` with linear interpolation.
    """
    if not t > 0.0:
        raise DomainError(f"Euler formula needs t > 0, got {t!r}")
    if m < 1:
        raise ArgumentError(f"m must be a positive integer, got {m}")
    if method not in ("erlang", "iterate"):
        raise ArgumentError(f"Unknown Euler method '{method}', use erlang or iterate")
    quad = quad or QuadratureSpec.from_config()
    lam = m / t
    mu = _check_lambda(sg, lam, shifted)
    rate = mu - sg.omega
    label = f"euler[{sg.selection},{t!r},{m}]({f.label})"
    bound = _bound(f, grid)
    if bound == 0.0:
        return _zero_like(label)
    hint = sg.M * bound * (lam / rate) ** m

    if sg.kind == SemigroupKind.MULTIPLICATION:
        qrule = sg.q.rule  # type: ignore[union-attr]
        frule = f.rule
        return Function(lambda x: (lam / (mu - qrule(x))) ** m * frule(x), label, hint)

    if method == "iterate":
        grid = grid or default_grid()
        req = ResolventRequest(lam, quad)
        level = f
        for i in range(m):
            level = resolve(sg, req, level, shifted, grid=grid)
            level = Function.from_samples(grid.points, lam * sample(level, grid), f"{label}#{i + 1}")
        return Function(level.rule, label, hint)

    nodes, weights = _erlang_nodes(m, mu, rate, m * math.log(lam / mu), quad, hint)
    result = superpose(sg, nodes, weights, f, False, quad, label)
    return Function(result.rule, label, hint)


def euler_errors(
    sg: SemigroupDescriptor,
    t: float,
    ms: list[int],
    f: Function,
    quad: QuadratureSpec | None = None,
    grid: Grid | None = None,
    K: CompactSet | None = None,
    shifted: bool = False,
    method: str = "erlang",
) -> list[EulerError]:
    """Sup-norm and p_K errors of the Euler approximants against T(t)f."""
    grid = grid or default_grid()
    K = K or CompactSet(*EULER_COMPACT_SET)
    exact = apply(sg, t, f, shifted)
    exact_values = sample(exact, grid)
    errors = []
    for m in ms:
        approx = euler_approx(sg, t, m, f, quad, shifted, method, grid)
        sup_error = float(np.max(np.abs(sample(approx, grid) - exact_values)))
        compact_error = compact_seminorm(approx - exact, K)
        logger.debug(f"[Resolvent] Euler m={m}: sup error {sup_error:.3e}, p_K error {compact_error:.3e}")
        errors.append(EulerError(m, sup_error, compact_error))
    return errors
