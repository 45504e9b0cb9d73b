"""
Built-in function library.

Functions are named by labels `name` or `name:param` so experiment configs can
refer to them, e.g. `holder_bump:0.5` or `const:-1`.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .exceptions import ArgumentError
from .funcspace import Function

logger = logging.getLogger(__name__)

# Half-width of the bump cutoff used by chirp_train
CHIRP_SUPPORT = 0.4


@dataclass(frozen=True)
class LibraryEntry:
    name: str
    factory: Callable[[float | None], Function]
    param: str | None
    description: str


def format_param(p: float) -> str:
    """Short label text for a parameter, exact enough to parse back to the same float."""
    short = f"{p:g}"
    return short if float(short) == p else repr(float(p))


def zero(_: float | None = None) -> Function:
    return Function(lambda x: np.zeros(np.shape(x)), "zero", 0.0)


def const(c: float | None) -> Function:
    if c is None:
        raise ArgumentError("const needs a value, e.g. const:2")
    return Function.constant(c, f"const:{format_param(c)}")


def sine(_: float | None = None) -> Function:
    return Function(np.sin, "sin", 1.0)


def cosine(_: float | None = None) -> Function:
    return Function(np.cos, "cos", 1.0)


def rational(beta: float | None) -> Function:
    beta = 1.0 if beta is None else beta
    if beta < 0:
        raise ArgumentError(f"rational needs beta >= 0, got {beta}")
    return Function(lambda x: (1.0 + x * x) ** (-beta), f"rational:{format_param(beta)}", 1.0)


def gaussian(_: float | None = None) -> Function:
    return Function(lambda x: np.exp(-x * x), "gaussian", 1.0)


def holder_bump(beta: float | None) -> Function:
    if beta is None or not 0.0 < beta <= 1.0:
        raise ArgumentError(f"holder_bump needs beta in (0, 1], got {beta}")
    return Function(lambda x: np.abs(np.sin(x)) ** beta, f"holder_bump:{format_param(beta)}", 1.0)


def potential(gamma: float | None) -> Function:
    """Strictly negative potential q(x) = -(1 + x^2)^gamma for multiplication semigroups."""
    gamma = 1.0 if gamma is None else gamma
    if gamma < 0:
        raise ArgumentError(f"potential needs gamma >= 0, got {gamma}")
    hint = 1.0 if gamma == 0 else None
    return Function(lambda x: -((1.0 + x * x) ** gamma), f"potential:{format_param(gamma)}", hint)


def chirp_cutoff(u: np.ndarray) -> np.ndarray:
    """C^1 cutoff (1 - (u/0.4)^2)^2 supported in [-0.4, 0.4]."""
    s = np.clip(1.0 - (u / CHIRP_SUPPORT) ** 2, 0.0, None)
    return s * s


def chirp_train(alpha: float | None) -> Function:
    """Bumps n^(-2 alpha) sin(n^2 (x - n)) cut off around each integer n >= 2.

    Hölder-alpha uniformly, little-Hölder on every compact set, but not
    little-Hölder globally: the bump at n reaches quotient ~1 at t ~ n^-2.
    """
    if alpha is None or not 0.0 < alpha < 1.0:
        raise ArgumentError(f"chirp_train needs alpha in (0, 1), got {alpha}")

    def rule(x: np.ndarray) -> np.ndarray:
        n = np.rint(x)
        u = x - n
        active = (n >= 2) & (np.abs(u) < CHIRP_SUPPORT)
        nn = np.where(active, n, 2.0)
        values = chirp_cutoff(u) * nn ** (-2.0 * alpha) * np.sin(nn * nn * u)
        return np.where(active, values, 0.0)

    return Function(rule, f"chirp_train:{format_param(alpha)}", 2.0 ** (-2.0 * alpha))


LIBRARY: dict[str, LibraryEntry] = {
    entry.name: entry
    for entry in (
        LibraryEntry("zero", zero, None, "identically zero"),
        LibraryEntry("const", const, "c", "constant c"),
        LibraryEntry("sin", sine, None, "sin x"),
        LibraryEntry("cos", cosine, None, "cos x"),
        LibraryEntry("rational", rational, "beta", "(1 + x^2)^-beta"),
        LibraryEntry("gaussian", gaussian, None, "exp(-x^2)"),
        LibraryEntry("holder_bump", holder_bump, "beta", "|sin x|^beta, exactly C^beta at the kinks"),
        LibraryEntry("chirp_train", chirp_train, "alpha", "chirp bumps at n >= 2, locally but not globally little-Hölder"),
        LibraryEntry("potential", potential, "gamma", "-(1 + x^2)^gamma, a negative multiplier q"),
    )
}


def parse_label(label: str) -> tuple[str, float | None]:
    """Split `name` or `name:param` into its parts."""
    name, sep, raw = label.strip().partition(":")
    if not name:
        raise ArgumentError(f"Empty function label '{label}'")
    if not sep:
        return name, None
    try:
        return name, float(raw)
    except ValueError as e:
        raise ArgumentError(f"Invalid parameter '{raw}' in function label '{label}'") from e


def get_function(label: str) -> Function:
    """Build the library function named by `label`."""
    name, param = parse_label(label)
    entry = LIBRARY.get(name)
    if entry is None:
        raise ArgumentError(f"Unknown function '{name}'. Known: {', '.join(sorted(LIBRARY))}")
    if entry.param is None and param is not None:
        raise ArgumentError(f"Function '{name}' takes no parameter")
    return entry.factory(param)
