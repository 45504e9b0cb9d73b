"""
Batch experiment runner.

An experiment is a JSON config naming one semigroup, a list of library functions,
a list of tests and their parameters. Every (function, test, alpha) cell is run,
raw sweeps go to one CSV per test and verdicts to one JSON report.
"""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import orjson
from scipy import stats

from ..config import Config
from ..utils.sweep_cache import SweepCache
from .exceptions import (
    ArgumentError,
    ChainConsistencyError,
    ConfigError,
    DomainError,
    NumericalFailure,
)
from .extrapolation import embed, favard0_norm
from .funcspace import CompactSet, Function, Grid, default_grid
from .library import get_function
from .resolvent import euler_errors
from .scales import (
    ProbeSchedule,
    bicont_holder,
    classify_chain,
    favard_res,
    favard_sg,
    holder_exponent,
    holder_quotients,
    interpolation_norm,
    little_holder,
)
from .semigroups import QuadratureSpec, SemigroupDescriptor, SemigroupKind

logger = logging.getLogger(__name__)

TESTS = (
    "favard_sg",
    "favard_res",
    "little_holder",
    "bicont_holder",
    "exponent",
    "interpolation",
    "euler",
    "embed",
    "classify",
)
# Tests taking alpha, and whether alpha = 1 is allowed
ALPHA_TESTS = {
    "favard_sg": True,
    "favard_res": True,
    "little_holder": False,
    "bicont_holder": False,
    "interpolation": True,
    "classify": False,
}
CSV_COLUMNS = ("t_or_lambda", "quotient", "function", "semigroup", "alpha", "test")
EULER_SLACK = 1.1


@dataclass(frozen=True)
class SweepRow:
    param: float
    quotient: float
    function: str
    semigroup: str
    alpha: float | None
    test: str


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment.

    Args:
        sg: Semigroup descriptor, with sigma applied
        functions: Library labels, in output order
        tests: Test names from TESTS
        alpha: Orders used by the tests in ALPHA_TESTS
    """

    sg: SemigroupDescriptor
    functions: tuple[str, ...]
    tests: tuple[str, ...]
    alpha: tuple[float, ...] = (0.5,)
    schedule: ProbeSchedule = field(default_factory=ProbeSchedule)
    grid: Grid = field(default_factory=default_grid)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    compact_sets: tuple[CompactSet, ...] = ()
    p: tuple[float, ...] = (2.0, math.inf)
    euler_t: float = 1.0
    euler_m: tuple[int, ...] = (4, 16, 64, 256)
    output: str = "semiscale"

    @classmethod
    def from_file(cls, path: str | Path, config: Config | None = None) -> "ExperimentConfig":
        try:
            data = orjson.loads(Path(path).read_bytes())
        except OSError as e:
            raise ConfigError("config", f"cannot read {path}: {e}") from e
        except orjson.JSONDecodeError as e:
            raise ConfigError("config", f"invalid JSON in {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
        return cls.from_dict(data, config)

    def alphas_for(self, test: str) -> tuple[float | None, ...]:
        """Orders run by `test`; tests on the open interval (0, 1) leave out alpha = 1."""
        if test not in ALPHA_TESTS:
            return (None,)
        if ALPHA_TESTS[test]:
            return self.alpha
        return tuple(a for a in self.alpha if a < 1.0)

    @classmethod
    def from_dict(cls, data: dict[str, Any], config: Config | None = None) -> "ExperimentConfig":
        """Validate a parsed config; every error names the offending field."""
        config = config or Config()
        unknown = sorted(set(data) - _FIELDS)
        if unknown:
            raise ConfigError(unknown[0], "unknown field")

        grid = _build("grid", data.get("grid"), {"a": "grid_a", "b": "grid_b", "n": "grid_n"}, Grid, config)
        schedule = _build(
            "schedule", data.get("schedule"), {k: k for k in _SCHEDULE_KEYS}, ProbeSchedule, config
        )
        quadrature = _build("quadrature", data.get("quadrature"), _QUADRATURE_KEYS, QuadratureSpec, config)

        selection = data.get("semigroup")
        if not isinstance(selection, str):
            raise ConfigError("semigroup", "must be a selection string such as 'translation'")
        sigma = data.get("sigma")
        if sigma is not None and not _is_number(sigma):
            raise ConfigError("sigma", f"must be a number, got {sigma!r}")
        try:
            sg = SemigroupDescriptor.parse(selection, grid, None if sigma is None else float(sigma))
        except (ArgumentError, DomainError) as e:
            raise ConfigError("semigroup", str(e)) from e

        functions = _string_list("functions", data.get("functions"))
        for i, label in enumerate(functions):
            try:
                get_function(label)
            except ArgumentError as e:
                raise ConfigError(f"functions[{i}]", str(e)) from e

        tests = _string_list("tests", data.get("tests"))
        for i, test in enumerate(tests):
            if test not in TESTS:
                raise ConfigError(f"tests[{i}]", f"unknown test '{test}', use one of {', '.join(TESTS)}")
            if test == "classify" and sg.kind != SemigroupKind.TRANSLATION:
                raise ConfigError(f"tests[{i}]", "classify runs on the translation semigroup only")
            if test == "embed" and not sg.effective_bound < 0.0:
                raise ConfigError("sigma", f"embed needs sigma > {sg.omega!r} for {sg.selection}")

        alpha = _number_list("alpha", data.get("alpha", [0.5]))
        for i, a in enumerate(alpha):
            if not 0.0 < a <= 1.0:
                raise ConfigError(f"alpha[{i}]", f"must lie in (0, 1], got {a}")
        open_tests = sorted({t for t in tests if ALPHA_TESTS.get(t) is False})
        if open_tests and 1.0 in alpha:
            if all(a == 1.0 for a in alpha):
                raise ConfigError("alpha", f"{', '.join(open_tests)} need an alpha in (0, 1)")
            logger.info(f"[Runner] alpha=1 skipped for {', '.join(open_tests)}")

        p_values = []
        for i, p in enumerate(data.get("p", [2, "inf"])):
            value = math.inf if p == "inf" else p
            if not _is_number(value) or not value >= 1.0:
                raise ConfigError(f"p[{i}]", f"must be a number >= 1 or \"inf\", got {p!r}")
            p_values.append(float(value))

        compact_sets = []
        for i, pair in enumerate(data.get("compact_sets", [])):
            if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(v) for v in pair)):
                raise ConfigError(f"compact_sets[{i}]", f"must be a pair [a, b], got {pair!r}")
            try:
                K = CompactSet(float(pair[0]), float(pair[1]))
                grid.mask_for(K)
            except ArgumentError as e:
                raise ConfigError(f"compact_sets[{i}]", str(e)) from e
            compact_sets.append(K)

        euler = data.get("euler", {})
        if not isinstance(euler, dict) or set(euler) - {"t", "m"}:
            raise ConfigError("euler", "must be an object with keys t and m")
        euler_t = euler.get("t", 1.0)
        if not _is_number(euler_t) or not euler_t > 0.0:
            raise ConfigError("euler.t", f"must be positive, got {euler_t!r}")
        euler_m = euler.get("m", [4, 16, 64, 256])
        if not (isinstance(euler_m, list) and euler_m and all(isinstance(m, int) and m >= 1 for m in euler_m)):
            raise ConfigError("euler.m", f"must be a nonempty list of positive integers, got {euler_m!r}")

        output = data.get("output", "semiscale")
        if not isinstance(output, str) or not output or "/" in output:
            raise ConfigError("output", f"must be a plain file prefix, got {output!r}")

        return cls(
            sg=sg,
            functions=tuple(functions),
            tests=tuple(tests),
            alpha=tuple(alpha),
            schedule=schedule,
            grid=grid,
            quadrature=quadrature,
            compact_sets=tuple(compact_sets),
            p=tuple(p_values),
            euler_t=float(euler_t),
            euler_m=tuple(euler_m),
            output=output,
        )


_SCHEDULE_KEYS = ("t_min", "t_max", "t_points", "lambda_min", "lambda_max", "lambda_points")
_QUADRATURE_KEYS = {
    "panels": "quad_panels",
    "tol": "quad_tol",
    "max_step": "quad_max_step",
    "max_intervals": "quad_max_intervals",
    "kernel_max_nodes": "kernel_max_nodes",
}
_FIELDS = {
    "semigroup",
    "functions",
    "tests",
    "alpha",
    "schedule",
    "grid",
    "quadrature",
    "sigma",
    "compact_sets",
    "p",
    "euler",
    "output",
}


def _is_number(value: Any) -> bool:
    return isinstance(value, int | float) and not isinstance(value, bool)


def _string_list(name: str, value: Any) -> list[str]:
    if not isinstance(value, list) or not value:
        raise ConfigError(name, "must be a nonempty list")
    for i, item in enumerate(value):
        if not isinstance(item, str):
            raise ConfigError(f"{name}[{i}]", f"must be a string, got {item!r}")
    return value


def _number_list(name: str, value: Any) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ConfigError(name, "must be a nonempty list")
    for i, item in enumerate(value):
        if not _is_number(item):
            raise ConfigError(f"{name}[{i}]", f"must be a number, got {item!r}")
    return [float(v) for v in value]


def _build(name: str, overrides: Any, keys: dict[str, str], factory: Any, config: Config) -> Any:
    """Build a grid-like value from config defaults plus the overrides in the experiment."""
    overrides = overrides or {}
    if not isinstance(overrides, dict):
        raise ConfigError(name, "must be an object")
    unknown = sorted(set(overrides) - set(keys))
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}", "unknown key")
    values = {}
    for key, config_key in keys.items():
        default = Config.DEFAULTS[config_key]
        value = overrides.get(key, config.get(config_key))
        if not _is_number(value) or (isinstance(default, int) and not isinstance(value, int)):
            raise ConfigError(f"{name}.{key}", f"must be {'an integer' if isinstance(default, int) else 'a number'}")
        values[key] = value
    try:
        return factory(**values)
    except ArgumentError as e:
        raise ConfigError(name, str(e)) from e


@dataclass
class RunResult:
    """Rows per test, verdict records and chain blocks of one run."""

    config: ExperimentConfig
    rows: dict[str, list[SweepRow]] = field(default_factory=dict)
    records: list[dict[str, Any]] = field(default_factory=list)
    chains: list[dict[str, Any]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def report(self) -> dict[str, Any]:
        cfg = self.config
        report: dict[str, Any] = {
            "semigroup": cfg.sg.selection,
            "sigma": cfg.sg.sigma,
            "grid": cfg.grid.to_record(),
            "schedule": cfg.schedule.to_record(),
            "quadrature": cfg.quadrature.to_record(),
            "records": sorted(self.records, key=_record_order),
        }
        if "classify" in cfg.tests:
            report["chain"] = self.chains
        return report


def _record_order(record: dict[str, Any]) -> tuple:
    alpha = record.get("alpha")
    p = record.get("p")
    return (
        record["function"],
        record["test"],
        -1.0 if alpha is None else alpha,
        -1.0 if p is None else (1e308 if p == "inf" else p),
    )


def _finite(value: float | None) -> float | None:
    """JSON-safe float: infinities and NaN become None."""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


class ExperimentRunner:
    """Runs every cell of an ExperimentConfig, one worker per function.

    Each function gets its own SweepCache so the difference profile is computed once
    and shared by all t-sweep tests of that function.
    """

    def __init__(self, config: ExperimentConfig, workers: int | None = None):
        self.config = config
        self.workers = workers or int(Config().get("workers"))

    def run(self) -> RunResult:
        cfg = self.config
        logger.info(
            f"[Runner] {cfg.sg.selection}: {len(cfg.functions)} functions x {len(cfg.tests)} tests, "
            f"{self.workers} workers"
        )
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            parts = list(pool.map(self._run_function, cfg.functions))

        result = RunResult(cfg, {test: [] for test in cfg.tests})
        for part in parts:
            for test in cfg.tests:
                result.rows[test].extend(part.rows.get(test, []))
            result.records.extend(part.records)
            result.chains.extend(part.chains)
            result.failures.extend(part.failures)
        return result

    def _run_function(self, label: str) -> RunResult:
        cfg = self.config
        f = get_function(label)
        part = RunResult(cfg, {test: [] for test in cfg.tests})
        cache = SweepCache()
        for test in cfg.tests:
            for alpha in cfg.alphas_for(test):
                handler = getattr(self, f"_cell_{test}")
                handler(part, f, alpha, cache)
        logger.debug(f"[Runner] {label} done, cache {cache.get_stats()}")
        return part

    def _record(self, f: Function, test: str, alpha: float | None, **fields: Any) -> dict[str, Any]:
        cfg = self.config
        record = {
            "function": f.label,
            "semigroup": cfg.sg.selection,
            "alpha": alpha,
            "test": test,
            "grids": {"grid": cfg.grid.to_record(), "schedule": cfg.schedule.to_record()},
        }
        record.update(fields)
        for key in ("value", "slope"):
            if key in record:
                record[key] = _finite(record[key])
        logger.info(
            f"[Runner] {f.label} {test}{'' if alpha is None else f' alpha={alpha:g}'}: "
            f"{record.get('verdict')} ({record.get('value')})"
        )
        return record

    def _rows(
        self,
        f: Function,
        test: str,
        alpha: float | None,
        params: np.ndarray,
        values: np.ndarray,
        label: str | None = None,
    ) -> list[SweepRow]:
        if not np.all(np.isfinite(values)):
            raise NumericalFailure(f"{test} sweep of {f.label} produced non-finite values")
        return [
            SweepRow(float(x), float(y), f.label, self.config.sg.selection, alpha, label or test)
            for x, y in zip(params, values, strict=True)
        ]

    def _cell_favard_sg(self, part: RunResult, f: Function, alpha: float, cache: SweepCache) -> None:
        cfg = self.config
        est = favard_sg(cfg.sg, f, alpha, cfg.schedule, cfg.grid, cache=cache)
        part.rows["favard_sg"] += self._rows(f, "favard_sg", alpha, est.params, est.quotients)
        part.records.append(self._record(f, "favard_sg", alpha, **est.to_record()))

    def _cell_favard_res(self, part: RunResult, f: Function, alpha: float, cache: SweepCache) -> None:
        cfg = self.config
        est = favard_res(cfg.sg, f, alpha, cfg.schedule, cfg.grid, cfg.quadrature, cache=cache)
        part.rows["favard_res"] += self._rows(f, "favard_res", alpha, est.params, est.quotients)
        part.records.append(self._record(f, "favard_res", alpha, **est.to_record()))

    def _cell_little_holder(self, part: RunResult, f: Function, alpha: float, cache: SweepCache) -> None:
        cfg = self.config
        res = little_holder(cfg.sg, f, alpha, cfg.schedule, cfg.grid, cache=cache)
        part.rows["little_holder"] += self._rows(f, "little_holder", alpha, res.params, res.quotients)
        part.records.append(self._record(f, "little_holder", alpha, **res.to_record()))

    def _cell_bicont_holder(self, part: RunResult, f: Function, alpha: float, cache: SweepCache) -> None:
        cfg = self.config
        Ks = list(cfg.compact_sets) or None
        res = bicont_holder(cfg.sg, f, alpha, Ks, cfg.schedule, cfg.grid, cache=cache)
        for diag in res.per_set:
            part.rows["bicont_holder"] += self._rows(
                f, "bicont_holder", alpha, res.params, diag.quotients, f"bicont_holder@{diag.K}"
            )
        part.records.append(self._record(f, "bicont_holder", alpha, **res.to_record()))

    def _cell_exponent(self, part: RunResult, f: Function, alpha: None, cache: SweepCache) -> None:
        cfg = self.config
        est = holder_exponent(cfg.sg, f, cfg.schedule, cfg.grid, cache=cache)
        part.rows["exponent"] += self._rows(f, "exponent", None, est.params, est.differences)
        verdict = "fixed_point" if est.fixed_point else "estimated"
        part.records.append(self._record(f, "exponent", None, value=est.value, slope=est.raw_slope, verdict=verdict))

    def _cell_interpolation(self, part: RunResult, f: Function, alpha: float, cache: SweepCache) -> None:
        cfg = self.config
        t, psi = holder_quotients(cfg.sg, f, alpha, cfg.schedule, cfg.grid, cache=cache)
        part.rows["interpolation"] += self._rows(f, "interpolation", alpha, t, psi)
        for p in cfg.p:
            value = interpolation_norm(cfg.sg, f, alpha, p, cfg.schedule, cfg.grid, cache=cache)
            part.records.append(
                self._record(
                    f,
                    "interpolation",
                    alpha,
                    p="inf" if math.isinf(p) else p,
                    value=value,
                    verdict="finite" if math.isfinite(value) else "diverging",
                )
            )

    def _cell_euler(self, part: RunResult, f: Function, alpha: None, cache: SweepCache) -> None:
        cfg = self.config
        errors = euler_errors(cfg.sg, cfg.euler_t, list(cfg.euler_m), f, cfg.quadrature, cfg.grid)
        ms = np.array([e.m for e in errors], dtype=float)
        sup_errors = np.array([e.sup_error for e in errors])
        part.rows["euler"] += self._rows(f, "euler", None, ms, sup_errors)
        keep = sup_errors > 0.0
        slope = float(stats.linregress(np.log(ms[keep]), np.log(sup_errors[keep])).slope) if keep.sum() >= 2 else None
        monotone = all(b <= EULER_SLACK * a for a, b in zip(sup_errors, sup_errors[1:], strict=False))
        part.records.append(
            self._record(
                f,
                "euler",
                None,
                value=float(sup_errors[-1]),
                slope=slope,
                verdict="converging" if monotone else "not_converging",
                t=cfg.euler_t,
                errors=[{"m": e.m, "sup_error": e.sup_error, "compact_error": e.compact_error} for e in errors],
            )
        )

    def _cell_embed(self, part: RunResult, f: Function, alpha: None, cache: SweepCache) -> None:
        cfg = self.config
        vector = embed(cfg.sg, f, cfg.quadrature)
        est = favard0_norm(cfg.sg, f, cfg.schedule, cfg.quadrature, cfg.grid)
        part.rows["embed"] += self._rows(f, "embed", None, est.params, est.quotients)
        part.records.append(
            self._record(
                f,
                "embed",
                None,
                value=vector.norm(cfg.grid),
                slope=est.slope,
                verdict=est.verdict.value,
                favard0=est.value,
                in_lower_space=vector.in_lower_space(cfg.schedule, cfg.grid),
            )
        )

    def _cell_classify(self, part: RunResult, f: Function, alpha: float, cache: SweepCache) -> None:
        cfg = self.config
        Ks = list(cfg.compact_sets) or None
        try:
            chain = classify_chain(f, alpha, cfg.schedule, cfg.grid, Ks, cache, cfg.sg).to_record()
        except ChainConsistencyError as e:
            logger.error(f"[Runner] {e}")
            part.failures.append(str(e))
            chain = e.diagnostics
        est = favard_sg(cfg.sg, f, alpha, cfg.schedule, cfg.grid, cache=cache)
        part.rows["classify"] += self._rows(f, "classify", alpha, est.params, est.quotients)
        part.chains.append({"function": f.label, **chain})
        verdict = "consistent" if chain.get("consistent") else "inconsistent"
        part.records.append(
            self._record(f, "classify", alpha, value=None, slope=None, verdict=verdict, verdicts=chain.get("verdicts"))
        )


def emit_csv(rows: list[SweepRow], path: str | Path) -> Path:
    """Write one sweep as CSV; floats are written at full precision."""
    if not rows:
        raise ArgumentError(f"refusing to write an empty sweep to {path}")
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    "t_or_lambda": repr(row.param),
                    "quotient": repr(row.quotient),
                    "function": row.function,
                    "semigroup": row.semigroup,
                    "alpha": "" if row.alpha is None else repr(row.alpha),
                    "test": row.test,
                }
            )
    return path


def emit_report(report: dict[str, Any], path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(orjson.dumps(report, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS) + b"\n")
    return path


def emit_gnuplot(result: RunResult, out_dir: Path) -> Path:
    """Companion gnuplot script: one log-log panel per (test, function)."""
    cfg = result.config
    lines = ["set datafile separator ','", "set logscale xy", "set key left top", ""]
    for test in cfg.tests:
        if not result.rows.get(test):
            continue
        data = f"{cfg.output}_{test}.csv"
        xlabel = "m" if test == "euler" else ("lambda" if test == "favard_res" else "t")
        lines.append(f"set title '{test} ({cfg.sg.selection})'")
        lines.append(f"set xlabel '{xlabel}'")
        plots = [
            f"'{data}' using 1:(strcol(3) eq '{label}' ? $2 : 1/0) with linespoints title '{label}'"
            for label in cfg.functions
        ]
        lines.append("plot " + ", \\\n     ".join(plots))
        lines.append("pause -1")
        lines.append("")
    path = out_dir / f"{cfg.output}.gp"
    path.write_text("\n".join(lines), encoding="utf-8")
    return path


def run_experiment(
    config: ExperimentConfig, out_dir: str | Path = ".", gnuplot: bool = False, workers: int | None = None
) -> tuple[RunResult, list[Path]]:
    """Run a config and write its CSVs, report and optional gnuplot script."""
    result = ExperimentRunner(config, workers).run()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for test in config.tests:
        rows = result.rows.get(test, [])
        if rows:
            written.append(emit_csv(rows, out / f"{config.output}_{test}.csv"))
        else:
            logger.warning(f"[Runner] no rows for {test}, CSV skipped")
    written.append(emit_report(result.report(), out / f"{config.output}_report.json"))
    if gnuplot:
        written.append(emit_gnuplot(result, out))
    logger.info(f"[Runner] wrote {len(written)} files to {out}")
    return result, written
