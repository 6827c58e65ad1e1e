"""Command-line entry point, run-configuration parsing, and result files.

The CLI wraps the experiment drivers and the core solvers behind ten
subcommands.  A run is described by a :class:`RunConfig` built from three
layers, later layers overriding earlier ones:

1. built-in defaults,
2. an optional key-value config file (``--config``),
3. command-line flags.

Results are persisted as a CSV table (header row, RFC-style quoting) with a
JSON sidecar carrying the full record — schema version, timestamp, input
echo, rows, and solver metadata — so a run can be reconstructed losslessly.
Plot-ready two/three-column text files are emitted on request; no rendering
happens here.

Every failure path exits nonzero and prints a single machine-parsable line
``error: <kind>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timezone
from pathlib import Path
from types import SimpleNamespace
from typing import Mapping, Sequence

from .barrier import (
    BarrierProfile,
    Irrational,
    Rational,
    barrier_profile,
    invariant_circle_exists,
    peierls_irrational,
    peierls_rational,
)
from .experiments import (
    ExperimentSpec,
    FitResult,
    StudyAssertionError,
    StudyResult,
    run_approximation_study,
    run_counting_study,
    run_lemma_herm_check,
    run_lower_bound_study,
    run_mcor_study,
    run_spacing_study,
    run_theorem_mr,
)
from .generating import (
    GeneratingFunction,
    PerturbationParams,
    TwistFamilyError,
    make_by_name,
    twist_orbit,
)
from .minimizer import DegenerateSymbolError, SolverError, minimize_periodic

__all__ = [
    "CliIoError",
    "ConfigError",
    "RunConfig",
    "ResultRecord",
    "parse_config",
    "serialize_config",
    "record_to_json",
    "record_from_json",
    "write_results",
    "read_results",
    "emit_plot_data",
    "run_config",
    "main",
]

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "TWISTVAR_OUTDIR"

STUDY_SUBCOMMANDS = (
    "spacing",
    "lowerbound",
    "approx",
    "counting",
    "theorem-mr",
    "mcor",
    "herm",
)
SOLVER_SUBCOMMANDS = ("minimize", "barrier", "orbit")
SUBCOMMANDS = STUDY_SUBCOMMANDS + SOLVER_SUBCOMMANDS

_OMEGA_RULES = ("golden-half", "golden-deep", "noble")
_FAMILIES = ("h0", "hn", "hbar_n", "htilde_n")
_VARIANTS = ("exact", "plus", "minus")


class CliIoError(RuntimeError):
    """I/O or dispatch failure in the command-line layer."""


class ConfigError(ValueError):
    """Invalid run configuration; carries a line/column diagnostic."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {1 if column is None else column}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """A validated description of one CLI run.

    The key set is closed: :func:`parse_config` rejects anything not listed
    here.  ``subcommand`` may stay unset in a bare config file and be
    supplied by the command line.
    """

    subcommand: str | None = None
    n: tuple[int, ...] = (8, 16, 32)
    a: float = 1.9
    k: int = 2
    delta: float = 0.05
    omega: float | None = None
    rule: str = "golden-half"
    order: float | None = None
    grid: int = 64
    width: float | None = None
    convergents: int = 10
    family: str = "hn"
    p: int = 0
    q: int = 1
    variant: str = "exact"
    xi: float | None = None
    x0: float = 0.0
    y0: float = 0.0
    steps: int = 50
    output: str | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        _validate_config(self)

    def params(self) -> PerturbationParams:
        """Perturbation parameters shared by every family this run touches."""
        return PerturbationParams(n=self.n[0], a=self.a, k=self.k, delta=self.delta)

    def experiment_spec(self) -> ExperimentSpec:
        if self.subcommand not in STUDY_SUBCOMMANDS:
            raise ConfigError(f"subcommand {self.subcommand!r} is not a study")
        return ExperimentSpec(
            name=self.subcommand,
            n_range=self.n,
            params=self.params(),
            omega_rule=self.rule,
            omega=self.omega,
            grid_size=self.grid,
            output_path=self.output,
            order=self.order,
        )


def _config_error(key: str, message: str, pos: Mapping[str, tuple[int, int]]) -> ConfigError:
    line, column = pos.get(key, (None, None))
    return ConfigError(message, line, column)


def _validate_config(cfg, pos: Mapping[str, tuple[int, int]] | None = None) -> None:
    """Range checks shared by RunConfig construction and draft validation."""
    pos = pos or {}
    if cfg.subcommand is not None and cfg.subcommand not in SUBCOMMANDS:
        raise _config_error(
            "subcommand",
            f"unknown subcommand {cfg.subcommand!r}; choose from {', '.join(SUBCOMMANDS)}",
            pos,
        )
    if not cfg.n:
        raise _config_error("n", "n needs at least one value", pos)
    if any(v < 1 for v in cfg.n):
        raise _config_error("n", f"n values must be positive integers, got {cfg.n}", pos)
    if any(b <= a for a, b in zip(cfg.n, cfg.n[1:])):
        raise _config_error("n", f"n values must be strictly increasing, got {cfg.n}", pos)
    if not (cfg.a > 0.0 and math.isfinite(cfg.a)):
        raise _config_error("a", f"a must be a positive real, got {cfg.a}", pos)
    if cfg.k < 0:
        raise _config_error("k", f"k must be a nonnegative integer, got {cfg.k}", pos)
    if not (0.0 < cfg.delta <= 0.25):
        raise _config_error("delta", f"delta must lie in (0, 0.25], got {cfg.delta}", pos)
    if cfg.omega is not None and not (math.isfinite(cfg.omega) and cfg.omega != 0.0):
        raise _config_error("omega", f"omega must be finite and nonzero, got {cfg.omega}", pos)
    if cfg.rule not in _OMEGA_RULES:
        raise _config_error(
            "rule", f"unknown omega rule {cfg.rule!r}; choose from {', '.join(_OMEGA_RULES)}", pos
        )
    if cfg.order is not None and not (cfg.order >= 0.0 and math.isfinite(cfg.order)):
        raise _config_error("order", f"order must be a nonnegative real, got {cfg.order}", pos)
    if cfg.grid < 2:
        raise _config_error("grid", f"grid must be at least 2, got {cfg.grid}", pos)
    if cfg.width is not None and not (cfg.width > 0.0 and math.isfinite(cfg.width)):
        raise _config_error("width", f"width must be a positive real, got {cfg.width}", pos)
    if not (1 <= cfg.convergents <= 400):
        raise _config_error(
            "convergents", f"convergents must lie in [1, 400], got {cfg.convergents}", pos
        )
    if cfg.family not in _FAMILIES:
        raise _config_error(
            "family", f"unknown family {cfg.family!r}; choose from {', '.join(_FAMILIES)}", pos
        )
    if cfg.q < 1:
        raise _config_error("q", f"q must be a positive integer, got {cfg.q}", pos)
    if cfg.variant not in _VARIANTS:
        raise _config_error(
            "variant", f"unknown variant {cfg.variant!r}; choose from {', '.join(_VARIANTS)}", pos
        )
    if cfg.xi is not None and not math.isfinite(cfg.xi):
        raise _config_error("xi", f"xi must be finite, got {cfg.xi}", pos)
    if not math.isfinite(cfg.x0) or not math.isfinite(cfg.y0):
        raise _config_error("x0", "orbit seed must be finite", pos)
    if cfg.steps < 1:
        raise _config_error("steps", f"steps must be a positive integer, got {cfg.steps}", pos)
    if cfg.seed < 0:
        raise _config_error("seed", f"seed must be a nonnegative integer, got {cfg.seed}", pos)
    if cfg.subcommand == "mcor" and cfg.a > 2.0 - 2.0 * cfg.delta + 1e-12:
        raise _config_error("a", "a must satisfy a ≤ 2 − 2·delta", pos)


_INT_KEYS = {"k", "grid", "convergents", "p", "q", "steps", "seed"}
_FLOAT_KEYS = {"a", "delta", "omega", "order", "width", "xi", "x0", "y0"}
_STR_KEYS = {"subcommand", "rule", "family", "variant", "output"}
_KNOWN_KEYS = {"n"} | _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


def _parse_scalar(key: str, raw: str, line: int, column: int):
    if key == "n":
        parts = [p for chunk in raw.split(",") for p in chunk.split()]
        if not parts:
            raise ConfigError("n needs at least one value", line, column)
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise ConfigError(f"n expects integers, got {raw!r}", line, column) from None
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} expects an integer, got {raw!r}", line, column) from None
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key} expects a number, got {raw!r}", line, column) from None
    return raw


def parse_config(text: str) -> RunConfig:
    """Parse the key-value run-configuration format.

    One ``key = value`` pair per line; ``#`` starts a comment; blank lines
    are skipped.  Unknown keys, duplicate keys, and out-of-range values are
    rejected with a line/column diagnostic.  Empty text yields the defaults.
    """
    values: dict[str, object] = {}
    positions: dict[str, tuple[int, int]] = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise ConfigError(
                f"expected 'key = value', got {rawline.strip()!r}",
                lineno,
                len(rawline) - len(rawline.lstrip()) + 1,
            )
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        key_col = rawline.index(key) + 1 if key and key in rawline else 1
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, key_col)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, key_col)
        value = value_part.strip()
        if not value:
            raise ConfigError(f"{key} has no value", lineno, len(line.rstrip()) + 1)
        value_col = rawline.index(value_part.strip(), len(key_part)) + 1
        values[key] = _parse_scalar(key, value, lineno, value_col)
        positions[key] = (lineno, value_col)

    # validate a draft first so range errors point at the offending line
    defaults = {f.name: f.default for f in fields(RunConfig)}
    _validate_config(SimpleNamespace(**{**defaults, **values}), positions)
    return RunConfig(**values)  # type: ignore[arg-type]


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form of a RunConfig; ``parse_config`` inverts it."""
    lines = []
    for f in fields(RunConfig):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if f.name == "n":
            rendered = ", ".join(str(v) for v in value)
        elif isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{f.name} = {rendered}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# result records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRecord:
    """One run's persisted output: inputs echo, table, and solver metadata."""

    timestamp: str
    inputs: Mapping[str, object]
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    metadata: Mapping[str, object] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise CliIoError(
                f"unsupported schema version {self.schema_version}; expected {SCHEMA_VERSION}"
            )
        for row in self.rows:
            if len(row) != len(self.columns):
                raise CliIoError(
                    f"row width {len(row)} does not match {len(self.columns)} columns"
                )


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _config_as_dict(cfg: RunConfig) -> dict[str, object]:
    return {f.name: (list(v) if isinstance(v := getattr(cfg, f.name), tuple) else v)
            for f in fields(RunConfig)}


def record_to_json(record: ResultRecord) -> str:
    """Lossless JSON serialization (floats keep full precision)."""
    payload = {
        "schemaVersion": record.schema_version,
        "timestamp": record.timestamp,
        "inputs": dict(record.inputs),
        "columns": list(record.columns),
        "rows": [list(row) for row in record.rows],
        "metadata": dict(record.metadata),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def record_from_json(text: str) -> ResultRecord:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliIoError(f"malformed result record: {exc}") from exc
    try:
        return ResultRecord(
            schema_version=int(payload["schemaVersion"]),
            timestamp=str(payload["timestamp"]),
            inputs=dict(payload["inputs"]),
            columns=tuple(str(c) for c in payload["columns"]),
            rows=tuple(tuple(row) for row in payload["rows"]),
            metadata=dict(payload.get("metadata", {})),
        )
    except KeyError as exc:
        raise CliIoError(f"result record is missing field {exc}") from exc


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(record: ResultRecord, path: str | Path) -> None:
    """Write the record as ``<path>`` (CSV) plus a ``.json`` sidecar.

    The CSV holds the tabular payload — header row, RFC-style quoting —
    and is byte-identical across reruns of the same configuration.  The
    sidecar holds the full record (the timestamp lives only there).
    Overwrites are idempotent.
    """
    path = Path(path)
    sidecar = path.with_suffix(".json")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(record.columns)
        for row in record.rows:
            writer.writerow([_csv_cell(v) for v in row])
        path.write_text(buffer.getvalue(), encoding="utf-8")
        sidecar.write_text(record_to_json(record), encoding="utf-8")
    except OSError as exc:
        raise CliIoError(f"cannot write results to {path}: {exc}") from exc


def read_results(path: str | Path) -> ResultRecord:
    """Reconstruct a record from the JSON sidecar written by write_results."""
    sidecar = Path(path).with_suffix(".json")
    try:
        return record_from_json(sidecar.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliIoError(f"cannot read results from {sidecar}: {exc}") from exc


# ---------------------------------------------------------------------------
# plot data
# ---------------------------------------------------------------------------


def _plot_rows_for_study(result: StudyResult) -> tuple[str, list[tuple[float, ...]]]:
    rows = result.rows
    if result.name == "spacing":
        pairs = [
            (math.log(r[1]), math.log(r[2]))
            for r in rows
            if r[0] == "hbar_n" and isinstance(r[2], float) and math.isfinite(r[2]) and r[2] > 0
        ]
        return "log n, log gap", pairs
    if result.name == "theorem-mr":
        triples = [
            (float(r[1]), float(r[3]), float(r[4]))
            for r in rows
            if r[0] == "h_n" and r[7] != "mirrored"
        ]
        return "n, sup barrier, threshold", triples
    if result.name == "lowerbound":
        triples = [
            (float(r[1]), float(r[2]), float(r[3]))
            for r in rows
            if r[0] == "h_n" and math.isfinite(r[2])
        ]
        return "n, barrier at bump peak, bump height", triples
    if result.name == "approx":
        pairs = [
            (math.log(r[1]), math.log(r[3]))
            for r in rows
            if r[0] == "h_n" and isinstance(r[3], float) and r[3] > 0
        ]
        return "log n, log sup discrepancy", pairs
    if result.name == "counting":
        pairs = [
            (math.log(r[1]), math.log1p(float(r[4])))
            for r in rows
            if r[0] == "h_n"
        ]
        return "log n, log(1 + count)", pairs
    if result.name == "mcor":
        pairs = [
            (math.log(r[1]), math.log(r[3]))
            for r in rows
            if r[0] == "htilde_n" and r[3] > 0
        ]
        return "log q, log norm", pairs
    if result.name == "herm":
        triples = [
            (float(r[1]), float(r[3]), float(r[4]))
            for r in rows
            if r[0] == "compressed"
        ]
        return "q, sup compressed, sup plain", triples
    raise CliIoError(f"no plot mapping for study {result.name!r}")


def emit_plot_data(obj: BarrierProfile | StudyResult, path: str | Path) -> None:
    """Write gnuplot-ready two/three-column text for a profile or a study.

    Barrier profiles become ``(xi, value, flag)`` triples; studies map to
    the coordinates their fits use — e.g. spacing gives ``(log n, log gap)``
    pairs and the circle-criterion study gives ``(n, sup, threshold)``
    triples.  Control and undefined rows are skipped, never written as NaN.
    """
    path = Path(path)
    lines: list[str] = []
    if isinstance(obj, BarrierProfile):
        lines.append("# xi  value  flagged")
        for x, v, flag in zip(obj.grid, obj.values, obj.flags):
            lines.append(f"{x:.17g} {v:.17g} {int(flag)}")
    elif isinstance(obj, StudyResult):
        header, data = _plot_rows_for_study(obj)
        lines.append(f"# {obj.name}: {header}")
        for tup in data:
            lines.append(" ".join(f"{v:.17g}" for v in tup))
    else:
        raise CliIoError(f"cannot emit plot data for {type(obj).__name__}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise CliIoError(f"cannot write plot data to {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_STUDY_RUNNERS = {
    "spacing": run_spacing_study,
    "lowerbound": run_lower_bound_study,
    "approx": run_approximation_study,
    "counting": run_counting_study,
    "theorem-mr": run_theorem_mr,
    "mcor": run_mcor_study,
    "herm": run_lemma_herm_check,
}


def _family(cfg: RunConfig) -> GeneratingFunction:
    params = None if cfg.family == "h0" else cfg.params()
    return make_by_name(cfg.family, params)


def _fit_metadata(fit: FitResult | None) -> dict[str, object]:
    if fit is None:
        return {}
    return {
        "fit": {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r2": fit.r2,
            "pointCount": fit.point_count,
        }
    }


def _run_study(cfg: RunConfig) -> tuple[StudyResult, ResultRecord]:
    result = _STUDY_RUNNERS[cfg.subcommand](cfg.experiment_spec())
    metadata: dict[str, object] = {
        "study": result.name,
        "passed": result.passed,
        "lowConfidence": result.low_confidence,
        "notes": list(result.notes),
    }
    metadata.update(_fit_metadata(result.fit))
    record = ResultRecord(
        timestamp=_now_iso(),
        inputs=_config_as_dict(cfg),
        columns=result.columns,
        rows=result.rows,
        metadata=metadata,
    )
    return result, record


def _run_minimize(cfg: RunConfig) -> ResultRecord:
    h = _family(cfg)
    ground, report = minimize_periodic(h, cfg.p, cfg.q)
    rows = tuple((i, float(x)) for i, x in enumerate(ground.x))
    return ResultRecord(
        timestamp=_now_iso(),
        inputs=_config_as_dict(cfg),
        columns=("site", "x"),
        rows=rows,
        metadata={
            "family": h.label,
            "symbol": f"{cfg.p}/{cfg.q}",
            "actionPerPeriod": report.action,
            "converged": report.converged,
            "residual": report.residual,
        },
    )


def _run_barrier(cfg: RunConfig) -> tuple[BarrierProfile | None, ResultRecord]:
    h = _family(cfg)
    if cfg.omega is not None:
        symbol = Irrational(cfg.omega)
        symbol_text = f"omega={cfg.omega!r}"
    else:
        symbol = Rational(cfg.p, cfg.q, cfg.variant)
        symbol_text = f"{cfg.p}/{cfg.q}:{cfg.variant}"

    if cfg.xi is not None:
        if isinstance(symbol, Irrational):
            est = peierls_irrational(h, symbol.omega, cfg.xi, convergents=cfg.convergents)
            rows = ((cfg.xi, est.value, not est.stable),)
            meta = {
                "family": h.label,
                "symbol": symbol_text,
                "errorEstimate": est.error_estimate,
                "convergentsUsed": est.convergents_used,
                "resolutionLimited": est.resolution_limited,
            }
        else:
            value = peierls_rational(h, symbol.p, symbol.q, symbol.variant, cfg.xi)
            rows = ((cfg.xi, value, False),)
            meta = {"family": h.label, "symbol": symbol_text}
        record = ResultRecord(
            timestamp=_now_iso(),
            inputs=_config_as_dict(cfg),
            columns=("xi", "barrier", "flagged"),
            rows=rows,
            metadata=meta,
        )
        return None, record

    profile = barrier_profile(h, symbol, grid_size=cfg.grid)
    rows = tuple(
        (float(x), float(v), bool(f))
        for x, v, f in zip(profile.grid, profile.values, profile.flags)
    )
    try:
        circle = invariant_circle_exists(profile)
    except SolverError:
        circle = None
    record = ResultRecord(
        timestamp=_now_iso(),
        inputs=_config_as_dict(cfg),
        columns=("xi", "barrier", "flagged"),
        rows=rows,
        metadata={
            "family": h.label,
            "symbol": symbol_text,
            "supBarrier": profile.sup_value,
            "invariantCircleExists": circle,
            **{k: v for k, v in profile.metadata.items()},
        },
    )
    return profile, record


def _run_orbit(cfg: RunConfig) -> ResultRecord:
    h = _family(cfg)
    orbit = twist_orbit(h, cfg.x0, cfg.y0, cfg.steps)
    rows = tuple((i, float(p[0]), float(p[1])) for i, p in enumerate(orbit))
    return ResultRecord(
        timestamp=_now_iso(),
        inputs=_config_as_dict(cfg),
        columns=("step", "x", "y"),
        rows=rows,
        metadata={"family": h.label, "steps": cfg.steps},
    )


def _default_output(cfg: RunConfig) -> Path:
    base = os.environ.get(OUTPUT_DIR_ENV, ".")
    return Path(base) / f"{cfg.subcommand}.csv"


def run_config(cfg: RunConfig, plot_path: str | Path | None = None) -> ResultRecord:
    """Execute one validated RunConfig and persist its results.

    Returns the record that was written.  Raises on hard failures; the
    :func:`main` wrapper maps those to exit codes.
    """
    if cfg.subcommand is None:
        raise ConfigError("no subcommand given")
    plottable: BarrierProfile | StudyResult | None = None
    if cfg.subcommand in STUDY_SUBCOMMANDS:
        result, record = _run_study(cfg)
        plottable = result
    elif cfg.subcommand == "minimize":
        record = _run_minimize(cfg)
    elif cfg.subcommand == "barrier":
        profile, record = _run_barrier(cfg)
        plottable = profile
    else:
        record = _run_orbit(cfg)

    out = Path(cfg.output) if cfg.output else _default_output(cfg)
    write_results(record, out)
    if plot_path is not None:
        if plottable is None:
            raise CliIoError(f"subcommand {cfg.subcommand!r} has no plot mapping here")
        emit_plot_data(plottable, plot_path)
    return record


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as single-line config errors."""

    def error(self, message: str):  # noqa: A003 - argparse API
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="twistvar",
        description="Variational studies of nearly integrable twist maps.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        s = sub.add_parser(name, help=f"run the {name} computation")
        s.add_argument("--config", help="key-value config file; flags override it")
        s.add_argument("--n", help="comma-separated n values, e.g. 8,16,32")
        s.add_argument("--a", type=float, help="well exponent a > 0")
        s.add_argument("--k", type=int, help="smoothness order for the bump budget")
        s.add_argument("--delta", type=float, help="bound exponent delta")
        s.add_argument("--omega", type=float, help="explicit rotation number")
        s.add_argument("--rule", choices=_OMEGA_RULES, help="rotation-number selection rule")
        s.add_argument("--order", type=float, help="derivative order for norm studies")
        s.add_argument("--grid", type=int, help="evaluation grid size")
        s.add_argument("--width", type=float, help="solver window half-width override")
        s.add_argument("--convergents", type=int, help="convergent ladder depth")
        s.add_argument("--family", choices=_FAMILIES, help="generating function family")
        s.add_argument("--p", type=int, help="rotation symbol numerator")
        s.add_argument("--q", type=int, help="rotation symbol denominator")
        s.add_argument("--variant", choices=_VARIANTS, help="rational symbol variant")
        s.add_argument("--xi", type=float, help="single barrier evaluation point")
        s.add_argument("--x0", type=float, help="orbit seed x")
        s.add_argument("--y0", type=float, help="orbit seed y (momentum)")
        s.add_argument("--steps", type=int, help="orbit length")
        s.add_argument("--output", help="output CSV path (JSON sidecar alongside)")
        s.add_argument("--seed", type=int, help="seed recorded for randomized test hooks")
        s.add_argument("--plot", help="also write gnuplot-ready data to this path")
    return parser


def _merge_flags(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    overrides: dict[str, object] = {"subcommand": args.subcommand}
    for f in fields(RunConfig):
        if f.name == "subcommand":
            continue
        value = getattr(args, f.name, None)
        if value is None:
            continue
        if f.name == "n":
            overrides["n"] = _parse_scalar("n", value, 0, 0)
        else:
            overrides[f.name] = value
    return replace(cfg, **overrides)


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code.

    0 on success, 1 when a hard assertion or solver guarantee fails,
    2 for configuration and I/O errors.
    """
    parser = _build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help and friends
            return int(exc.code or 0)
        if args.config:
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except OSError as exc:
                raise CliIoError(f"cannot read config {args.config}: {exc}") from exc
            cfg = parse_config(text)
        else:
            cfg = RunConfig()
        cfg = _merge_flags(cfg, args)
        record = run_config(cfg, plot_path=args.plot)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except CliIoError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2
    except TwistFamilyError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except StudyAssertionError as exc:
        print(f"error: assertion: {exc}", file=sys.stderr)
        return 1
    except DegenerateSymbolError as exc:
        print(f"error: degenerate: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"error: solver: {exc}", file=sys.stderr)
        return 1

    passed = record.metadata.get("passed", True)
    out = cfg.output or str(_default_output(cfg))
    print(f"{cfg.subcommand}: {len(record.rows)} rows -> {out} (passed={passed})")
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
