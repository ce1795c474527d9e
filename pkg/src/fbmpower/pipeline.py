"""End-to-end analysis pipeline: CSV ingestion, preprocessing, persistence
analysis per (building, quantity) series, and report rendering.

Input is long-format CSV with columns timestamp,building,quantity,value and
ISO-8601 timestamps.  Each series is normalized to [0, 1], linearly
detrended, differenced, Gaussianized, fitted for its Hurst exponent, and
run through the fBm-increment hypothesis test.  Degenerate or unfittable
series produce reports carrying warnings instead of failing the run.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields
from datetime import datetime

import numpy as np

from . import gaussianize as gz
from . import hurst as hu
from . import hypothesis as hyp
from .errors import (
    ConfigurationError,
    DegenerateSeriesError,
    InputFormatError,
    InvalidSizeError,
    UnfittableSeriesError,
)

__all__ = [
    "SCHEMA_VERSION",
    "RawSeries",
    "PreparedSeries",
    "AnalysisConfig",
    "BuildingReport",
    "load_csv",
    "normalize",
    "detrend",
    "restore",
    "analyze",
    "render_report",
]

SCHEMA_VERSION = 1

MIN_SERIES_LENGTH = gz.MIN_INCREMENTS + 1

# More zeros than this among the increments and the power transform is
# ill-conditioned; the report carries a warning.
ZERO_FRACTION_WARNING = 0.5

CSV_COLUMNS = ("timestamp", "building", "quantity", "value")
QUANTITIES = ("P", "S")
GAP_POLICIES = ("drop", "interpolate-linear")
REPORT_FORMATS = ("json", "csv", "md")


@dataclass(frozen=True)
class RawSeries:
    """One observed hourly series for a (building, quantity) pair."""

    building_id: str
    quantity: str
    timestamps: tuple[datetime, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        if values.size != len(self.timestamps):
            raise ValueError("timestamps and values must have equal length")
        if values.size < MIN_SERIES_LENGTH:
            raise InvalidSizeError(
                f"series needs at least {MIN_SERIES_LENGTH} observations, got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        for a, b in zip(self.timestamps, self.timestamps[1:]):
            if not a < b:
                raise ValueError(f"timestamps must be strictly increasing; saw {a} then {b}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class PreparedSeries:
    """Residuals after [0,1] normalization and linear detrending, with the
    parameters needed to undo both steps."""

    values: np.ndarray
    norm_min: float
    norm_max: float
    trend_intercept: float
    trend_slope: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


@dataclass(frozen=True)
class AnalysisConfig:
    """Tunable parameters of the analysis; every field maps to a CLI flag."""

    grid_start: float = hu.GRID_START
    grid_stop: float = hu.GRID_STOP
    grid_step: float = hu.GRID_STEP
    alpha: float = hyp.DEFAULT_ALPHA
    beta0: float = hyp.DEFAULT_BETA0
    q_constant: float = hu.DEFAULT_Q_CONSTANT
    paper_constants: bool = False
    ratio_tol: float = 1e-3
    max_iter: int = 100
    gap_policy: str = "drop"
    require_delta_on_persistent: bool = False

    def validate(self) -> "AnalysisConfig":
        if not (0.0 < self.grid_start < self.grid_stop < 1.0):
            raise ConfigurationError(
                f"grid bounds must satisfy 0 < start < stop < 1, "
                f"got [{self.grid_start}, {self.grid_stop}]"
            )
        if not 0.01 <= self.grid_step <= 0.1:
            raise ConfigurationError(f"grid step must lie in [0.01, 0.1], got {self.grid_step}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.beta0 > 0.0:
            raise ConfigurationError(f"beta0 must be positive, got {self.beta0}")
        if not self.q_constant > 0.0:
            raise ConfigurationError(f"q constant must be positive, got {self.q_constant}")
        if not self.ratio_tol > 0.0:
            raise ConfigurationError(f"ratio tolerance must be positive, got {self.ratio_tol}")
        if self.max_iter < 1:
            raise ConfigurationError(f"max iterations must be >= 1, got {self.max_iter}")
        if self.gap_policy not in GAP_POLICIES:
            raise ConfigurationError(
                f"gap policy must be one of {GAP_POLICIES}, got {self.gap_policy!r}"
            )
        return self


@dataclass(frozen=True)
class BuildingReport:
    """All statistics for one (building, quantity) series.

    Optional fields are None when the analysis stopped early (degenerate or
    unfittable series) or on the branch where a statistic does not apply.
    """

    building_id: str
    quantity: str
    m: int | None = None
    lam: float | None = None
    achieved_ratio: float | None = None
    h_hat: float | None = None
    q_at_hat: float | None = None
    c: float | None = None
    a_n: float | None = None
    a_limit: float | None = None
    delta: float | None = None
    b_n: float | None = None
    d_n_stat: float | None = None
    beta0: float | None = None
    beta1: float | None = None
    beta2: float | None = None
    verdict: str | None = None
    memory_class: str | None = None
    noise_label: str | None = None
    forecastable: bool | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)


# JSON field names; "lam" is spelled out because the transform exponent is
# called lambda everywhere outside Python.
_REPORT_KEYS = {"lam": "lambda"}


def load_csv(path, gap_policy: str = "drop") -> tuple[list[RawSeries], list[str]]:
    """Parse a long-format CSV into per-(building, quantity) series.

    Rows with a blank or non-finite value are gaps: dropped under the
    default policy, filled by time-weighted linear interpolation under
    "interpolate-linear" (leading/trailing gaps are always dropped).
    Series left shorter than 9 observations are skipped.  Returns the
    series sorted by (building, quantity) plus human-readable warnings.

    Raises InputFormatError, with the offending line number, on a missing
    or wrong header, an unparsable row, or a duplicate timestamp.
    """
    if gap_policy not in GAP_POLICIES:
        raise ConfigurationError(f"gap policy must be one of {GAP_POLICIES}, got {gap_policy!r}")
    with open(path, newline="", encoding="utf-8") as handle:
        return _parse_long_csv(handle, gap_policy)


def _parse_long_csv(handle, gap_policy: str) -> tuple[list[RawSeries], list[str]]:
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        raise InputFormatError("line 1: empty file, expected header "
                               f"{','.join(CSV_COLUMNS)}") from None
    names = [cell.strip().lower() for cell in header]
    if sorted(names) != sorted(CSV_COLUMNS):
        raise InputFormatError(
            f"line 1: expected header columns {','.join(CSV_COLUMNS)} "
            f"in any order, got {','.join(header)!r}"
        )
    col = {name: names.index(name) for name in CSV_COLUMNS}

    rows: dict[tuple[str, str], dict[datetime, float | None]] = {}
    for lineno, cells in enumerate(reader, start=2):
        if not cells or all(not cell.strip() for cell in cells):
            continue
        if len(cells) != len(names):
            raise InputFormatError(
                f"line {lineno}: expected {len(names)} fields, got {len(cells)}"
            )
        try:
            stamp = datetime.fromisoformat(cells[col["timestamp"]].strip())
        except ValueError:
            raise InputFormatError(
                f"line {lineno}: unparsable timestamp {cells[col['timestamp']]!r}"
            ) from None
        building = cells[col["building"]].strip()
        if not building:
            raise InputFormatError(f"line {lineno}: empty building id")
        quantity = cells[col["quantity"]].strip().upper()
        if quantity not in QUANTITIES:
            raise InputFormatError(
                f"line {lineno}: quantity must be one of {QUANTITIES}, "
                f"got {cells[col['quantity']]!r}"
            )
        raw_value = cells[col["value"]].strip()
        value: float | None
        if not raw_value:
            value = None
        else:
            try:
                value = float(raw_value)
            except ValueError:
                raise InputFormatError(
                    f"line {lineno}: unparsable value {raw_value!r}"
                ) from None
            if not np.isfinite(value):
                value = None
        key = (building, quantity)
        series = rows.setdefault(key, {})
        if stamp in series:
            raise InputFormatError(
                f"line {lineno}: duplicate timestamp {stamp.isoformat()} "
                f"for {building}/{quantity}"
            )
        series[stamp] = value

    out: list[RawSeries] = []
    warnings: list[str] = []
    for (building, quantity), points in sorted(rows.items()):
        stamps = sorted(points)
        values = [points[t] for t in stamps]
        kept_stamps, kept_values, note = _apply_gap_policy(stamps, values, gap_policy)
        if note:
            warnings.append(f"{building}/{quantity}: {note}")
        if len(kept_values) < MIN_SERIES_LENGTH:
            warnings.append(
                f"{building}/{quantity}: skipped, only {len(kept_values)} usable "
                f"observations (need {MIN_SERIES_LENGTH})"
            )
            continue
        out.append(
            RawSeries(
                building_id=building,
                quantity=quantity,
                timestamps=tuple(kept_stamps),
                values=np.array(kept_values),
            )
        )
    return out, warnings


def _apply_gap_policy(stamps, values, gap_policy):
    missing = [i for i, v in enumerate(values) if v is None]
    if not missing:
        return stamps, values, ""
    if gap_policy == "drop":
        kept = [(t, v) for t, v in zip(stamps, values) if v is not None]
        note = f"dropped {len(missing)} missing value(s)"
        return [t for t, _ in kept], [v for _, v in kept], note

    # interpolate-linear: fill interior gaps, drop leading/trailing ones
    present = [i for i, v in enumerate(values) if v is not None]
    first, last = present[0], present[-1]
    edge_gaps = sum(1 for i in missing if i < first or i > last)
    filled = list(values)
    times = [t.timestamp() for t in stamps]
    xs = [times[i] for i in present]
    ys = [values[i] for i in present]
    interior = [i for i in missing if first < i < last]
    for i in interior:
        filled[i] = float(np.interp(times[i], xs, ys))
    kept = [(t, filled[i]) for i, t in enumerate(stamps) if first <= i <= last]
    note = f"interpolated {len(interior)} missing value(s)"
    if edge_gaps:
        note += f", dropped {edge_gaps} at the edges"
    return [t for t, _ in kept], [v for _, v in kept], note


def normalize(values) -> tuple[np.ndarray, float, float]:
    """Affinely map a series onto [0, 1]; constant series are degenerate."""
    values = np.asarray(values, dtype=float)
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        raise DegenerateSeriesError("constant series cannot be normalized")
    return (values - lo) / (hi - lo), lo, hi


def detrend(values, norm_min: float = 0.0, norm_max: float = 1.0) -> PreparedSeries:
    """Remove the least-squares line over the sample index.

    The fitted intercept and slope (per index step) are recorded so the
    original values can be reconstructed exactly.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < MIN_SERIES_LENGTH:
        raise InvalidSizeError(f"need at least {MIN_SERIES_LENGTH} observations, got {n}")
    k = np.arange(n, dtype=float)
    k_mean = k.mean()
    v_mean = values.mean()
    slope = float(np.dot(k - k_mean, values - v_mean) / np.dot(k - k_mean, k - k_mean))
    intercept = float(v_mean - slope * k_mean)
    residuals = values - (intercept + slope * k)
    return PreparedSeries(
        values=residuals,
        norm_min=norm_min,
        norm_max=norm_max,
        trend_intercept=intercept,
        trend_slope=slope,
    )


def restore(prepared: PreparedSeries) -> np.ndarray:
    """Invert detrending and normalization, recovering the raw values."""
    k = np.arange(prepared.values.size, dtype=float)
    normed = prepared.values + prepared.trend_intercept + prepared.trend_slope * k
    return normed * (prepared.norm_max - prepared.norm_min) + prepared.norm_min


def analyze(series: RawSeries, config: AnalysisConfig = AnalysisConfig()) -> BuildingReport:
    """Run the full analysis of one series and assemble its report.

    Degenerate preprocessing and an unfittable Gaussianization degrade to
    warnings on the report rather than raising, so one bad series cannot
    take down a batch run.
    """
    config.validate()
    warnings: list[str] = []

    try:
        normed, lo, hi = normalize(series.values)
    except DegenerateSeriesError as exc:
        return BuildingReport(
            building_id=series.building_id,
            quantity=series.quantity,
            warnings=(f"degenerate series: {exc}; no statistics computed",),
        )
    prepared = detrend(normed, norm_min=lo, norm_max=hi)
    incs = gz.increments(prepared.values)

    # Repeated raw readings survive detrending only as a constant offset, so
    # gauge transform conditioning on the observed increments.
    zero_fraction = float(np.mean(np.diff(series.values) == 0.0))
    if zero_fraction > ZERO_FRACTION_WARNING:
        warnings.append(
            f"{zero_fraction:.0%} of the observed increments are zero; "
            "the power transform is ill-conditioned"
        )

    try:
        lam = gz.fit_lambda(incs, tol=config.ratio_tol, max_iter=config.max_iter)
    except (UnfittableSeriesError, DegenerateSeriesError) as exc:
        warnings.append(f"non-Gaussianizable: {exc}")
        return BuildingReport(
            building_id=series.building_id,
            quantity=series.quantity,
            m=incs.m,
            verdict="rejected",
            warnings=tuple(warnings),
        )

    z = gz.transform(incs, lam)
    estimate = hu.estimate_hurst(
        z,
        grid_start=config.grid_start,
        grid_stop=config.grid_stop,
        grid_step=config.grid_step,
        q_constant=config.q_constant,
    )
    stats = hyp.test_hypothesis(
        z,
        estimate.h_hat,
        beta0=config.beta0,
        alpha=config.alpha,
        paper_constants=config.paper_constants,
        require_delta_on_persistent=config.require_delta_on_persistent,
    )
    labels = hyp.classify(estimate.h_hat, stats.verdict)
    return BuildingReport(
        building_id=series.building_id,
        quantity=series.quantity,
        m=z.m,
        lam=z.lam,
        achieved_ratio=z.achieved_ratio,
        h_hat=estimate.h_hat,
        q_at_hat=estimate.q_at_hat,
        c=stats.c,
        a_n=stats.a_n,
        a_limit=stats.a_limit,
        delta=stats.delta,
        b_n=stats.b_n,
        d_n_stat=stats.d_n_stat,
        beta0=stats.beta0,
        beta1=stats.beta1,
        beta2=stats.beta2,
        verdict=stats.verdict,
        memory_class=labels.memory,
        noise_label=labels.noise,
        forecastable=labels.forecastable,
        warnings=tuple(warnings),
    )


def _report_dict(report: BuildingReport) -> dict:
    out = {}
    for f in fields(BuildingReport):
        value = getattr(report, f.name)
        if isinstance(value, tuple):
            value = list(value)
        out[_REPORT_KEYS.get(f.name, f.name)] = value
    return out


def _sorted_reports(reports) -> list[BuildingReport]:
    return sorted(reports, key=lambda r: (r.building_id, r.quantity))


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def render_report(reports, fmt: str = "json") -> str:
    """Render reports deterministically, ordered by (building, quantity).

    "json" nests every report field under a schema-versioned document;
    "csv" flattens the same fields; "md" is a table of the headline
    statistics plus the verdict.
    """
    if fmt not in REPORT_FORMATS:
        raise ConfigurationError(f"format must be one of {REPORT_FORMATS}, got {fmt!r}")
    ordered = _sorted_reports(reports)
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "reports": [_report_dict(r) for r in ordered],
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        names = [_REPORT_KEYS.get(f.name, f.name) for f in fields(BuildingReport)]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(names)
        for report in ordered:
            row = []
            for f in fields(BuildingReport):
                value = getattr(report, f.name)
                if value is None:
                    row.append("")
                elif isinstance(value, tuple):
                    row.append("; ".join(value))
                else:
                    row.append(str(value))
            writer.writerow(row)
        return buf.getvalue()
    columns = (
        ("building", lambda r: r.building_id),
        ("quantity", lambda r: r.quantity),
        ("H", lambda r: _fmt(r.h_hat)),
        ("A_n", lambda r: _fmt(r.a_n)),
        ("B_n", lambda r: _fmt(r.b_n)),
        ("D_n", lambda r: _fmt(r.d_n_stat)),
        ("A", lambda r: _fmt(r.a_limit)),
        ("beta1", lambda r: _fmt(r.beta1)),
        ("beta2", lambda r: _fmt(r.beta2)),
        ("verdict", lambda r: _fmt(r.verdict)),
        ("forecastable", lambda r: _fmt(r.forecastable)),
    )
    lines = [
        "| " + " | ".join(name for name, _ in columns) + " |",
        "| " + " | ".join("---" for _ in columns) + " |",
    ]
    for report in ordered:
        lines.append("| " + " | ".join(getter(report) for _, getter in columns) + " |")
    return "\n".join(lines) + "\n"
