"""Parameter sweeps, figure presets and CSV serialization."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .entanglement import EntanglementReport, evaluate
from .errors import AllPointsUnstable, ArgumentError, MagnonKerrError
from .model import SystemParams, flip_direction
from .nonreciprocity import BidirectionalReport, bidirectional_report

VARIABLES = ("Delta_m", "K", "T")
DIRECTIONS = ("both", "positive", "negative")
DEFAULT_COUNT = 201

CSV_COLUMNS = (
    "sweep_var", "value", "stable_pos", "stable_neg",
    "E_ab_pos", "E_ab_neg", "E_am_pos", "E_am_neg", "E_mb_pos", "E_mb_neg",
    "Rmin_pos", "Rmin_neg", "C_ab", "C_am", "C_mb", "C_R",
)


@dataclass(frozen=True)
class SweepSpec:
    """A one-dimensional sweep.

    ``Delta_m`` and ``K`` are in units of ``omega_b``; ``K`` sweeps the
    magnitude ``|K|`` and the sign is set by ``directions``.  ``T`` is in
    kelvin and is spaced logarithmically unless ``spacing`` says otherwise.
    """

    variable: str
    start: float
    stop: float
    count: int = DEFAULT_COUNT
    base: SystemParams = field(default_factory=SystemParams)
    directions: str = "both"
    spacing: Optional[str] = None

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ArgumentError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if self.directions not in DIRECTIONS:
            raise ArgumentError(f"directions must be one of {DIRECTIONS}, got {self.directions!r}")
        if self.count < 2:
            raise ArgumentError(f"count must be at least 2, got {self.count}")
        if not self.start < self.stop:
            raise ArgumentError(f"start must be below stop, got {self.start} >= {self.stop}")
        if self.resolved_spacing not in ("linear", "log"):
            raise ArgumentError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.resolved_spacing == "log" and self.start <= 0:
            raise ArgumentError("log spacing needs a positive start")
        if self.variable == "T" and self.start < 0:
            raise ArgumentError("temperatures must be nonnegative")
        if self.variable == "K" and self.start < 0:
            raise ArgumentError("K sweeps range over the magnitude |K|; start must be >= 0")

    @property
    def resolved_spacing(self) -> str:
        if self.spacing is not None:
            return self.spacing
        return "log" if self.variable == "T" else "linear"

    def grid(self) -> np.ndarray:
        if self.resolved_spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def params_at(self, value: float) -> SystemParams:
        """Base parameters with the swept variable set to ``value`` and ``K >= 0``."""
        value = float(value)
        if self.variable == "Delta_m":
            return self.base.replace(Delta_m=value, K=abs(self.base.K))
        if self.variable == "K":
            return self.base.replace(K=value)
        return self.base.replace(temperature=value, K=abs(self.base.K))


@dataclass(frozen=True)
class SweepRow:
    value: float
    forward: Optional[EntanglementReport]
    backward: Optional[EntanglementReport]
    ratios: dict
    error: Optional[str] = None

    @property
    def any_stable(self) -> bool:
        return any(r is not None and r.stable for r in (self.forward, self.backward))


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple

    def column(self, name: str) -> np.ndarray:
        """One CSV column as floats, ``nan`` where undefined."""
        return np.array([np.nan if v is None else float(v)
                         for v in (_row_values(self.spec, r)[name] for r in self.rows)])

    def to_csv(self) -> str:
        return format_csv(self)


_EMPTY_RATIOS = {"C_ab": None, "C_am": None, "C_mb": None, "C_R": None}


def _evaluate_row(task) -> SweepRow:
    spec, value = task
    params = spec.params_at(value)
    try:
        if spec.directions == "both":
            report = bidirectional_report(params)
            return SweepRow(value, report.forward, report.backward, report.ratios)
        if spec.directions == "positive":
            return SweepRow(value, evaluate(params), None, dict(_EMPTY_RATIOS))
        return SweepRow(value, None, evaluate(flip_direction(params)), dict(_EMPTY_RATIOS))
    except MagnonKerrError as exc:
        return SweepRow(value, None, None, dict(_EMPTY_RATIOS), error=str(exc))


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every grid point of ``spec``.

    Points are independent; with ``workers > 1`` they are spread over a
    process pool and gathered back in grid order, so the result does not
    depend on the worker count.
    """
    tasks = [(spec, float(v)) for v in spec.grid()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_row, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [_evaluate_row(t) for t in tasks]
    if not any(r.any_stable for r in rows):
        errors = {r.error for r in rows if r.error}
        detail = f" ({'; '.join(sorted(errors))})" if errors else ""
        raise AllPointsUnstable(f"all {len(rows)} sweep points are unstable{detail}")
    return SweepResult(spec, tuple(rows))


def _row_values(spec: SweepSpec, row: SweepRow) -> dict:
    fwd, bwd = row.forward, row.backward
    out = {
        "sweep_var": spec.variable,
        "value": row.value,
        "stable_pos": None if fwd is None else fwd.stable,
        "stable_neg": None if bwd is None else bwd.stable,
    }
    for name, col in (("E_ab", "E_ab"), ("E_am", "E_am"), ("E_mb", "E_mb"), ("R_min", "Rmin")):
        out[f"{col}_pos"] = None if fwd is None else getattr(fwd, name)
        out[f"{col}_neg"] = None if bwd is None else getattr(bwd, name)
    out.update(row.ratios)
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def format_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        values = _row_values(result.spec, row)
        writer.writerow([_fmt(values[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def figure_preset(name: str, count: int = DEFAULT_COUNT) -> SweepSpec:
    """Sweep reproducing one of the figure panels (``fig2``, ``fig3``, ``fig4a``-``fig4d``)."""
    base = SystemParams()
    kappa = base.kappa_a
    presets = {
        "fig2": dict(variable="Delta_m", start=-2.0, stop=0.0, base=base.replace(K=kappa)),
        "fig3": dict(variable="K", start=0.0, stop=1.2 * kappa, base=base.replace(Delta_m=-1.0)),
        "fig4a": dict(variable="Delta_m", start=-2.0, stop=0.0, base=base.replace(K=kappa)),
        "fig4b": dict(variable="K", start=0.0, stop=1.2 * kappa, base=base.replace(Delta_m=-1.0)),
        "fig4c": dict(variable="T", start=1e-4, stop=0.5, base=base.replace(Delta_m=-0.8, K=kappa)),
        "fig4d": dict(variable="T", start=1e-4, stop=0.5, base=base.replace(Delta_m=-1.0, K=0.8 * kappa)),
    }
    if name not in presets:
        raise ArgumentError(f"unknown figure preset {name!r}; choose from {sorted(presets)}")
    return SweepSpec(count=count, **presets[name])


FIGURES = ("fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig4d")


def evaluate_point(params: SystemParams) -> dict:
    """Run the bidirectional pipeline at one point and return a JSON-ready dict."""
    report = bidirectional_report(params)
    return {"params": point_params(params), **report.as_dict()}


def point_params(params: SystemParams) -> dict:
    return {**asdict(params), "K": abs(params.K)}


def report_lines(report: BidirectionalReport) -> Sequence[str]:
    """Human-readable summary of a bidirectional report."""
    lines = []
    for label, rep in (("K>0 [100]", report.forward), ("K<0 [110]", report.backward)):
        lines.append(f"{label}: stable={rep.stable} abscissa={rep.spectral_abscissa:.6g}")
        if rep.stable:
            lines.append(f"  residual={rep.residual:.3e} E_ab={rep.E_ab:.6g} E_am={rep.E_am:.6g} "
                         f"E_mb={rep.E_mb:.6g} R_min={rep.R_min:.6g}")
    ratios = " ".join(f"{k}={'undefined' if v is None else format(v, '.6g')}"
                      for k, v in report.ratios.items())
    lines.append(f"contrast: {ratios}")
    return lines
