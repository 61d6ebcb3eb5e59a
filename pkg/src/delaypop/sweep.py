"""Deterministic parameter-grid studies over the stability criteria.

A sweep evaluates analysis.classify (with simulation) on every cell of a
1- or 2-axis parameter grid crossed with a list of delays, and serializes
the per-cell verdicts to CSV.  Cells are independent; a worker pool may
evaluate them concurrently, but output order and content are identical to
serial evaluation (each cell's random histories are seeded by the config
seed and the cell's row-major index).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import analysis
from .analysis import REPORT_COLUMNS, SimOptions, classify, default_histories, report_csv_fields
from .model import BOBWHITE, PIELOU, make_bobwhite, make_pielou


@dataclass(frozen=True)
class Axis:
    param: str
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def values(self) -> list[float]:
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if self.spacing == "linear":
            step = (self.max - self.min) / (self.count - 1)
            return [self.min + i * step for i in range(self.count)]
        if self.spacing == "log":
            if self.min <= 0:
                raise ValueError("log axis requires min > 0")
            lo, hi = math.log(self.min), math.log(self.max)
            step = (hi - lo) / (self.count - 1)
            return [math.exp(lo + i * step) for i in range(self.count)]
        raise ValueError(f"unknown spacing {self.spacing!r}")


@dataclass(frozen=True)
class SweepConfig:
    family: str
    fixed: dict[str, float]
    axes: tuple[Axis, ...]
    m_values: tuple[int, ...] = (0,)
    n_steps: int = 20000
    burn_in: int = 10000
    tolerance: float = 1e-6
    histories: tuple[tuple[float, ...], ...] | None = None
    n_histories: int = 3
    seed: int = 0
    grid_size: int = analysis.DEFAULT_GRID_SIZE


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: list[dict[str, str]] = field(default_factory=list)


def load_config(path: str) -> SweepConfig:
    """Parse a JSON sweep configuration file."""
    with open(path) as fh:
        raw = json.load(fh)
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> SweepConfig:
    family = raw["family"]
    if family not in (BOBWHITE, PIELOU):
        raise ValueError(f"unknown family {family!r}")
    axes = tuple(Axis(**a) for a in raw.get("axes", []))
    if not 1 <= len(axes) <= 2:
        raise ValueError("config must declare 1 or 2 axes")
    m_raw = raw.get("m", 0)
    m_values = tuple(m_raw) if isinstance(m_raw, (list, tuple)) else (int(m_raw),)
    if any(m < 0 for m in m_values):
        raise ValueError("delays must be >= 0")
    sim = raw.get("sim", {})
    histories = sim.get("histories", "default")
    if histories == "default":
        histories = None
    else:
        histories = tuple(tuple(float(v) for v in h) for h in histories)
    return SweepConfig(
        family=family,
        fixed={k: float(v) for k, v in raw.get("fixed", {}).items()},
        axes=axes,
        m_values=m_values,
        n_steps=int(sim.get("n_steps", 20000)),
        burn_in=int(sim.get("burn_in", 10000)),
        tolerance=float(sim.get("tolerance", 1e-6)),
        histories=histories,
        n_histories=int(sim.get("n_histories", 3)),
        seed=int(raw.get("seed", 0)),
        grid_size=int(raw.get("grid_size", analysis.DEFAULT_GRID_SIZE)),
    )


def _cells(config: SweepConfig) -> list[dict[str, float]]:
    """Row-major cell parameter maps: axis0 outermost, then axis1, then m."""
    axis_values = [ax.values() for ax in config.axes]
    cells = []
    if len(axis_values) == 1:
        combos = [{config.axes[0].param: v} for v in axis_values[0]]
    else:
        combos = [
            {config.axes[0].param: v0, config.axes[1].param: v1}
            for v0 in axis_values[0]
            for v1 in axis_values[1]
        ]
    for combo in combos:
        for m in config.m_values:
            params = dict(config.fixed)
            params.update(combo)
            params["m"] = m
            cells.append(params)
    return cells


def _build_model(family: str, params: dict[str, float]):
    if family == BOBWHITE:
        return make_bobwhite(params["alpha"], params["beta"], params["r"])
    return make_pielou(params["beta"], params["lambda"])


def _skipped_row(family: str, params: dict[str, float]) -> dict[str, str]:
    row = {c: "" for c in REPORT_COLUMNS}
    row["family"] = family
    for key, col in (("alpha", "alpha"), ("beta", "beta"), ("r", "r"), ("lambda", "lambda")):
        if key in params:
            row[col] = f"{params[key]:.9g}"
    row["m"] = str(int(params["m"]))
    row["skipped"] = "true"
    return row


def _eval_cell(args) -> dict[str, str]:
    config, index, params = args
    m = int(params["m"])
    try:
        model = _build_model(config.family, params)
    except ValueError:
        return _skipped_row(config.family, params)
    histories = config.histories
    if histories is None:
        # per-cell seeding keyed by row index: parallel == serial
        histories = default_histories(model, m, config.n_histories, (config.seed, index))
    sim = SimOptions(
        n_steps=config.n_steps,
        burn_in=config.burn_in,
        tol=config.tolerance,
        histories=histories,
    )
    report = classify(model, m, sim=sim, grid_size=config.grid_size)
    return report_csv_fields(report)


def run_sweep(config: SweepConfig, jobs: int = 1) -> SweepResult:
    """Evaluate every grid cell; invalid cells are marked skipped, not fatal."""
    cells = _cells(config)
    tasks = [(config, i, params) for i, params in enumerate(cells)]
    if jobs == 1:
        rows = [_eval_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_eval_cell, tasks, chunksize=max(1, len(tasks) // (4 * jobs) or 1)))
    if all(row["skipped"] == "true" for row in rows):
        raise ValueError("every grid cell violates the family's parameter domain")
    result = SweepResult(config=config, rows=rows)
    _check_m_monotonicity(result)
    return result


def result_to_csv(result: SweepResult) -> str:
    lines = [",".join(REPORT_COLUMNS)]
    for row in result.rows:
        lines.append(",".join(row[c] for c in REPORT_COLUMNS))
    return "\n".join(lines) + "\n"


def _check_m_monotonicity(result: SweepResult) -> None:
    """The Graef/Liz thresholds decrease in m, so for fixed parameters a
    verdict that holds at some m must hold at every smaller m."""
    groups: dict[tuple, list] = {}
    for row in result.rows:
        if row["skipped"] == "true" or row["family"] != BOBWHITE:
            continue
        key = (row["alpha"], row["beta"], row["r"])
        groups.setdefault(key, []).append((int(row["m"]), row["graef_ok"] == "true", row["liz_ok"] == "true"))
    for key, entries in groups.items():
        entries.sort()
        for (m0, g0, l0), (m1, g1, l1) in zip(entries, entries[1:]):
            if (g1 and not g0) or (l1 and not l0):
                raise RuntimeError(f"criterion region not monotone in m at cell {key}")
