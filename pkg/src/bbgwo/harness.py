"""Repeated-trial experiments and the GWO-vs-BBGWO results table."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import benchmarks
from .optimizers import OptimizerId, RunConfig, run

__all__ = [
    "DEFAULT_FUNCTIONS",
    "ExperimentPlan",
    "ResultsTable",
    "results_table",
    "TrialStats",
    "run_plan",
    "run_trials",
    "success_count",
]

# Function 12 needs unpublished constants, so default plans stop at 11.
DEFAULT_FUNCTIONS = tuple(range(1, 12))
TABLE_OPTIMIZERS = (OptimizerId.GWO, OptimizerId.BBGWO)
TABLE_COLUMNS = (
    "function_id", "min",
    "gwo_mean", "gwo_var", "gwo_success",
    "bbgwo_mean", "bbgwo_var", "bbgwo_success",
)


@dataclass
class TrialStats:
    function_id: int
    optimizer: str
    trials: int
    mean_best: float
    variance_best: float
    success_count: int
    best_values: list[float] = field(default_factory=list)

    @classmethod
    def from_values(cls, function_id: int, optimizer, values: Sequence[float],
                    reference_min: float, tol: float) -> TrialStats:
        v = np.asarray(values, dtype=float)
        return cls(
            function_id=function_id,
            optimizer=OptimizerId.parse(optimizer).value,
            trials=int(v.size),
            mean_best=float(np.mean(v)),
            variance_best=float(np.var(v)),  # population variance, divisor = trials
            success_count=success_count(v, reference_min, tol),
            best_values=[float(x) for x in v],
        )


@dataclass(frozen=True)
class ExperimentPlan:
    functions: tuple[int, ...] = DEFAULT_FUNCTIONS
    optimizers: tuple[OptimizerId, ...] = TABLE_OPTIMIZERS
    trials: int = 30
    base_seed: int = 0
    population_size: int = 20
    max_iterations: int = 500
    tolerance: float = 1e-3
    elitist_leaders: bool = True
    f12_params: Optional[dict] = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        object.__setattr__(self, "functions", tuple(int(f) for f in self.functions))
        object.__setattr__(self, "optimizers", tuple(OptimizerId.parse(o) for o in self.optimizers))
        for fid in self.functions:
            benchmarks.get(fid)  # raises on unknown ids

    @property
    def cells(self) -> list[tuple[int, OptimizerId]]:
        return [(f, o) for f in self.functions for o in self.optimizers]


def success_count(best_values: Iterable[float], reference_min: float, tol: float = 1e-3) -> int:
    """Number of results strictly closer than ``tol`` above the reference minimum.

    Results below the reference count as successes.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return sum(1 for v in best_values if v - reference_min < tol)


def _one_trial(args) -> float:
    function_id, optimizer, seed, n, t, elitist, f12 = args
    spec = benchmarks.get(function_id, f12)
    config = RunConfig(optimizer, n, t, seed, elitist)
    return run(config, spec).best_fitness


def run_trials(function_id: int, optimizer, trials: int = 30, base_seed: int = 0,
               population_size: int = 20, max_iterations: int = 500, tol: float = 1e-3,
               elitist_leaders: bool = True, f12_params: Optional[dict] = None,
               workers: Optional[int] = None) -> TrialStats:
    """Run ``trials`` independent optimisations; trial ``i`` uses seed ``base_seed + i``.

    With ``workers > 1`` trials run in a process pool; results are identical
    to the sequential path because every trial owns its seed.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    spec = benchmarks.get(function_id, f12_params)
    optimizer = OptimizerId.parse(optimizer)
    jobs = [
        (spec.id, optimizer, base_seed + i, population_size, max_iterations, elitist_leaders, f12_params)
        for i in range(trials)
    ]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_one_trial, jobs))
    else:
        values = [_one_trial(job) for job in jobs]
    return TrialStats.from_values(spec.id, optimizer, values, spec.reference_minimum, tol)


def run_plan(plan: ExperimentPlan, workers: Optional[int] = None, progress=None) -> list[TrialStats]:
    out = []
    for fid, opt in plan.cells:
        stats = run_trials(
            fid, opt, plan.trials, plan.base_seed, plan.population_size, plan.max_iterations,
            plan.tolerance, plan.elitist_leaders, plan.f12_params, workers,
        )
        if progress is not None:
            progress(stats)
        out.append(stats)
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


@dataclass
class ResultsTable:
    """One row per function: reference minimum, then mean/variance/successes per optimizer.

    Cells for an optimizer that was not run are ``None`` (empty in CSV).
    """

    rows: list[dict]
    stats: list[TrialStats] = field(default_factory=list, compare=False)

    @classmethod
    def from_stats(cls, stats: Sequence[TrialStats], f12_params: Optional[dict] = None) -> ResultsTable:
        by_cell = {(s.function_id, s.optimizer): s for s in stats}
        rows = []
        for fid in sorted({s.function_id for s in stats}):
            row = {"function_id": fid, "min": benchmarks.get(fid, f12_params).reference_minimum}
            for opt in TABLE_OPTIMIZERS:
                s = by_cell.get((fid, opt.value))
                row[f"{opt.value}_mean"] = s.mean_best if s else None
                row[f"{opt.value}_var"] = s.variance_best if s else None
                row[f"{opt.value}_success"] = s.success_count if s else None
            rows.append(row)
        return cls(rows, list(stats))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for row in self.rows:
            writer.writerow([_fmt(row[c]) for c in TABLE_COLUMNS])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ResultsTable:
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != TABLE_COLUMNS:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        rows = []
        for raw in reader:
            row = {}
            for c in TABLE_COLUMNS:
                cell = raw[c]
                if cell == "":
                    row[c] = None
                elif c == "function_id" or c.endswith("_success"):
                    row[c] = int(cell)
                else:
                    row[c] = float(cell)
            rows.append(row)
        return cls(rows)

    def to_json(self) -> str:
        doc = {
            "columns": list(TABLE_COLUMNS),
            "rows": self.rows,
            "trials": [asdict(s) for s in self.stats],
        }
        return json.dumps(doc, indent=2, allow_nan=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def results_table(stats: Sequence[TrialStats], plan: Optional[ExperimentPlan] = None) -> ResultsTable:
    """Tabulate ``stats``; with ``plan`` given, every planned cell must be present."""
    if plan is not None:
        have = {(s.function_id, s.optimizer) for s in stats}
        missing = [(f, o.value) for f, o in plan.cells if (f, o.value) not in have]
        if missing:
            raise ValueError(f"missing results for cells {missing}")
    return ResultsTable.from_stats(stats, plan.f12_params if plan else None)
