"""Multi-seed experiment harness: per-run rows, summaries and the sensitivity grid."""
from __future__ import annotations

import io
import statistics
import time
from dataclasses import dataclass, replace
from typing import Sequence

from .generate import GenerationSpec, generate_instance
from .model import ProblemInstance
from .optimize import Algorithm, AlgorithmConfig, run

CSV_COLUMNS = (
    "rank",
    "algorithm",
    "run",
    "revenue",
    "time_s",
    "scheduled_trains",
    "delta_dt_min",
    "delta_tt_min",
)


@dataclass(frozen=True)
class RunRow:
    algorithm: str
    run: int
    revenue: float
    time_s: float
    scheduled_trains: int
    delta_dt_min: float
    delta_tt_min: float


@dataclass(frozen=True)
class AlgorithmSummary:
    algorithm: str
    mean_time: float
    std_time: float
    mean_revenue: float
    std_revenue: float
    mean_trains: float
    std_trains: float


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[RunRow, ...]  # sorted by revenue, descending
    summaries: tuple[AlgorithmSummary, ...]
    base_seed: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for rank, row in enumerate(self.rows, start=1):
            buf.write(
                f"{rank},{row.algorithm},{row.run},{row.revenue:.6f},"
                f"{row.time_s:.6f},{row.scheduled_trains},"
                f"{row.delta_dt_min:.6f},{row.delta_tt_min:.6f}\n"
            )
        return buf.getvalue()


def _summarize(algorithm: str, rows: Sequence[RunRow]) -> AlgorithmSummary:
    def mu_sigma(values):
        mu = statistics.fmean(values)
        sigma = statistics.pstdev(values) if len(values) > 1 else 0.0
        return mu, sigma

    mt, st = mu_sigma([r.time_s for r in rows])
    mr, sr = mu_sigma([r.revenue for r in rows])
    mn, sn = mu_sigma([r.scheduled_trains for r in rows])
    return AlgorithmSummary(algorithm, mt, st, mr, sr, mn, sn)


def run_experiment(
    instance: ProblemInstance,
    algorithms: Sequence[AlgorithmConfig],
    runs_per_algorithm: int = 5,
    base_seed: int = 0,
) -> ExperimentReport:
    """Run every (algorithm, run) cell with seed = base_seed + run index."""
    if runs_per_algorithm < 1:
        raise ValueError("runs_per_algorithm must be >= 1")
    rows = []
    for config in algorithms:
        name = config.algorithm.value
        for run_idx in range(1, runs_per_algorithm + 1):
            cell = replace(config, seed=base_seed + run_idx - 1)
            started = time.monotonic()
            trace = run(instance, cell)
            elapsed = time.monotonic() - started
            rows.append(
                RunRow(
                    algorithm=name,
                    run=run_idx,
                    revenue=trace.best_fitness[-1],
                    time_s=elapsed,
                    scheduled_trains=trace.result.n_scheduled,
                    delta_dt_min=trace.result.delta_dt,
                    delta_tt_min=trace.result.delta_tt,
                )
            )
    rows.sort(key=lambda r: (-r.revenue, r.algorithm, r.run))
    names = [c.algorithm.value for c in algorithms]
    summaries = tuple(
        _summarize(name, [r for r in rows if r.algorithm == name]) for name in names
    )
    return ExperimentReport(rows=tuple(rows), summaries=summaries, base_seed=base_seed)


def sensitivity_grid(
    instance_spec: GenerationSpec,
    omega_values: Sequence[float],
    delta_values: Sequence[float],
    algorithms: Sequence[AlgorithmConfig],
    runs: int = 1,
    base_seed: int = 0,
) -> dict[tuple[float, float], float]:
    """Mean revenue per (omega, delta) cell, over all algorithms and runs."""
    if not omega_values or not delta_values:
        raise ValueError("grids must be non-empty")
    grid = {}
    for omega in omega_values:
        for delta in delta_values:
            params = replace(instance_spec.params, omega=omega, delta=delta)
            spec = replace(instance_spec, params=params)
            instance = generate_instance(spec)
            report = run_experiment(instance, algorithms, runs, base_seed)
            grid[(omega, delta)] = statistics.fmean(r.revenue for r in report.rows)
    return grid


def grid_to_csv(grid: dict[tuple[float, float], float]) -> str:
    """Heatmap-ready CSV: one row per omega, one column per delta."""
    omegas = sorted({k[0] for k in grid})
    deltas = sorted({k[1] for k in grid})
    buf = io.StringIO()
    buf.write("omega_min\\delta_min," + ",".join(str(d) for d in deltas) + "\n")
    for omega in omegas:
        cells = ",".join(f"{grid[(omega, d)]:.6f}" for d in deltas)
        buf.write(f"{omega},{cells}\n")
    return buf.getvalue()
