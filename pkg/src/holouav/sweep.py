"""Monte-Carlo sweeps over SNR, RHS size and user count with CSV output.

Output files in ``out_dir``:

``results.csv``
    one row per (mode, snr_db, m, d, realization), columns :data:`RESULT_COLUMNS`.
``summary.csv``
    mean/std of the final sum rate per (mode, snr_db, m, d) cell.
``traj_<id>.csv``
    UAV path and sum rate per outer iteration (only with ``trajectories=True``);
    ``t = 0`` is the starting point.

Benchmark and proposed runs share the user layout of each realization index.
"""

from __future__ import annotations

import csv
import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .alternating import DriverConfig, run, run_benchmark
from .errors import HoloUavError
from .scenario import Scenario

log = logging.getLogger(__name__)

RESULT_COLUMNS = ("mode", "snr_db", "m", "d", "realization", "final_sum_rate_bps_hz",
                  "outer_iters", "qx", "qy", "qz", "status", "guard_events")
SUMMARY_COLUMNS = ("mode", "snr_db", "m", "d", "runs", "ok", "mean_sum_rate_bps_hz",
                   "std_sum_rate_bps_hz")
TRAJ_COLUMNS = ("t", "q_x", "q_y", "q_z", "R")
MODES = ("proposed", "benchmark")


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def parse_rhs(text: str) -> tuple:
    """``"8x8"`` -> ``(8, 8)``."""
    try:
        mx, my = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ValueError(f"RHS size must look like '8x8', got {text!r}") from None
    return mx, my


@dataclass(frozen=True)
class SweepSpec:
    snr_db_list: tuple = (30.0,)
    m_list: tuple = ((8, 8),)
    d_list: tuple = (2,)
    realizations: int = 20
    mode: str = "both"

    def __post_init__(self):
        if not (self.snr_db_list and self.m_list and self.d_list):
            raise ValueError("sweep lists must be non-empty")
        if self.realizations < 1:
            raise ValueError("need at least one realization")
        if self.mode not in MODES + ("both",):
            raise ValueError(f"mode must be proposed, benchmark or both, got {self.mode!r}")

    @property
    def modes(self) -> tuple:
        return MODES if self.mode == "both" else (self.mode,)

    def jobs(self):
        """Jobs in output order: cell-major, realization-minor."""
        for mode, snr, (mx, my), d in itertools.product(
                self.modes, self.snr_db_list, self.m_list, self.d_list):
            for r in range(self.realizations):
                yield mode, float(snr), (int(mx), int(my)), int(d), r


@dataclass
class RunResult:
    mode: str
    snr_db: float
    m: int
    d: int
    realization: int
    final_sum_rate: float
    outer_iters: int
    q: tuple
    status: str
    guard_events: int
    trajectory: list

    def row(self) -> list:
        return [self.mode, fmt(self.snr_db), self.m, self.d, self.realization,
                fmt(self.final_sum_rate), self.outer_iters, *(fmt(v) for v in self.q),
                self.status, self.guard_events]

    @property
    def traj_id(self) -> str:
        return f"{self.mode}_snr{self.snr_db:g}_m{self.m}_d{self.d}_r{self.realization}"


def cell_scenario(base: Scenario, snr_db: float, rhs: tuple, d: int, realization: int) -> Scenario:
    surface = replace(base.surface, m_x=rhs[0], m_y=rhs[1])
    return replace(base, snr_db=snr_db, surface=surface, num_users=d, realization=realization)


def run_job(job, base: Scenario, cfg: DriverConfig) -> RunResult:
    mode, snr, rhs, d, r = job
    m = rhs[0] * rhs[1]
    try:
        sc = cell_scenario(base, snr, rhs, d, r)
        fn = run if mode == "proposed" else run_benchmark
        state, trace = fn(sc, cfg)
    except (HoloUavError, ValueError) as exc:
        log.warning("%s snr=%g m=%d d=%d r=%d failed: %s", mode, snr, m, d, r, exc)
        status = f"{type(exc).__name__}: {exc}".replace("\n", " ")
        return RunResult(mode, snr, m, d, r, float("nan"), 0, (float("nan"),) * 3, status, 0, [])
    traj = [(0, *trace.initial_q, trace.initial_rate)]
    traj += [(rec.iteration, *rec.q, rec.sum_rate) for rec in trace.records]
    return RunResult(
        mode, snr, m, d, r, trace.final_rate, len(trace), tuple(state.q), "ok",
        sum(rec.guard_events for rec in trace.records), traj,
    )


def _run_job_star(args):
    return run_job(*args)


def execute(spec: SweepSpec, base: Scenario, cfg: DriverConfig, workers: int = 1) -> list:
    """Run every job; results come back in :meth:`SweepSpec.jobs` order."""
    jobs = [(job, base, cfg) for job in spec.jobs()]
    if workers <= 1:
        return [_run_job_star(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job_star, jobs, chunksize=1))


def summarize(results: list) -> list:
    cells = {}
    for res in results:
        cells.setdefault((res.mode, res.snr_db, res.m, res.d), []).append(res)
    rows = []
    for (mode, snr, m, d), group in cells.items():
        ok = np.array([g.final_sum_rate for g in group if g.status == "ok"])
        mean = float(ok.mean()) if ok.size else float("nan")
        std = float(ok.std()) if ok.size else float("nan")
        rows.append({"mode": mode, "snr_db": snr, "m": m, "d": d, "runs": len(group),
                     "ok": int(ok.size), "mean_sum_rate_bps_hz": mean, "std_sum_rate_bps_hz": std})
    return rows


def write_results(results: list, out_dir: str, trajectories: bool = False) -> list:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "results.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for res in results:
            writer.writerow(res.row())
    summary = summarize(results)
    with open(os.path.join(out_dir, "summary.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in summary:
            writer.writerow([fmt(row[c]) for c in SUMMARY_COLUMNS])
    if trajectories:
        for res in results:
            if not res.trajectory:
                continue
            with open(os.path.join(out_dir, f"traj_{res.traj_id}.csv"), "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(TRAJ_COLUMNS)
                for t, *vals in res.trajectory:
                    writer.writerow([t, *(fmt(v) for v in vals)])
    return summary


def run_sweep(spec: SweepSpec, base: Scenario, out_dir: str | None = None,
              cfg: DriverConfig = DriverConfig(), workers: int = 1, trajectories: bool = False):
    """Execute the sweep and (if ``out_dir`` is given) write the CSV files.

    Returns ``(results, summary)``. Failed runs are kept as rows whose status
    column carries the error.
    """
    results = execute(spec, base, cfg, workers)
    if out_dir is not None:
        summary = write_results(results, out_dir, trajectories)
    else:
        summary = summarize(results)
    return results, summary
