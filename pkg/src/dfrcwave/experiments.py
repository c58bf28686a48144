"""Monte-Carlo experiment harness: rate curves, beampatterns, sidelobe profiles.

Each trial draws a channel and symbol block from its own seed stream,
computes the covariance-constrained benchmark waveform, runs the
manifold solver from a warm or random start, and scores both waveforms.
Trials are independent; aggregation is ordered by trial index so the
same config and seed always produce identical reports.
"""
from __future__ import annotations

import dataclasses
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import matio, svgplot
from .closedform import (
    CovarianceTarget,
    closed_form_waveform,
    mainlobe_target,
    omni_covariance,
)
from .manifold import ManifoldSpec
from .metrics import (
    beampattern,
    isl_power,
    mui_power,
    stack_problem,
    sum_rate_from_mui,
    waveform_covariance,
)
from .rcg import ArmijoConfig, RcgConfig, solve
from .signals import generate_channel, generate_symbols, lag_product

ANGLE_GRID_DEG = np.arange(-90.0, 91.0, 1.0)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 16
    k: int = 4
    length: int = 100
    max_lag: int = 8
    total_power: float = 1.0
    rho1: float = 0.15
    rho2: float = 0.7
    rho3: float = 0.15
    snr_grid: tuple = tuple(range(0, 22, 2))
    trials: int = 100
    seed: int = 0
    design: str = "omni"  # omni | directional | path to a covariance file
    start: str = "warm"  # warm | random
    rcg: RcgConfig = field(default_factory=RcgConfig)
    workers: int = 1
    include_traces: bool = True

    def __post_init__(self):
        if min(self.rho1, self.rho2, self.rho3) < 0:
            raise ValueError("weights must be nonnegative")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if len(self.snr_grid) == 0:
            raise ValueError("SNR grid must be nonempty")
        if self.start not in ("warm", "random"):
            raise ValueError(f"unknown start mode: {self.start!r}")
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        rcg_data = data.pop("rcg", None)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "snr_grid" in data:
            data["snr_grid"] = tuple(data["snr_grid"])
        if rcg_data is not None:
            armijo_data = dict(rcg_data).pop("armijo", None)
            rcg_kwargs = {k: v for k, v in rcg_data.items() if k != "armijo"}
            if armijo_data is not None:
                rcg_kwargs["armijo"] = ArmijoConfig(**armijo_data)
            data["rcg"] = RcgConfig(**rcg_kwargs)
        return cls(**data)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["snr_grid"] = list(self.snr_grid)
        return out


@dataclass
class TrialResult:
    mui_cf: float
    mui_rcg: float
    isl_cf: float
    isl_rcg: float
    cov_cf: np.ndarray
    cov_rcg: np.ndarray
    lobe_cf: np.ndarray  # per-lag linear ratios, lags 1..P
    lobe_rcg: np.ndarray
    iterations: int
    final_grad_norm: float
    converged: bool
    stalled: bool
    max_infeasibility: float
    trace_rows: list


@dataclass
class ExperimentReport:
    config: dict
    snr_db: list
    rate_cf_mean: list
    rate_cf_std: list
    rate_rcg_mean: list
    rate_rcg_std: list
    angle_deg: list
    bp_target: list
    bp_cf: list
    bp_rcg: list
    bp_msd: float
    lags: list
    sidelobe_cf_db: list
    sidelobe_rcg_db: list
    isl_reduction_db: list
    isl_reduction_db_mean: float
    iterations: list
    stall_count: int
    degraded: bool
    synth_converged: bool
    wall_time_s: float
    traces: list


def resolve_design(cfg: ExperimentConfig) -> CovarianceTarget:
    if cfg.design == "omni":
        return omni_covariance(cfg.n, cfg.total_power)
    if cfg.design == "directional":
        return mainlobe_target(cfg.n, cfg.total_power)
    path = Path(cfg.design)
    if not path.exists():
        raise ValueError(f"design must be omni, directional, or a covariance file; got {cfg.design!r}")
    return CovarianceTarget(matio.read_matrix(path), cfg.total_power)


def _normalized_lobe(x: np.ndarray, max_lag: int) -> np.ndarray:
    zero = float(np.linalg.norm(x @ x.conj().T) ** 2)
    return np.array(
        [
            float(np.linalg.norm(lag_product(x, x, p)) ** 2) / zero
            for p in range(1, max_lag + 1)
        ]
    )


def run_trial(cfg: ExperimentConfig, target: CovarianceTarget, child_seed) -> TrialResult:
    rng = np.random.default_rng(child_seed)
    h = generate_channel(cfg.k, cfg.n, rng)
    s = generate_symbols(cfg.k, cfg.length, "QPSK", rng)
    x_cf = closed_form_waveform(h, s, target, cfg.length)
    spec = ManifoldSpec.from_power(cfg.n, cfg.length, cfg.total_power)
    prob = stack_problem(h, s, x_cf, cfg.rho1, cfg.rho2, cfg.rho3, cfg.max_lag)
    x_init = x_cf if cfg.start == "warm" else None
    x_rcg, trace = solve(prob, spec, cfg.rcg, x0=x_init, seed=rng)
    return TrialResult(
        mui_cf=mui_power(h, x_cf, s),
        mui_rcg=mui_power(h, x_rcg, s),
        isl_cf=isl_power(x_cf, cfg.max_lag),
        isl_rcg=isl_power(x_rcg, cfg.max_lag),
        cov_cf=waveform_covariance(x_cf),
        cov_rcg=waveform_covariance(x_rcg),
        lobe_cf=_normalized_lobe(x_cf, cfg.max_lag),
        lobe_rcg=_normalized_lobe(x_rcg, cfg.max_lag),
        iterations=trace.iterations,
        final_grad_norm=trace.grad_norm[-1],
        converged=trace.converged,
        stalled=trace.stalled,
        max_infeasibility=max(trace.feasibility),
        trace_rows=list(trace.rows()),
    )


def _trial_job(args):
    cfg, target, child = args
    return run_trial(cfg, target, child)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    start_time = time.perf_counter()
    target = resolve_design(cfg)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    jobs = [(cfg, target, child) for child in children]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_trial_job, jobs))
    else:
        results = [_trial_job(job) for job in jobs]

    k, length = cfg.k, cfg.length
    rate_cf_mean, rate_cf_std, rate_rcg_mean, rate_rcg_std = [], [], [], []
    for snr_db in cfg.snr_grid:
        n0 = 10.0 ** (-snr_db / 10.0)
        cf = np.array([sum_rate_from_mui(r.mui_cf, k, length, n0) for r in results])
        rc = np.array([sum_rate_from_mui(r.mui_rcg, k, length, n0) for r in results])
        rate_cf_mean.append(float(cf.mean()))
        rate_cf_std.append(float(cf.std()))
        rate_rcg_mean.append(float(rc.mean()))
        rate_rcg_std.append(float(rc.std()))

    angles = np.deg2rad(ANGLE_GRID_DEG)
    bp_target = beampattern(target.r, angles)
    bp_cf = beampattern(sum(r.cov_cf for r in results) / len(results), angles)
    bp_rcg = beampattern(sum(r.cov_rcg for r in results) / len(results), angles)
    bp_msd = float(np.mean((bp_rcg - bp_cf) ** 2))

    lobe_cf = np.mean([r.lobe_cf for r in results], axis=0)
    lobe_rcg = np.mean([r.lobe_rcg for r in results], axis=0)
    lags = list(range(-cfg.max_lag, 0)) + list(range(1, cfg.max_lag + 1))
    mirror = lambda arr: [float(v) for v in arr[::-1]] + [float(v) for v in arr]
    sidelobe_cf_db = mirror(10.0 * np.log10(lobe_cf))
    sidelobe_rcg_db = mirror(10.0 * np.log10(lobe_rcg))

    reductions = [
        10.0 * np.log10(r.isl_cf / r.isl_rcg) if r.isl_rcg > 0 else np.inf
        for r in results
    ]
    stall_count = sum(r.stalled for r in results)

    return ExperimentReport(
        config=cfg.to_dict(),
        snr_db=[float(v) for v in cfg.snr_grid],
        rate_cf_mean=rate_cf_mean,
        rate_cf_std=rate_cf_std,
        rate_rcg_mean=rate_rcg_mean,
        rate_rcg_std=rate_rcg_std,
        angle_deg=[float(v) for v in ANGLE_GRID_DEG],
        bp_target=[float(v) for v in bp_target],
        bp_cf=[float(v) for v in bp_cf],
        bp_rcg=[float(v) for v in bp_rcg],
        bp_msd=bp_msd,
        lags=lags,
        sidelobe_cf_db=sidelobe_cf_db,
        sidelobe_rcg_db=sidelobe_rcg_db,
        isl_reduction_db=[float(v) for v in reductions],
        isl_reduction_db_mean=float(np.mean(reductions)),
        iterations=[r.iterations for r in results],
        stall_count=stall_count,
        degraded=stall_count > cfg.trials // 2,
        synth_converged=target.synth_converged,
        wall_time_s=time.perf_counter() - start_time,
        traces=[r.trace_rows for r in results] if cfg.include_traces else [],
    )


def emit_outputs(report: ExperimentReport, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def table(name, header, rows):
        path = out / name
        matio.write_csv(path, header, rows)
        written.append(path)

    table(
        "rate_curve.csv",
        ["snr_db", "closed_form_mean", "closed_form_std", "rcg_mean", "rcg_std"],
        zip(
            report.snr_db,
            report.rate_cf_mean,
            report.rate_cf_std,
            report.rate_rcg_mean,
            report.rate_rcg_std,
        ),
    )
    table(
        "beampattern.csv",
        ["angle_deg", "target", "closed_form", "rcg"],
        zip(report.angle_deg, report.bp_target, report.bp_cf, report.bp_rcg),
    )
    table(
        "sidelobes.csv",
        ["lag", "closed_form_db", "rcg_db"],
        zip(report.lags, report.sidelobe_cf_db, report.sidelobe_rcg_db),
    )
    if report.traces:
        trace_dir = out / "trace"
        trace_dir.mkdir(exist_ok=True)
        for t, rows in enumerate(report.traces):
            path = trace_dir / f"trial_{t:03d}.csv"
            matio.write_csv(
                path,
                ["iter", "objective", "grad_norm", "step", "feasibility", "lambda"],
                rows,
            )
            written.append(path)

    svgplot.line_plot(
        out / "rate_curve.svg",
        [
            (report.snr_db, report.rate_cf_mean, "covariance-constrained"),
            (report.snr_db, report.rate_rcg_mean, "manifold solver"),
        ],
        "Average sum rate vs SNR",
        "SNR (dB)",
        "sum rate (bits/s/Hz)",
    )
    to_db = lambda vals: [10.0 * np.log10(max(v, 1e-12)) for v in vals]
    svgplot.line_plot(
        out / "beampattern.svg",
        [
            (report.angle_deg, to_db(report.bp_target), "target"),
            (report.angle_deg, to_db(report.bp_cf), "covariance-constrained"),
            (report.angle_deg, to_db(report.bp_rcg), "manifold solver"),
        ],
        "Transmit beampattern",
        "angle (deg)",
        "gain (dB)",
    )
    svgplot.line_plot(
        out / "sidelobes.svg",
        [
            (report.lags, report.sidelobe_cf_db, "covariance-constrained"),
            (report.lags, report.sidelobe_rcg_db, "manifold solver"),
        ],
        "Normalized range sidelobe level",
        "lag",
        "level (dB)",
    )
    written += [out / "rate_curve.svg", out / "beampattern.svg", out / "sidelobes.svg"]

    meta = {
        "config": report.config,
        "bp_msd": report.bp_msd,
        "isl_reduction_db_mean": report.isl_reduction_db_mean,
        "isl_reduction_db": report.isl_reduction_db,
        "iterations": report.iterations,
        "stall_count": report.stall_count,
        "degraded": report.degraded,
        "synth_converged": report.synth_converged,
        "wall_time_s": report.wall_time_s,
    }
    meta_path = out / "metadata.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    written.append(meta_path)
    return written
