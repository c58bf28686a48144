"""HTTP service exposing the solver, analyses, and the experiment harness."""
from __future__ import annotations

import dataclasses

import numpy as np
from fastapi import FastAPI, HTTPException

from . import __version__
from .closedform import CovarianceTarget, closed_form_waveform, mainlobe_target, omni_covariance
from .experiments import ExperimentConfig, run_experiment
from .manifold import ManifoldSpec
from .metrics import beampattern, isl_power, mui_power, sidelobe_profile, stack_problem, waveform_covariance
from .rcg import ArmijoConfig, RcgConfig, solve
from .schemas import (
    BeampatternRequest,
    BeampatternResponse,
    ExperimentRequest,
    ExperimentResponse,
    HealthResponse,
    RcgModel,
    SidelobeRequest,
    SidelobeResponse,
    SolveRequest,
    SolveResponse,
    TraceRow,
    ComplexMatrix,
)

app = FastAPI(title="dfrcwave", version=__version__)


def _rcg_config(model: RcgModel) -> RcgConfig:
    return RcgConfig(
        epsilon=model.epsilon,
        k_max=model.k_max,
        armijo=ArmijoConfig(**model.armijo.model_dump()),
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/solve", response_model=SolveResponse)
def solve_endpoint(req: SolveRequest) -> SolveResponse:
    try:
        h = req.h.array()
        s = req.s.array()
        k, n = h.shape
        length = s.shape[1]
        if req.rd is not None:
            target = CovarianceTarget(req.rd.array(), req.total_power)
        elif req.design == "omni":
            target = omni_covariance(n, req.total_power)
        elif req.design == "directional":
            target = mainlobe_target(n, req.total_power)
        else:
            raise ValueError(f"unknown design: {req.design!r}")
        x_cf = closed_form_waveform(h, s, target, length)
        spec = ManifoldSpec.from_power(n, length, req.total_power)
        prob = stack_problem(h, s, x_cf, req.rho1, req.rho2, req.rho3, req.max_lag)
        x0 = x_cf if req.start == "warm" else None
        x, trace = solve(prob, spec, _rcg_config(req.rcg), x0=x0, seed=req.seed)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return SolveResponse(
        x=ComplexMatrix.wrap(x),
        x_closed_form=ComplexMatrix.wrap(x_cf),
        iterations=trace.iterations,
        converged=trace.converged,
        stalled=trace.stalled,
        mui_closed_form=mui_power(h, x_cf, s),
        mui=mui_power(h, x, s),
        isl_closed_form=isl_power(x_cf, req.max_lag),
        isl=isl_power(x, req.max_lag),
        trace=[
            TraceRow(
                iter=i, objective=o, grad_norm=g, step=st, feasibility=fe, lam=la
            )
            for i, o, g, st, fe, la in trace.rows()
        ],
    )


@app.post("/beampattern", response_model=BeampatternResponse)
def beampattern_endpoint(req: BeampatternRequest) -> BeampatternResponse:
    try:
        x = req.x.array()
        if req.angle_step_deg <= 0 or req.angle_stop_deg < req.angle_start_deg:
            raise ValueError("invalid angle grid")
        grid = np.arange(req.angle_start_deg, req.angle_stop_deg + 1e-9, req.angle_step_deg)
        gains = beampattern(waveform_covariance(x), np.deg2rad(grid))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return BeampatternResponse(angle_deg=grid.tolist(), gain=gains.tolist())


@app.post("/sidelobes", response_model=SidelobeResponse)
def sidelobes_endpoint(req: SidelobeRequest) -> SidelobeResponse:
    try:
        lags, levels = sidelobe_profile(req.x.array(), req.max_lag)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return SidelobeResponse(lag=lags.tolist(), level_db=levels.tolist())


@app.post("/experiment", response_model=ExperimentResponse)
def experiment_endpoint(req: ExperimentRequest) -> ExperimentResponse:
    try:
        cfg = ExperimentConfig(
            n=req.n,
            k=req.k,
            length=req.length,
            max_lag=req.max_lag,
            total_power=req.total_power,
            rho1=req.rho1,
            rho2=req.rho2,
            rho3=req.rho3,
            snr_grid=tuple(req.snr_grid),
            trials=req.trials,
            seed=req.seed,
            design=req.design,
            start=req.start,
            rcg=_rcg_config(req.rcg),
            workers=req.workers,
            include_traces=req.include_traces,
        )
        report = run_experiment(cfg)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return ExperimentResponse(**dataclasses.asdict(report))
