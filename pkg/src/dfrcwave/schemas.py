"""Request and response models for the HTTP service."""
from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class StrictModel(BaseModel):
    """Requests reject unknown fields so config typos fail loudly."""

    model_config = ConfigDict(extra="forbid")


class ComplexMatrix(StrictModel):
    """Complex matrix as parallel real/imag row-major nested lists."""

    re: list[list[float]]
    im: list[list[float]]

    @field_validator("im")
    @classmethod
    def _same_shape(cls, im, info):
        re = info.data.get("re")
        if re is not None:
            if len(im) != len(re) or any(len(a) != len(b) for a, b in zip(re, im)):
                raise ValueError("re and im must have identical shapes")
        return im

    @classmethod
    def wrap(cls, m: np.ndarray) -> "ComplexMatrix":
        m = np.atleast_2d(np.asarray(m, dtype=complex))
        return cls(re=m.real.tolist(), im=m.imag.tolist())

    def array(self) -> np.ndarray:
        return np.asarray(self.re, dtype=float) + 1j * np.asarray(self.im, dtype=float)


class ArmijoModel(StrictModel):
    mu0: float = 1.0
    tau: float = 0.5
    c: float = 1e-4
    max_backtracks: int = 50
    init: str = "quartic"


class RcgModel(StrictModel):
    epsilon: float = 1e-6
    k_max: int = 500
    armijo: ArmijoModel = Field(default_factory=ArmijoModel)


class SolveRequest(StrictModel):
    h: ComplexMatrix
    s: ComplexMatrix
    design: str = "omni"  # omni | directional; rd overrides when present
    rd: ComplexMatrix | None = None
    total_power: float = 1.0
    rho1: float = 0.15
    rho2: float = 0.7
    rho3: float = 0.15
    max_lag: int = 8
    start: str = "warm"
    seed: int = 0
    rcg: RcgModel = Field(default_factory=RcgModel)


class TraceRow(BaseModel):
    iter: int
    objective: float
    grad_norm: float
    step: float
    feasibility: float
    lam: float


class SolveResponse(BaseModel):
    x: ComplexMatrix
    x_closed_form: ComplexMatrix
    iterations: int
    converged: bool
    stalled: bool
    mui_closed_form: float
    mui: float
    isl_closed_form: float
    isl: float
    trace: list[TraceRow]


class BeampatternRequest(StrictModel):
    x: ComplexMatrix
    angle_start_deg: float = -90.0
    angle_stop_deg: float = 90.0
    angle_step_deg: float = 1.0


class BeampatternResponse(BaseModel):
    angle_deg: list[float]
    gain: list[float]


class SidelobeRequest(StrictModel):
    x: ComplexMatrix
    max_lag: int


class SidelobeResponse(BaseModel):
    lag: list[int]
    level_db: list[float]


class ExperimentRequest(StrictModel):
    n: int = 16
    k: int = 4
    length: int = 100
    max_lag: int = 8
    total_power: float = 1.0
    rho1: float = 0.15
    rho2: float = 0.7
    rho3: float = 0.15
    snr_grid: list[float] = Field(default_factory=lambda: list(range(0, 22, 2)))
    trials: int = 100
    seed: int = 0
    design: str = "omni"
    start: str = "warm"
    rcg: RcgModel = Field(default_factory=RcgModel)
    workers: int = 1
    include_traces: bool = True


class ExperimentResponse(BaseModel):
    config: dict
    snr_db: list[float]
    rate_cf_mean: list[float]
    rate_cf_std: list[float]
    rate_rcg_mean: list[float]
    rate_rcg_std: list[float]
    angle_deg: list[float]
    bp_target: list[float]
    bp_cf: list[float]
    bp_rcg: list[float]
    bp_msd: float
    lags: list[int]
    sidelobe_cf_db: list[float]
    sidelobe_rcg_db: list[float]
    isl_reduction_db: list[float]
    isl_reduction_db_mean: float
    iterations: list[int]
    stall_count: int
    degraded: bool
    synth_converged: bool
    wall_time_s: float
    traces: list[list[tuple[int, float, float, float, float, float]]]


class HealthResponse(BaseModel):
    status: str
    version: str
