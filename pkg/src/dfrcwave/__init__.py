"""Joint radar-communication waveform synthesis on the oblique manifold."""

__version__ = "0.1.0"

from .closedform import (
    CovarianceTarget,
    closed_form_waveform,
    covariance_factor,
    directional_covariance,
    mainlobe_target,
    omni_covariance,
)
from .experiments import ExperimentConfig, ExperimentReport, emit_outputs, run_experiment
from .manifold import (
    DegenerateRowError,
    ManifoldSpec,
    feasibility,
    inner,
    project_tangent,
    random_point,
    retract,
)
from .metrics import (
    StackedProblem,
    beampattern,
    isl_power,
    mui_power,
    objective,
    sidelobe_profile,
    similarity,
    stack_problem,
    sum_rate,
    sum_rate_from_mui,
    waveform_covariance,
)
from .radar import EchoScene, RangeAngleMap, Scatterer, matched_filter, simulate_echo
from .rcg import (
    ArmijoConfig,
    RcgConfig,
    SolveTrace,
    armijo_search,
    conjugate_direction,
    euclidean_gradient,
    pr_coefficient,
    riemannian_gradient,
    solve,
)
from .signals import (
    apply_shift,
    generate_channel,
    generate_symbols,
    lag_product,
    shift_matrix,
    steering_vector,
)

__all__ = [
    "ArmijoConfig",
    "CovarianceTarget",
    "DegenerateRowError",
    "EchoScene",
    "ExperimentConfig",
    "ExperimentReport",
    "ManifoldSpec",
    "RangeAngleMap",
    "RcgConfig",
    "Scatterer",
    "SolveTrace",
    "StackedProblem",
    "apply_shift",
    "armijo_search",
    "beampattern",
    "closed_form_waveform",
    "conjugate_direction",
    "covariance_factor",
    "directional_covariance",
    "emit_outputs",
    "euclidean_gradient",
    "feasibility",
    "generate_channel",
    "generate_symbols",
    "inner",
    "isl_power",
    "lag_product",
    "mainlobe_target",
    "matched_filter",
    "mui_power",
    "objective",
    "omni_covariance",
    "pr_coefficient",
    "project_tangent",
    "random_point",
    "retract",
    "riemannian_gradient",
    "run_experiment",
    "shift_matrix",
    "sidelobe_profile",
    "similarity",
    "simulate_echo",
    "solve",
    "stack_problem",
    "steering_vector",
    "sum_rate",
    "sum_rate_from_mui",
    "waveform_covariance",
]
