"""Conjugate-gradient solver on the fixed-row-power manifold.

Each iteration projects the Euclidean gradient onto the tangent space,
combines it with the previous direction through a nonnegative
Polak-Ribiere coefficient, line-searches along the direction with an
Armijo backtracking rule, and retracts by row rescaling. The monotone
objective and per-iteration feasibility are recorded in the trace.

The gradient of the correlation term for lag p uses the slide-product
identity C_p = X[:, :L-p] X[:, p:]^H so the per-iteration cost stays
O(N^2 P L); dense L x L shift matrices never appear here.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .manifold import (
    DegenerateRowError,
    ManifoldSpec,
    feasibility,
    inner,
    project_tangent,
    random_point,
    retract,
)
from .metrics import StackedProblem, objective
from .signals import apply_shift, lag_product


@dataclass(frozen=True)
class ArmijoConfig:
    mu0: float = 1.0
    tau: float = 0.5
    c: float = 1e-4
    max_backtracks: int = 50
    # Initial trial step per iteration: "quartic" minimizes the exact
    # quartic restriction of the objective to the ambient ray, "doubling"
    # uses min(mu0, 2 * previous accepted step).
    init: str = "quartic"

    def __post_init__(self):
        if not 0 < self.tau < 1:
            raise ValueError("backtrack factor must lie in (0, 1)")
        if not 0 < self.c < 1:
            raise ValueError("sufficient-decrease constant must lie in (0, 1)")
        if self.mu0 <= 0 or self.max_backtracks < 1:
            raise ValueError("invalid line-search configuration")
        if self.init not in ("quartic", "doubling"):
            raise ValueError(f"unknown line-search initialization: {self.init!r}")


@dataclass(frozen=True)
class RcgConfig:
    epsilon: float = 1e-6
    k_max: int = 500
    armijo: ArmijoConfig = field(default_factory=ArmijoConfig)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("gradient tolerance must be positive")
        if self.k_max <= 2:
            raise ValueError("iteration cap must exceed 2")


@dataclass
class SolveTrace:
    """Per-iteration record; row 0 is the initial point.

    Row k >= 1 stores the state after k accepted steps, the step size
    accepted at iteration k, and the conjugation coefficient computed at
    that state for the next direction.
    """

    objective: list[float] = field(default_factory=list)
    grad_norm: list[float] = field(default_factory=list)
    step: list[float] = field(default_factory=list)
    feasibility: list[float] = field(default_factory=list)
    lam: list[float] = field(default_factory=list)
    converged: bool = False
    stalled: bool = False

    @property
    def iterations(self) -> int:
        return len(self.objective) - 1

    def append(self, f, gnorm, step, feas, lam):
        self.objective.append(float(f))
        self.grad_norm.append(float(gnorm))
        self.step.append(float(step))
        self.feasibility.append(float(feas))
        self.lam.append(float(lam))

    def rows(self):
        """Rows matching the CSV header iter,objective,grad_norm,step,feasibility,lambda."""
        for i in range(len(self.objective)):
            yield (
                i,
                self.objective[i],
                self.grad_norm[i],
                self.step[i],
                self.feasibility[i],
                self.lam[i],
            )


def euclidean_gradient(x: np.ndarray, prob: StackedProblem) -> np.ndarray:
    if x.shape != (prob.n, prob.length):
        raise ValueError("waveform shape does not match the problem")
    grad = 2.0 * prob.a.conj().T @ (prob.a @ x - prob.b)
    if prob.rho3 == 0.0:
        return grad
    for p in range(1, prob.max_lag + 1):
        c_p = lag_product(x, x, p)
        grad = grad + (4.0 * prob.rho3) * (
            c_p @ apply_shift(x, -p) + c_p.conj().T @ apply_shift(x, p)
        )
    return grad


def riemannian_gradient(x: np.ndarray, prob: StackedProblem, spec: ManifoldSpec) -> np.ndarray:
    return project_tangent(x, euclidean_gradient(x, prob), spec)


def pr_coefficient(g_k: np.ndarray, g_prev_proj: np.ndarray, g_prev: np.ndarray) -> float:
    """Nonnegative Polak-Ribiere coefficient; zero previous gradient means
    the iteration already converged, so 0 is returned rather than an error."""
    denom = inner(g_prev, g_prev)
    if denom == 0.0:
        return 0.0
    return max(0.0, inner(g_k, g_k - g_prev_proj) / denom)


def conjugate_direction(
    g_k: np.ndarray, prev_dir_proj: np.ndarray, lam: float
) -> np.ndarray:
    """-g + lam * transported previous direction, reset to -g if not descent."""
    direction = -g_k + lam * prev_dir_proj
    if inner(g_k, direction) >= 0.0:
        return -g_k
    return direction


def _quartic_coefficients(x, d, prob):
    """a1..a4 with F(x + mu d) = F(x) + a1 mu + a2 mu^2 + a3 mu^3 + a4 mu^4."""
    r0 = prob.a @ x - prob.b
    ad = prob.a @ d
    a1 = 2.0 * np.vdot(ad, r0).real
    a2 = np.vdot(ad, ad).real
    a3 = 0.0
    a4 = 0.0
    if prob.rho3 > 0.0:
        for p in range(1, prob.max_lag + 1):
            c0 = lag_product(x, x, p)
            c1 = lag_product(d, x, p) + lag_product(x, d, p)
            c2 = lag_product(d, d, p)
            # twice each term: lags p and -p contribute equal norms
            a1 += 4.0 * prob.rho3 * np.vdot(c0, c1).real
            a2 += 2.0 * prob.rho3 * (np.vdot(c1, c1).real + 2.0 * np.vdot(c0, c2).real)
            a3 += 4.0 * prob.rho3 * np.vdot(c1, c2).real
            a4 += 2.0 * prob.rho3 * np.vdot(c2, c2).real
    return a1, a2, a3, a4


def _quartic_minimizer(a1, a2, a3, a4, fallback):
    """Positive minimizer of the quartic model, or the fallback step."""
    cubic = [4.0 * a4, 3.0 * a3, 2.0 * a2, a1]
    if abs(cubic[0]) < 1e-300:
        if a2 > 0.0 and a1 < 0.0:
            return -a1 / (2.0 * a2)
        return fallback
    roots = np.roots(cubic)
    real = roots[np.abs(roots.imag) <= 1e-9 * (1.0 + np.abs(roots.real))].real
    positive = real[real > 0.0]
    if positive.size == 0:
        return fallback
    values = a1 * positive + a2 * positive**2 + a3 * positive**3 + a4 * positive**4
    best = float(positive[np.argmin(values)])
    return best if np.min(values) < 0.0 else fallback


def armijo_search(
    x: np.ndarray,
    direction: np.ndarray,
    prob: StackedProblem,
    spec: ManifoldSpec,
    cfg: ArmijoConfig,
    f_x: float,
    grad: np.ndarray,
    prev_step: float | None = None,
) -> tuple[float, np.ndarray, float]:
    """Backtracking line search along a descent direction.

    Returns (step, retracted point, new objective); a zero step signals a
    stall (no acceptable step within the backtrack budget). A degenerate
    retraction (zero row) counts as a rejected trial and shrinks the step.
    """
    slope = inner(grad, direction)
    if slope >= 0.0:
        raise ValueError("line search requires a descent direction")
    doubling = cfg.mu0 if prev_step is None else min(cfg.mu0, 2.0 * prev_step)
    if cfg.init == "quartic":
        mu = _quartic_minimizer(*_quartic_coefficients(x, direction, prob), doubling)
    else:
        mu = doubling
    for _ in range(cfg.max_backtracks):
        try:
            candidate = retract(x, mu * direction, spec)
        except DegenerateRowError:
            mu *= cfg.tau
            continue
        f_new = objective(candidate, prob)
        if f_new <= f_x + cfg.c * mu * slope:
            return mu, candidate, f_new
        mu *= cfg.tau
    return 0.0, x, f_x


def solve(
    prob: StackedProblem,
    spec: ManifoldSpec,
    cfg: RcgConfig | None = None,
    x0: np.ndarray | None = None,
    seed=None,
) -> tuple[np.ndarray, SolveTrace]:
    """Run the conjugate-gradient iteration from a warm or random start.

    Stops when the Riemannian gradient norm falls below cfg.epsilon or
    after cfg.k_max iterations; a stalled line search ends the run early
    with the stall flag set in the trace.
    """
    cfg = cfg or RcgConfig()
    if x0 is None:
        x = random_point(spec, seed)
    else:
        if x0.shape != (spec.n, spec.length):
            raise ValueError("start point shape does not match the manifold")
        x = np.array(x0, dtype=complex)
    f = objective(x, prob)
    g = riemannian_gradient(x, prob, spec)
    gnorm = float(np.linalg.norm(g))
    trace = SolveTrace()
    trace.append(f, gnorm, 0.0, feasibility(x, spec), 0.0)
    direction = -g
    prev_step = None
    for _ in range(cfg.k_max):
        if gnorm < cfg.epsilon:
            trace.converged = True
            break
        mu, x_new, f_new = armijo_search(
            x, direction, prob, spec, cfg.armijo, f, g, prev_step
        )
        if mu == 0.0:
            trace.stalled = True
            break
        g_new = riemannian_gradient(x_new, prob, spec)
        lam = pr_coefficient(g_new, project_tangent(x_new, g, spec), g)
        direction = conjugate_direction(
            g_new, project_tangent(x_new, direction, spec), lam
        )
        x, f, g = x_new, f_new, g_new
        gnorm = float(np.linalg.norm(g))
        trace.append(f, gnorm, mu, feasibility(x, spec), lam)
        prev_step = mu
    else:
        trace.converged = gnorm < cfg.epsilon
    return x, trace
