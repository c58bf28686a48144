"""Performance metrics and the composite design objective.

The objective is F(X) = ||A X - B||_F^2 + rho3 * ISL(X) where the stack

    A = [sqrt(rho1) H; sqrt(rho2) I_N],  B = [sqrt(rho1) S; sqrt(rho2) X0]

folds the interference term rho1*||HX - S||^2 and the similarity term
rho2*||X - X0||^2 into one least-squares block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .signals import lag_product, steering_vector


@dataclass(frozen=True)
class StackedProblem:
    """Quadratic stack plus the sidelobe weight and lag horizon."""

    a: np.ndarray  # (K+N) x N
    b: np.ndarray  # (K+N) x L
    rho3: float
    max_lag: int
    rho1: float = field(default=float("nan"), compare=False)
    rho2: float = field(default=float("nan"), compare=False)

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def length(self) -> int:
        return self.b.shape[1]


def stack_problem(
    h: np.ndarray,
    s: np.ndarray,
    x0: np.ndarray,
    rho1: float,
    rho2: float,
    rho3: float,
    max_lag: int,
) -> StackedProblem:
    if min(rho1, rho2, rho3) < 0:
        raise ValueError("weights must be nonnegative")
    k, n = h.shape
    if s.shape[0] != k or x0.shape[0] != n or s.shape[1] != x0.shape[1]:
        raise ValueError("dimension mismatch between H, S and the reference waveform")
    if not 1 <= max_lag <= x0.shape[1] - 1:
        raise ValueError("max lag must lie in [1, L-1]")
    a = np.vstack([np.sqrt(rho1) * h, np.sqrt(rho2) * np.eye(n)])
    b = np.vstack([np.sqrt(rho1) * s, np.sqrt(rho2) * x0])
    return StackedProblem(a=a, b=b, rho3=rho3, max_lag=max_lag, rho1=rho1, rho2=rho2)


def mui_power(h: np.ndarray, x: np.ndarray, s: np.ndarray) -> float:
    if h.shape[1] != x.shape[0] or (h.shape[0], x.shape[1]) != s.shape:
        raise ValueError("dimension mismatch in interference computation")
    return float(np.linalg.norm(h @ x - s) ** 2)


def isl_power(x: np.ndarray, max_lag: int) -> float:
    """Total correlation energy over nonzero lags -P..-1, 1..P.

    ||X J_{-p} X^H|| = ||X J_p X^H|| so only positive lags are computed.
    Terms accumulate in ascending lag with compensated summation for a
    run-order-independent result.
    """
    length = x.shape[-1]
    if not 1 <= max_lag <= length - 1:
        raise ValueError("max lag must lie in [1, L-1]")
    total = 0.0
    comp = 0.0
    for p in range(1, max_lag + 1):
        term = 2.0 * float(np.linalg.norm(lag_product(x, x, p)) ** 2)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def similarity(x: np.ndarray, x0: np.ndarray) -> float:
    if x.shape != x0.shape:
        raise ValueError("similarity requires equal shapes")
    return float(np.linalg.norm(x - x0) ** 2)


def waveform_covariance(x: np.ndarray) -> np.ndarray:
    return (x @ x.conj().T) / x.shape[-1]


def beampattern(r: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Spatial power a^H(theta) R a(theta) on the given grid of radians."""
    if np.abs(r - r.conj().T).max() > 1e-10:
        raise ValueError("covariance must be Hermitian")
    n = r.shape[0]
    steer = np.stack([steering_vector(t, n) for t in np.atleast_1d(angles)])
    return np.einsum("gi,ij,gj->g", steer.conj(), r, steer).real


def sum_rate_from_mui(mui: float, k: int, length: int, n0: float) -> float:
    if n0 <= 0:
        raise ValueError("noise power must be positive")
    per_symbol_mui = mui / (k * length)
    return k * math.log2(1.0 + 1.0 / (per_symbol_mui + n0))


def sum_rate(h: np.ndarray, x: np.ndarray, s: np.ndarray, n0: float) -> float:
    """Achievable rate lower bound treating residual interference as noise.

    Per user: log2(1 + sigma_s^2 / (P_MUI/(K L) + N0)) with unit symbol
    power, summed over the K users.
    """
    k, length = s.shape
    return sum_rate_from_mui(mui_power(h, x, s), k, length, n0)


def objective(x: np.ndarray, prob: StackedProblem) -> float:
    if x.shape != (prob.n, prob.length):
        raise ValueError("waveform shape does not match the problem")
    quad = float(np.linalg.norm(prob.a @ x - prob.b) ** 2)
    if prob.rho3 == 0.0:
        return quad
    return quad + prob.rho3 * isl_power(x, prob.max_lag)


def sidelobe_profile(x: np.ndarray, max_lag: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-lag correlation level relative to the lag-0 term, in dB.

    Returns (lags, levels) over p = -P..-1, 1..P; symmetric by construction.
    """
    length = x.shape[-1]
    if not 1 <= max_lag <= length - 1:
        raise ValueError("max lag must lie in [1, L-1]")
    zero_lag = float(np.linalg.norm(x @ x.conj().T) ** 2)
    if zero_lag == 0.0:
        raise ValueError("sidelobe profile undefined for an all-zero waveform")
    lags = np.concatenate([np.arange(-max_lag, 0), np.arange(1, max_lag + 1)])
    levels = np.empty(lags.shape)
    for i, p in enumerate(lags):
        num = float(np.linalg.norm(lag_product(x, x, int(p))) ** 2)
        levels[i] = 10.0 * np.log10(num / zero_lag) if num > 0 else -np.inf
    return lags, levels
