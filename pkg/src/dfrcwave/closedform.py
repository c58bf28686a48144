"""Covariance-constrained benchmark waveform and covariance target synthesis.

The benchmark solves

    min ||H X - S||^2  s.t.  (1/L) X X^H = R_d

whose optimum is X0 = sqrt(L) F U I_{NxL} V^H with F F^H = R_d and
U S V^H the SVD of F^H H^H S. Any feasible point is sqrt(L) F W with
W W^H = I_N, which backs the randomized optimality oracle in the tests.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .metrics import beampattern
from .signals import steering_vector


@dataclass(frozen=True)
class CovarianceTarget:
    r: np.ndarray
    total_power: float
    synth_converged: bool = True

    def __post_init__(self):
        r = self.r
        n = r.shape[0]
        if r.shape != (n, n):
            raise ValueError("covariance must be square")
        if np.abs(r - r.conj().T).max() > 1e-10:
            raise ValueError("covariance must be Hermitian")
        if np.linalg.eigvalsh(r)[0] < -1e-10:
            raise ValueError("covariance must be positive semidefinite")
        if np.abs(np.diag(r).real - self.total_power / n).max() > 1e-8:
            raise ValueError("covariance diagonal must equal P_T/N")


def omni_covariance(n: int, total_power: float) -> CovarianceTarget:
    if n < 1 or total_power <= 0:
        raise ValueError("need N >= 1 and positive total power")
    return CovarianceTarget((total_power / n) * np.eye(n), total_power)


def directional_covariance(
    n: int,
    total_power: float,
    grid: np.ndarray,
    desired: np.ndarray,
    max_iters: int = 5000,
    tol: float = 1e-8,
) -> CovarianceTarget:
    """Fit a covariance whose beampattern tracks the desired shape.

    Minimizes sum_g (a^H(theta_g) R a(theta_g) - alpha d_g)^2 over Hermitian
    PSD R with diagonal P_T/N, the scale alpha >= 0 free. Projected gradient
    descent: refresh alpha in closed form, take an exact line-search step on
    the quadratic cost, then clip eigenvalues and reset the diagonal.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    desired = np.atleast_1d(np.asarray(desired, dtype=float))
    if grid.size == 0 or grid.shape != desired.shape:
        raise ValueError("angle grid and desired pattern must be equal nonempty shapes")
    if np.any(desired < 0):
        raise ValueError("desired pattern values must be nonnegative")
    steer = np.stack([steering_vector(t, n) for t in grid])
    r = (total_power / n) * np.eye(n, dtype=complex)
    den = float(desired @ desired)
    prev = np.inf
    converged = False
    for _ in range(max_iters):
        pattern = np.einsum("gi,ij,gj->g", steer.conj(), r, steer).real
        alpha = max(float(pattern @ desired) / den, 0.0) if den > 0 else 0.0
        resid = pattern - alpha * desired
        cost = float(resid @ resid)
        if prev - cost < tol * max(prev, 1.0):
            converged = True
            break
        prev = cost
        grad = np.einsum("g,gi,gj->ij", 2.0 * resid, steer, steer.conj())
        response = np.einsum("gi,ij,gj->g", steer.conj(), grad, steer).real
        curvature = float(response @ response)
        if curvature == 0.0:
            converged = True
            break
        step = float(resid @ response) / curvature
        r = r - step * grad
        r = 0.5 * (r + r.conj().T)
        eigvals, eigvecs = np.linalg.eigh(r)
        r = (eigvecs * np.clip(eigvals, 0.0, None)) @ eigvecs.conj().T
        np.fill_diagonal(r, total_power / n)
    if not converged:
        warnings.warn("directional covariance fit hit the iteration cap", RuntimeWarning)
    # The diagonal reset can push the smallest eigenvalue slightly negative;
    # blend toward the omni covariance just enough to restore feasibility.
    eigmin = float(np.linalg.eigvalsh(r)[0])
    if eigmin < -1e-10:
        blend = min(1.0, (-eigmin) / ((-eigmin) + total_power / n) * (1.0 + 1e-6))
        r = (1.0 - blend) * r + blend * (total_power / n) * np.eye(n)
        np.fill_diagonal(r, total_power / n)
    return CovarianceTarget(r, total_power, synth_converged=converged)


def mainlobe_target(
    n: int,
    total_power: float,
    center_deg: float = 0.0,
    halfwidth_deg: float = 5.0,
) -> CovarianceTarget:
    """Directional target used in the experiments: indicator of a single
    mainlobe on a one-degree grid spanning -90..90 degrees."""
    grid_deg = np.arange(-90.0, 91.0, 1.0)
    desired = (np.abs(grid_deg - center_deg) <= halfwidth_deg).astype(float)
    return directional_covariance(n, total_power, np.deg2rad(grid_deg), desired)


def covariance_factor(target: CovarianceTarget) -> np.ndarray:
    """F with F F^H = R_d; triangular Cholesky, eigen square root fallback."""
    try:
        return np.linalg.cholesky(target.r)
    except np.linalg.LinAlgError:
        warnings.warn(
            "covariance is rank deficient; using eigenvalue square root",
            RuntimeWarning,
        )
        eigvals, eigvecs = np.linalg.eigh(target.r)
        return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def closed_form_waveform(
    h: np.ndarray,
    s: np.ndarray,
    target: CovarianceTarget,
    length: int,
) -> np.ndarray:
    """Interference-minimizing waveform under the hard covariance equality."""
    n = target.r.shape[0]
    if length < n:
        raise ValueError("block length must be at least the antenna count")
    if h.shape[1] != n or s.shape[0] != h.shape[0] or s.shape[1] != length:
        raise ValueError("dimension mismatch between H, S and the covariance target")
    f = covariance_factor(target)
    m = f.conj().T @ h.conj().T @ s
    u, _, vh = np.linalg.svd(m, full_matrices=False)
    return np.sqrt(length) * f @ u @ vh


def target_beampattern(target: CovarianceTarget, angles: np.ndarray) -> np.ndarray:
    return beampattern(target.r, angles)
