"""Geometry of the fixed-row-power constraint set.

The feasible set {X : diag(X X^H) = (L P_T / N) 1} is a product of N
complex spheres of squared radius c = L P_T / N, one per antenna row.
Tangency at X is row-wise: Re((Z X^H)_ii) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateRowError(ValueError):
    """A row of the retraction argument vanished; the step cannot be rescaled."""


@dataclass(frozen=True)
class ManifoldSpec:
    n: int
    length: int
    row_power: float  # c = L * P_T / N

    def __post_init__(self):
        if self.row_power <= 0:
            raise ValueError("row power must be positive")

    @classmethod
    def from_power(cls, n: int, length: int, total_power: float) -> "ManifoldSpec":
        return cls(n, length, length * total_power / n)


def row_powers(x: np.ndarray) -> np.ndarray:
    return np.einsum("il,il->i", x, x.conj()).real


def feasibility(x: np.ndarray, spec: ManifoldSpec) -> float:
    """Max relative deviation of row powers from the manifold value."""
    return float(np.abs(row_powers(x) - spec.row_power).max() / spec.row_power)


def rescale_rows(y: np.ndarray, spec: ManifoldSpec) -> np.ndarray:
    """Rescale every row of Y to squared norm c; the retraction primitive."""
    powers = row_powers(y)
    if np.any(powers == 0.0):
        raise DegenerateRowError("retraction undefined: a row is identically zero")
    return (np.sqrt(spec.row_power / powers))[:, None] * y


def random_point(spec: ManifoldSpec, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((spec.n, spec.length)) + 1j * rng.standard_normal(
        (spec.n, spec.length)
    )
    return rescale_rows(g, spec)


def inner(z1: np.ndarray, z2: np.ndarray) -> float:
    if z1.shape != z2.shape:
        raise ValueError("inner product requires equal shapes")
    return float(np.vdot(z1, z2).real)


def project_tangent(x: np.ndarray, g: np.ndarray, spec: ManifoldSpec) -> np.ndarray:
    """Remove the radial component of each row of G at the point X.

    The subtracted coefficient is Re((G X^H)_ii) / c; without the 1/c
    normalization the map is not idempotent because rows of X have
    squared norm c, not 1.
    """
    if feasibility(x, spec) > 1e-8:
        raise ValueError("projection base point is off-manifold")
    coef = np.einsum("il,il->i", g, x.conj()).real / spec.row_power
    return g - coef[:, None] * x


def retract(x: np.ndarray, z: np.ndarray, spec: ManifoldSpec) -> np.ndarray:
    """Map the step Z at X back onto the manifold by row rescaling of X + Z."""
    return rescale_rows(x + z, spec)
