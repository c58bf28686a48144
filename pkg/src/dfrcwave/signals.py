"""Array steering, temporal shifts, and seeded generation of channels and symbols.

Conventions used throughout the package:
  - X is the N x L transmit block (antennas x time slots).
  - H is the K x N downlink channel, S the K x L symbol block.
  - J_p is the L x L matrix with ones on the p-th superdiagonal for p >= 0
    and J_p = J_{-p}^T; right-multiplying by J_p slides columns.
"""
from __future__ import annotations

import numpy as np

QPSK_POINTS = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)


def steering_vector(theta: float, n: int) -> np.ndarray:
    """Steering vector of a half-wavelength ULA: entry k is exp(j*pi*k*sin(theta))."""
    if n < 1:
        raise ValueError("antenna count must be >= 1")
    if not np.isfinite(theta):
        raise ValueError("angle must be finite")
    k = np.arange(n)
    return np.exp(1j * np.pi * k * np.sin(theta))


def apply_shift(x: np.ndarray, p: int) -> np.ndarray:
    """Return X @ J_p without building J_p.

    For p > 0 columns slide right by p with zero fill on the left
    (J_p carries ones on the p-th superdiagonal), for p < 0 they slide
    left with zero fill on the right.
    """
    x = np.asarray(x)
    length = x.shape[-1]
    if abs(p) >= length:
        raise ValueError(f"lag {p} out of range for block length {length}")
    if p == 0:
        return x.copy()
    out = np.zeros_like(x)
    if p > 0:
        out[..., p:] = x[..., : length - p]
    else:
        out[..., :p] = x[..., -p:]
    return out


def shift_matrix(p: int, length: int) -> np.ndarray:
    """Dense J_p, for verification against apply_shift only (O(L^2) memory)."""
    if abs(p) >= length:
        raise ValueError(f"lag {p} out of range for block length {length}")
    return np.eye(length, k=p)


def lag_product(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """X J_p Y^H via column slices; the workhorse behind ISL-type terms.

    Cost is O(N^2 (L - |p|)) which keeps a full lag sweep at the
    O(N^2 P L) budget instead of O(N^2 P L^2) with dense shifts.
    """
    length = x.shape[-1]
    if abs(p) >= length:
        raise ValueError(f"lag {p} out of range for block length {length}")
    if p >= 0:
        return x[:, : length - p] @ y[:, p:].conj().T
    return x[:, -p:] @ y[:, : length + p].conj().T


def generate_channel(k: int, n: int, seed) -> np.ndarray:
    """K x N channel with i.i.d. standard complex Gaussian entries."""
    if k < 1 or n < 1:
        raise ValueError("channel dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))) / np.sqrt(2.0)


def generate_symbols(k: int, length: int, constellation: str, seed) -> np.ndarray:
    """K x L block of unit-power symbols drawn uniformly from the constellation."""
    if k < 1 or length < 1:
        raise ValueError("symbol dimensions must be >= 1")
    if constellation.upper() != "QPSK":
        raise ValueError(f"unsupported constellation: {constellation!r}")
    rng = np.random.default_rng(seed)
    return QPSK_POINTS[rng.integers(0, 4, size=(k, length))]


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent per-trial seed streams; order-independent reproducibility."""
    return np.random.SeedSequence(seed).spawn(count)
