"""Echo simulation and matched-filter range compression.

The echo of a scene with one target at delay zero plus point scatterers
at nonzero range bins is

    Y = alpha_0 a(theta_0) a^H(theta_0) X
        + sum_m alpha_m a(theta_m) a^H(theta_m) X J_{p_m} + W

and the range-compressed map is D = (1/L) Y X^H. Nonzero-lag waveform
correlations X J_p X^H leak the scatterer returns into D, which is what
the sidelobe term of the design objective suppresses.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matio
from .metrics import waveform_covariance
from .signals import apply_shift, steering_vector


@dataclass(frozen=True)
class Scatterer:
    bin: int  # range offset in slots, nonzero
    angle: float  # radians
    amplitude: complex

    def __post_init__(self):
        if self.bin == 0:
            raise ValueError("scatterer bins must be nonzero (bin 0 is the target)")


@dataclass(frozen=True)
class EchoScene:
    target_angle: float
    target_amplitude: complex
    scatterers: tuple[Scatterer, ...] = ()
    noise_power: float = 0.0

    def __post_init__(self):
        if self.noise_power < 0:
            raise ValueError("noise power must be nonnegative")


def simulate_echo(scene: EchoScene, x: np.ndarray, seed=None) -> np.ndarray:
    n, length = x.shape
    for sc in scene.scatterers:
        if abs(sc.bin) >= length:
            raise ValueError(f"scatterer bin {sc.bin} out of range for block length {length}")
    a0 = steering_vector(scene.target_angle, n)
    y = scene.target_amplitude * np.outer(a0, a0.conj()) @ x
    for sc in scene.scatterers:
        a = steering_vector(sc.angle, n)
        y = y + sc.amplitude * np.outer(a, a.conj()) @ apply_shift(x, sc.bin)
    if scene.noise_power > 0.0:
        rng = np.random.default_rng(seed)
        scale = np.sqrt(scene.noise_power / 2.0)
        y = y + scale * (
            rng.standard_normal((n, length)) + 1j * rng.standard_normal((n, length))
        )
    return y


@dataclass(frozen=True)
class RangeAngleMap:
    d: np.ndarray
    scene: EchoScene | None = None

    def magnitude_db(self, floor: float = 1e-300) -> np.ndarray:
        return 20.0 * np.log10(np.maximum(np.abs(self.d), floor))

    def to_csv(self, path) -> None:
        mags = self.magnitude_db()
        rows = (
            (i, j, mags[i, j])
            for i in range(mags.shape[0])
            for j in range(mags.shape[1])
        )
        matio.write_csv(path, ["row", "col", "magnitude_db"], rows)


def matched_filter(y: np.ndarray, x: np.ndarray, scene: EchoScene | None = None) -> RangeAngleMap:
    if y.shape != x.shape:
        raise ValueError("echo and waveform shapes must match")
    return RangeAngleMap((y @ x.conj().T) / x.shape[-1], scene)


def clean_target_map(scene: EchoScene, x: np.ndarray) -> np.ndarray:
    """Reference D for a noiseless, clutter-free scene: alpha0 a a^H R_X."""
    a0 = steering_vector(scene.target_angle, x.shape[0])
    return scene.target_amplitude * np.outer(a0, a0.conj()) @ waveform_covariance(x)
