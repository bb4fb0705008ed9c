"""OFDM pilot parameters and the delay-domain information kernel.

The pilot comb spans subcarrier_count = N+1 subcarriers at indices
-N/2..N/2 (the count must be odd so the index set is symmetric), each
carrying constant energy E_s = P/W. Delay information enters the Fisher
information through the kernel

    kernel(delta) = (1/N0) * sum_n E_s * (2*pi*n*W / ((N+1)*c))^2
                                * exp(-2j*pi*n*delta*W / (N+1)),

whose peak kernel(0) is the per-path information intensity scale (1/m^2)
and whose off-peak values quantify inter-path interference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import SPEED_OF_LIGHT

BOLTZMANN = 1.380649e-23  # J/K, exact SI
REFERENCE_TEMPERATURE = 290.0  # K

# Thermal floor k_B * 290 K, i.e. -174 dBm/Hz. The absolute PEB scale of
# every result is proportional to the noise PSD, so changing this (or the
# noise figure on top of it) rescales all bounds by the same factor.
THERMAL_NOISE_PSD = BOLTZMANN * REFERENCE_TEMPERATURE  # W/Hz


def noise_psd_from_figure(noise_figure_db: float = 0.0) -> float:
    """Noise PSD in W/Hz for a receiver noise figure in dB over the thermal floor."""
    if noise_figure_db < 0.0:
        raise ValueError("noise figure must be >= 0 dB")
    return THERMAL_NOISE_PSD * 10.0 ** (noise_figure_db / 10.0)


@dataclass(frozen=True)
class WaveformConfig:
    carrier_hz: float
    bandwidth_hz: float
    subcarrier_count: int  # N+1, odd
    tx_power_w: float = 1e-3
    noise_psd_w_hz: float = THERMAL_NOISE_PSD

    def __post_init__(self):
        if self.carrier_hz <= 0.0 or self.bandwidth_hz <= 0.0:
            raise ValueError("carrier and bandwidth must be positive")
        if self.subcarrier_count < 1 or self.subcarrier_count % 2 == 0:
            raise ValueError(
                "subcarrier count must be odd so indices span -N/2..N/2"
            )
        if self.tx_power_w <= 0.0 or self.noise_psd_w_hz <= 0.0:
            raise ValueError("power and noise PSD must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def pilot_energy(self) -> float:
        """Per-subcarrier pilot energy E_s = P/W."""
        return self.tx_power_w / self.bandwidth_hz

    @property
    def subcarrier_indices(self) -> np.ndarray:
        half = (self.subcarrier_count - 1) // 2
        return np.arange(-half, half + 1)


def _kernel_weights(cfg: WaveformConfig) -> tuple[np.ndarray, np.ndarray]:
    n = cfg.subcarrier_indices
    scale = 2.0 * math.pi * cfg.bandwidth_hz / (cfg.subcarrier_count * SPEED_OF_LIGHT)
    weights = (cfg.pilot_energy / cfg.noise_psd_w_hz) * (scale * n) ** 2
    return n, weights


def delay_kernel(cfg: WaveformConfig, delta):
    """Information kernel at delay offset(s) delta (seconds).

    Accepts a scalar or an ndarray of offsets and returns complex values of
    matching shape. Hermitian in delta and periodic with period (N+1)/W.
    """
    n, weights = _kernel_weights(cfg)
    d = np.asarray(delta, dtype=float)
    phase = (-2j * math.pi * cfg.bandwidth_hz / cfg.subcarrier_count) * d[..., None] * n
    out = np.exp(phase) @ weights
    if d.ndim == 0:
        return complex(out)
    return out


def delay_kernel_peak(cfg: WaveformConfig) -> float:
    """kernel(0), real and strictly positive: the information intensity scale."""
    _, weights = _kernel_weights(cfg)
    return float(weights.sum())


def delay_resolution(cfg: WaveformConfig) -> float:
    """Distance below which two path delays blur together: c/W (meters)."""
    return SPEED_OF_LIGHT / cfg.bandwidth_hz


def unambiguous_range(cfg: WaveformConfig) -> float:
    """Maximum unaliased path length c*(N+1)/W (meters)."""
    return SPEED_OF_LIGHT * cfg.subcarrier_count / cfg.bandwidth_hz
