"""Point-source free diffusion in 3D, sampled at the concentration peak."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# (3 / (2 pi e))^(3/2): peak of the 3D Green's function times d^3
PEAK_FACTOR = (3.0 / (2.0 * math.pi * math.e)) ** 1.5


@dataclass(frozen=True)
class ChannelGain:
    alpha_ch: float
    t_peak: float


def concentration_at(d, t, Ntx, D):
    """Concentration (1/m^3) at distance ``d`` and time ``t`` after an impulsive release.

    Vectorised over all arguments.
    """
    d, t = np.asarray(d, dtype=float), np.asarray(t, dtype=float)
    if np.any(d <= 0) or np.any(t <= 0):
        raise ValueError("concentration_at needs d > 0 and t > 0")
    if np.any(np.asarray(Ntx) < 0) or np.any(np.asarray(D) <= 0):
        raise ValueError("concentration_at needs Ntx >= 0 and D > 0")
    out = Ntx / (4 * np.pi * D * t) ** 1.5 * np.exp(-d ** 2 / (4 * D * t))
    return out[()] if np.ndim(out) == 0 else out


def peak_time(d: float, D: float) -> float:
    if d <= 0 or D <= 0:
        raise ValueError("peak_time needs d > 0 and D > 0")
    return d * d / (6.0 * D)


def attenuation(d):
    """Channel attenuation alpha_ch = rho_R / Ntx at the peak, in 1/m^3."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("attenuation needs d > 0")
    out = PEAK_FACTOR / d ** 3
    return out[()] if np.ndim(out) == 0 else out


def channel_gain(d: float, D: float) -> ChannelGain:
    return ChannelGain(float(attenuation(d)), peak_time(d, D))


def received_concentration(d, Ntx):
    return attenuation(d) * Ntx
