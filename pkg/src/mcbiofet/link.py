"""Vectorised end-to-end signal chain, Ntx -> (mean, variance) of the output current.

:class:`LinkModel` computes every derived constant once so that quadrature
and channel discretisation can evaluate whole grids of Ntx at a time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import attenuation
from .noise import flicker_variance
from .params import SystemParams, check
from .transducer import derive


@dataclass(frozen=True)
class SignalStats:
    Ntx: float
    rho_R: float
    P_b: float
    mu_Nb: float
    var_Nb: float
    mu_I: float
    var_I: float


class LinkModel:
    def __init__(self, params: SystemParams, validate: bool = True):
        if validate:
            check(params)
        self.params = params
        self.alpha = float(attenuation(params.channel.d))
        self.k1 = params.receptor.k1
        self.k_m1 = params.receptor.k_m1
        self.N_r = params.n_receptors
        self.derived = derive(params)
        self.gain = self.derived.gain
        self.sigma2_F = flicker_variance(params)
        self.x_min = params.channel.Ntx_min
        self.x_max = params.channel.Ntx_max

    @property
    def x_half(self) -> float:
        """Release size that puts the receiver at half occupancy, K_D / alpha_ch."""
        return self.k_m1 / self.k1 / self.alpha

    def bound_probability(self, x):
        x = np.asarray(x, dtype=float)
        return x / (x + self.x_half)

    def mean(self, x):
        return self.gain * self.N_r * self.bound_probability(x)

    def variance(self, x):
        P = self.bound_probability(x)
        return self.sigma2_F + self.gain ** 2 * self.N_r * P * (1 - P)

    def sigma(self, x):
        return np.sqrt(self.variance(x))

    def mean_slope(self, x):
        """d mean / d Ntx = N_r M / (alpha k1 x + k_m1)^2."""
        x = np.asarray(x, dtype=float)
        return self.gain * self.N_r * self.x_half / (x + self.x_half) ** 2

    def stats(self, Ntx: float) -> SignalStats:
        P = float(self.bound_probability(Ntx))
        return SignalStats(Ntx=Ntx, rho_R=self.alpha * Ntx, P_b=P, mu_Nb=P * self.N_r,
                           var_Nb=P * (1 - P) * self.N_r, mu_I=float(self.mean(Ntx)),
                           var_I=float(self.variance(Ntx)))
