"""Output-current noise: 1/f flicker PSD, its band-limited power, and binding noise.

The flicker PSD follows the correlated carrier-number / mobility fluctuation
model. Below ``f_L = 1/T_obs`` it is held flat; above the receiver bandwidth
``f_H`` it is cut off, which is what keeps the total power finite.

``NoiseParams.flatband_literal`` selects how the transconductance enters:

* ``True``: the flatband-voltage PSD itself carries a g_FET^2 factor and the
  current PSD multiplies by g_FET^2 again (g_FET^4 overall), as printed.
* ``False``: the usual single g_FET^2 factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binding import binding_stats
from .params import CONST, SystemParams
from .transducer import derive


@dataclass(frozen=True)
class NoiseBudget:
    S0: float          # S(f) = S0/|f| for |f| >= f_L, A^2
    f_L: float
    f_H: float
    sigma2_F: float
    gain: float        # g_FET * psi_L
    N_r: float
    params: SystemParams

    def psd(self, f):
        f = np.abs(np.asarray(f, dtype=float))
        out = self.S0 / np.maximum(f, self.f_L)
        return out[()] if out.ndim == 0 else out

    def sigma2_binding(self, Ntx: float) -> float:
        return binding_stats(self.params, Ntx).var_Nb * self.gain ** 2

    def sigma2_total(self, Ntx: float) -> float:
        return self.sigma2_F + self.sigma2_binding(Ntx)


def mobility_factor(params: SystemParams) -> float:
    """1 + alpha_s mu_p C_ox_s (V_SG - |V_TH|), the correlated-mobility term."""
    tp, nz = params.transducer, params.noise
    C_ox_s = tp.eps_ox / tp.t_ox
    return 1.0 + nz.alpha_s * tp.mu_p * C_ox_s * (tp.V_SG - abs(tp.V_TH))


def flatband_coefficient(params: SystemParams) -> float:
    """S_V,FB(f) * |f| in V^2 (or V^2 S^2 in literal mode)."""
    tp, nz = params.transducer, params.noise
    td = derive(params)
    coef = (nz.lambda_tun * CONST.k_B * tp.T * CONST.q ** 2 * nz.N_ot
            / (td.w_R * tp.l_R * td.C_ox_s ** 2))
    if nz.flatband_literal:
        coef *= td.g_FET ** 2
    return coef


def psd_coefficient(params: SystemParams) -> float:
    g = derive(params).g_FET
    return flatband_coefficient(params) * g ** 2 * mobility_factor(params) ** 2


def flicker_psd(f, params: SystemParams):
    """Two-sided flicker PSD of the output current (A^2/Hz), flat for |f| < f_L."""
    f_L = 1.0 / params.noise.T_obs
    f = np.abs(np.asarray(f, dtype=float))
    out = psd_coefficient(params) / np.maximum(f, f_L)
    return out[()] if out.ndim == 0 else out


def flicker_variance(params: SystemParams) -> float:
    """Flicker power over |f| <= f_H: 2 S0 (1 + ln(f_H / f_L))."""
    f_L = 1.0 / params.noise.T_obs
    f_H = params.noise.f_H
    if not f_H > f_L:
        raise ValueError(f"upper cutoff f_H={f_H:g} must exceed f_L={f_L:g}")
    return 2.0 * psd_coefficient(params) * (1.0 + math.log(f_H / f_L))


def noise_budget(params: SystemParams) -> NoiseBudget:
    td = derive(params)
    return NoiseBudget(S0=psd_coefficient(params), f_L=1.0 / params.noise.T_obs,
                       f_H=params.noise.f_H, sigma2_F=flicker_variance(params),
                       gain=td.gain, N_r=params.n_receptors, params=params)


def total_variance(params: SystemParams, Ntx: float) -> float:
    return noise_budget(params).sigma2_total(Ntx)
