"""SiNW bioFET transduction: Debye screening, capacitances, surface potential, gain.

The nanowire is treated as a hemicylinder (nanowire-on-insulator) of radius
r_R and length l_R, so every capacitance scales with the effective width
w_R = pi r_R times l_R.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .binding import binding_stats
from .params import CONST, SystemParams, TransducerParams


@dataclass(frozen=True)
class TransducerDerived:
    lambda_D: float
    q_eff: float
    w_R: float
    C_dl: float
    C_ox_s: float
    C_ox: float
    lambda_nw: float
    C_nw: float
    C_eq: float
    g_FET: float
    psi_L: float

    @property
    def gain(self) -> float:
        """Output current per bound ligand, g_FET * psi_L (A)."""
        return self.g_FET * self.psi_L


def debye_length(eps_M: float, T: float, c_ion: float) -> float:
    if eps_M <= 0 or T <= 0 or c_ion <= 0:
        raise ValueError("debye_length needs positive eps_M, T and c_ion")
    return math.sqrt(eps_M * CONST.k_B * T / (2 * CONST.N_A * CONST.q ** 2 * c_ion))


def effective_charge(l_SR: float, lambda_D: float) -> float:
    """Screened charge of one ligand electron sitting ``l_SR`` above the surface."""
    if l_SR < 0:
        raise ValueError("l_SR must be >= 0")
    if lambda_D <= 0:
        raise ValueError("lambda_D must be > 0")
    return CONST.q * math.exp(-l_SR / lambda_D)


def inner_layer_thickness(eps_Si: float, T: float, p: float) -> float:
    return math.sqrt(eps_Si * CONST.k_B * T / (p * CONST.q ** 2))


def capacitances(tp: TransducerParams) -> dict[str, float]:
    for name in ("r_R", "l_R", "t_ox", "eps_ox", "eps_Si", "eps_M", "p"):
        if getattr(tp, name) <= 0:
            raise ValueError(f"transducer.{name} must be > 0")
    lam_D = debye_length(tp.eps_M, tp.T, tp.c_ion)
    w_R = math.pi * tp.r_R
    area = w_R * tp.l_R
    C_ox_s = tp.eps_ox / tp.t_ox
    lam_nw = inner_layer_thickness(tp.eps_Si, tp.T, tp.p)
    C_dl = tp.eps_M / lam_D * area
    C_ox = C_ox_s * area
    C_nw = tp.eps_Si / lam_nw * area
    C_eq = 1.0 / (1.0 / C_ox + 1.0 / C_nw) + C_dl
    return dict(lambda_D=lam_D, w_R=w_R, C_dl=C_dl, C_ox_s=C_ox_s, C_ox=C_ox,
                lambda_nw=lam_nw, C_nw=C_nw, C_eq=C_eq)


class RegionError(ValueError):
    """Bias point outside the linear (ohmic) region."""


def transconductance(tp: TransducerParams) -> float:
    """Linear-region transconductance mu_p C_ox_s V_SD w_R / l_R (S)."""
    if not tp.V_SG - abs(tp.V_TH) > 0:
        raise RegionError("V_SG - |V_TH| must be > 0 for linear-region operation")
    return tp.mu_p * (tp.eps_ox / tp.t_ox) * tp.V_SD * math.pi * tp.r_R / tp.l_R


def derive(params: SystemParams) -> TransducerDerived:
    tp = params.transducer
    caps = capacitances(tp)
    q_eff = effective_charge(params.receptor.l_SR, caps["lambda_D"])
    psi_L = q_eff * params.receptor.Ne / caps["C_eq"]
    return TransducerDerived(q_eff=q_eff, g_FET=transconductance(tp), psi_L=psi_L, **caps)


def mean_output_current(params: SystemParams, Ntx: float) -> float:
    td = derive(params)
    return td.g_FET * td.psi_L * binding_stats(params, Ntx).mu_Nb
