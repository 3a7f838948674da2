"""Steady-state ligand-receptor occupancy and bound-count statistics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .channel import attenuation
from .params import SystemParams


@dataclass(frozen=True)
class BindingStats:
    P_b: float
    mu_Nb: float
    var_Nb: float
    N_r: float


def bound_probability(rho_R, k1, k_m1):
    rho_R = np.asarray(rho_R, dtype=float)
    if np.any(rho_R < 0):
        raise ValueError("rho_R must be >= 0")
    if k1 <= 0 or k_m1 <= 0:
        raise ValueError("rate constants must be > 0")
    # k1 rho / (k1 rho + k_m1), arranged to stay finite at rho = 0 and rho -> inf
    with np.errstate(divide="ignore", over="ignore"):
        out = 1.0 / (1.0 + k_m1 / (k1 * rho_R))
    return out[()] if out.ndim == 0 else out


def bound_count_pmf(N_r: int, P_b: float, k):
    """Binomial pmf of the bound-receptor count (log-space via scipy)."""
    k = np.asarray(k)
    if np.any(k < 0) or np.any(k > N_r) or np.any(k != np.floor(k)):
        raise ValueError(f"k must be an integer in [0, {N_r}]")
    if not 0.0 <= P_b <= 1.0:
        raise ValueError("P_b must lie in [0, 1]")
    out = stats.binom.pmf(k, N_r, P_b)
    return out[()] if np.ndim(out) == 0 else out


def binding_stats(params: SystemParams, Ntx: float) -> BindingStats:
    rc = params.receptor
    rho = attenuation(params.channel.d) * Ntx
    P = float(bound_probability(rho, rc.k1, rc.k_m1))
    N_r = params.n_receptors
    return BindingStats(P, P * N_r, P * (1 - P) * N_r, N_r)


def gaussian_cdf_distance(N_r: int, P_b: float) -> float:
    """Sup-norm gap between the binomial cdf and its moment-matched normal cdf.

    The normal cdf is read at k + 1/2 (continuity correction); without it the
    gap is dominated by half the largest pmf jump, ~1/sqrt(8 pi N_r P_b (1-P_b)).
    """
    k = np.arange(N_r + 1)
    mu, sd = N_r * P_b, np.sqrt(N_r * P_b * (1 - P_b))
    return float(np.abs(stats.binom.cdf(k, N_r, P_b) - stats.norm.cdf(k + 0.5, mu, sd)).max())
