"""Cross-checks of the closed forms against the numerical oracles.

``run_checks`` returns one :class:`Check` per comparison, each carrying the
measured discrepancy and the tolerance it is judged against. The ``fast``
level only looks at the supplied parameter set; ``full`` adds random parameter
draws, Blahut-Arimoto, Monte Carlo and the binary-symmetric-channel sanity check.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .capacity import (capacity_closed_form, mi_taylor, normalization_closed,
                       normalization_quad, optimal_input_pdf)
from .link import LinkModel
from .oracles import (binary_entropy, bsc, capacity_blahut_arimoto, discretize_channel,
                      mi_numeric, normality_check, perturbed_pdfs, random_params,
                      simulate_link)
from .params import SystemParams

K_RTOL = 1e-6
CLOSED_VS_NUMERIC_BITS = 0.02
TAYLOR_VS_NUMERIC_BITS = 0.05
BA_VS_CLOSED_BITS = 0.05
PERTURB_SLACK_BITS = 0.02
BSC_BITS = 1e-3
MC_SIGMAS = 5.0
NORMALITY_MAX = 0.02
MC_POINTS = (1e8, 3e8, 1e9)


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.measured:.6g} (tol {self.tolerance:g}) {self.detail}".rstrip()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["measured"] = None if not math.isfinite(self.measured) else self.measured
        return d


def _le(name, value, tol, detail=""):
    return Check(name, float(value), tol, bool(value <= tol), detail)


def k_gap(params, variant="corrected") -> float:
    link = LinkModel(params)
    kq = normalization_quad(link)
    return abs(normalization_closed(link, variant) / kq - 1.0)


def closed_vs_numeric(params) -> tuple[float, float, float]:
    """(closed-form C, mi_numeric(f*), mi_taylor(f*)) in bits."""
    link = LinkModel(params)
    fstar = optimal_input_pdf(link)
    return capacity_closed_form(link).C_bits, mi_numeric(fstar, link), mi_taylor(fstar, link)


def ba_capacity(params, n_in=512, n_out=2048):
    return capacity_blahut_arimoto(discretize_channel(params, n_in, n_out))


def perturbation_excess(params, n=20, seed=1) -> float:
    """max over perturbed q of mi_numeric(q) - mi_numeric(f*)."""
    link = LinkModel(params)
    fstar = optimal_input_pdf(link)
    ref = mi_numeric(fstar, link)
    return max(mi_numeric(q, link) for q in perturbed_pdfs(fstar, n, seed)) - ref


def mc_checks(params, n_trials=100_000, seed=7) -> list[Check]:
    out = []
    link = LinkModel(params)
    for Ntx in MC_POINTS:
        sim = simulate_link(link, Ntx, n_trials, seed)
        z_mean = abs(sim.mean - sim.expected_mean) / sim.mean_stderr
        z_var = abs(sim.var - sim.expected_var) / sim.var_stderr
        out.append(_le(f"mc_mean_z[Ntx={Ntx:g}]", z_mean, MC_SIGMAS))
        out.append(_le(f"mc_var_z[Ntx={Ntx:g}]", z_var, MC_SIGMAS))
        if link.N_r >= 1000:
            out.append(_le(f"normality_ks[Ntx={Ntx:g}]", normality_check(sim.samples),
                           NORMALITY_MAX))
    return out


def run_checks(params: SystemParams, level: str = "fast", variant: str = "corrected",
               draws: int = 20) -> list[Check]:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    checks = [_le("K_quadrature_vs_closed_rel", k_gap(params, variant), K_RTOL,
                  f"variant={variant}")]
    C, mi_num, mi_tay = closed_vs_numeric(params)
    checks.append(_le("closed_form_vs_mi_numeric_bits", abs(C - mi_num), CLOSED_VS_NUMERIC_BITS,
                      f"C={C:.4f} mi_numeric={mi_num:.4f}"))
    checks.append(_le("taylor_vs_mi_numeric_bits", abs(mi_tay - mi_num), TAYLOR_VS_NUMERIC_BITS))
    if level == "fast":
        return checks

    samples = random_params(draws, params)
    k_worst = max(k_gap(p, variant) for p in samples)
    checks.append(_le(f"K_quadrature_vs_closed_rel[{draws} draws]", k_worst, K_RTOL))
    gaps = [abs(c - m) for c, m, _ in map(closed_vs_numeric, samples)]
    checks.append(_le(f"closed_form_vs_mi_numeric_bits[{draws} draws]", max(gaps),
                      CLOSED_VS_NUMERIC_BITS))
    ba = ba_capacity(params)
    checks.append(_le("blahut_arimoto_vs_closed_bits", abs(ba.capacity_bits - C), BA_VS_CLOSED_BITS,
                      f"BA={ba.capacity_bits:.4f} iters={ba.iterations}"))
    checks.append(_le("perturbed_pdf_excess_bits", perturbation_excess(params), PERTURB_SLACK_BITS))
    checks.extend(mc_checks(params))
    bsc_ba = capacity_blahut_arimoto(bsc(0.11), tol_bits=1e-9).capacity_bits
    checks.append(_le("bsc_0.11_bits", abs(bsc_ba - (1 - binary_entropy(0.11))), BSC_BITS))
    return checks


def summary(checks: list[Check]) -> dict:
    return {"passed": all(c.passed for c in checks),
            "checks": [c.to_dict() for c in checks]}
