"""Mutual information of the Gaussian output-current channel by nested quadrature.

I(X; Y) = h(Y) - E_X[h(Y | X)], where the output marginal p_Y is the input
mixture of N(mean(x), var(x)). The x nodes are spaced uniformly in output mean
(plus the input pdf's own nodes), the y nodes uniformly in units of the
smallest conditional standard deviation. Both are refined together until two
successive estimates agree to ``quad_tol`` bits.
"""
from __future__ import annotations

import numpy as np

from ..capacity import TabulatedPdf
from ..link import LinkModel
from ..params import SystemParams

_TAIL_SIGMAS = 10.0
_MAX_CELLS = 2e8


class ConvergenceError(RuntimeError):
    def __init__(self, msg, achieved):
        super().__init__(f"{msg} (achieved {achieved:.3g})")
        self.achieved = achieved


def _x_nodes(pdf: TabulatedPdf, link: LinkModel, step: float):
    lo, hi = pdf.grid[0], pdf.grid[-1]
    mu_lo, mu_hi = link.mean(lo), link.mean(hi)
    n = int(np.ceil((mu_hi - mu_lo) / step)) + 1
    mu = np.linspace(mu_lo, mu_hi, max(n, 2))
    top = link.gain * link.N_r
    x = link.x_half * mu / (top - mu)      # inverse of the mean map
    x = np.union1d(np.clip(x, lo, hi), pdf.grid)
    return x


def _estimate(pdf: TabulatedPdf, link: LinkModel, per_sigma: int) -> tuple[float, int]:
    sig_all = link.sigma(pdf.grid)
    scale = sig_all.min()
    x = _x_nodes(pdf, link, scale / per_sigma)
    w = np.zeros_like(x)
    f = pdf(x)
    dx = np.diff(x)
    w[:-1] += 0.5 * dx * f[:-1]
    w[1:] += 0.5 * dx * f[1:]
    keep = w > 0
    x, w = x[keep], w[keep] / w.sum()

    # work in units of the smallest sigma, centred on the lowest mean
    mu = (link.mean(x) - link.mean(pdf.grid[0])) / scale
    sd = link.sigma(x) / scale
    y_lo = (mu - _TAIL_SIGMAS * sd).min()
    y_hi = (mu + _TAIL_SIGMAS * sd).max()
    ny = int(np.ceil((y_hi - y_lo) * per_sigma)) + 1
    y = np.linspace(y_lo, y_hi, ny)

    # means are sorted in x, so each chunk of nodes only touches a band of y
    py = np.zeros(ny)
    cells = 0
    chunk = 256
    for i in range(0, x.size, chunk):
        m, s, ww = mu[i:i + chunk, None], sd[i:i + chunk, None], w[i:i + chunk, None]
        a = np.searchsorted(y, (m - _TAIL_SIGMAS * s).min())
        b = np.searchsorted(y, (m + _TAIL_SIGMAS * s).max(), side="right")
        cells += m.size * (b - a)
        if cells > _MAX_CELLS:
            raise ConvergenceError("grid too large", np.nan)
        yy = y[a:b]
        py[a:b] += (ww / (np.sqrt(2 * np.pi) * s) * np.exp(-0.5 * ((yy - m) / s) ** 2)).sum(0)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(py > 0, py * np.log2(py), 0.0)
    h_y = -np.trapezoid(integrand, y)
    h_y_x = np.dot(w, 0.5 * np.log2(2 * np.pi * np.e * sd ** 2))
    return float(h_y - h_y_x), cells


def mi_numeric(input_pdf: TabulatedPdf, params: SystemParams | LinkModel,
               quad_tol: float = 1e-4, start: int = 4, max_per_sigma: int = 256) -> float:
    """Mutual information in bits between Ntx ~ ``input_pdf`` and the output current."""
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    per_sigma = start
    prev, _ = _estimate(input_pdf, link, per_sigma)
    achieved = np.inf
    while per_sigma < max_per_sigma:
        per_sigma *= 2
        try:
            cur, _ = _estimate(input_pdf, link, per_sigma)
        except ConvergenceError:
            break
        achieved = abs(cur - prev)
        if achieved < quad_tol:
            return cur
        prev = cur
    raise ConvergenceError(f"mi_numeric did not reach tolerance {quad_tol:g} bits", achieved)
