"""Closed-form capacity of the memoryless Ntx -> I_rx Gaussian channel.

Under the high-SNR (second-order Taylor) approximation the mutual information
is a functional of the input density alone, maximised by

    f*(x) = 1 / (K sigma(x) (alpha k1 x + k_m1)^2)

with the substitution s = (x - x_half) / (x + x_half), x_half = K_D / alpha,
turning the normaliser into an arcsine:

    K = [asin(L s_max) - asin(L s_min)] / (M sqrt(N_r))
    C = 0.5 log2(N_r / (2 pi e)) + log2[asin(L s_max) - asin(L s_min)]

The ``"literal"`` variant reproduces the printed form whose lower arcsine
argument is (x_min - x_half)/(x_min - x_half) = 1; it exists only so the
validation suite can show that it disagrees with quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .link import LinkModel
from .params import SystemParams

LOG2E = 1.0 / math.log(2.0)


class CapacityUndefined(ArithmeticError):
    """The arcsine bracket is not positive, so log2 of it is meaningless."""


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class TabulatedPdf:
    """Density on a strictly increasing grid, piecewise linear between nodes."""

    grid: np.ndarray
    density: np.ndarray
    norm_residual: float

    def __post_init__(self):
        g, p = np.asarray(self.grid, float), np.asarray(self.density, float)
        if g.ndim != 1 or g.shape != p.shape or g.size < 2:
            raise ValueError("grid and density must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("density must be finite and nonnegative")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "density", p)

    @classmethod
    def from_values(cls, grid, values, normalize: bool = True) -> "TabulatedPdf":
        grid, values = np.asarray(grid, float), np.asarray(values, float)
        total = np.trapezoid(values, grid)
        if normalize:
            if not total > 0:
                raise NormalizationError("density integrates to zero")
            values = values / total
            total = np.trapezoid(values, grid)
        return cls(grid, values, abs(total - 1.0))

    @classmethod
    def from_callable(cls, func, lo: float, hi: float, n: int = 1024) -> "TabulatedPdf":
        grid = np.linspace(lo, hi, n)
        return cls.from_values(grid, func(grid))

    def __call__(self, x):
        return np.interp(x, self.grid, self.density, left=0.0, right=0.0)

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))


@dataclass(frozen=True)
class CapacityResult:
    C_bits: float
    L: float
    M: float
    K_norm: float
    arcsin_hi: float
    arcsin_lo: float
    formula_variant: str


def transition_pdf(y, Ntx, params: SystemParams | LinkModel):
    """Gaussian density of the output current ``y`` (A) given ``Ntx`` released."""
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    var = link.variance(Ntx)
    if np.any(var <= 0):
        raise ValueError("degenerate output variance")
    y = np.asarray(y, float)
    out = np.exp(-0.5 * (y - link.mean(Ntx)) ** 2 / var) / np.sqrt(2 * np.pi * var)
    return out[()] if out.ndim == 0 else out


def gaussian_entropy(sigma2):
    """Differential entropy of N(., sigma2) in bits."""
    sigma2 = np.asarray(sigma2, float)
    if np.any(sigma2 <= 0):
        raise ValueError("variance must be > 0")
    out = 0.5 * np.log2(2 * np.pi * np.e * sigma2)
    return out[()] if out.ndim == 0 else out


def composite_constant(link: LinkModel) -> float:
    """M = alpha_ch k1 k_m1 g_FET psi_L."""
    return link.alpha * link.k1 * link.k_m1 * link.gain


def flicker_ratio(link: LinkModel) -> float:
    """L = sqrt(G^2 N_r / (4 sigma_F^2 + G^2 N_r)), G = g_FET psi_L."""
    b = link.gain ** 2 * link.N_r
    return math.sqrt(b / (4 * link.sigma2_F + b))


def _arcsine_terms(link: LinkModel, variant: str) -> tuple[float, float, float]:
    L = flicker_ratio(link)
    h = link.x_half
    s_hi = (link.x_max - h) / (link.x_max + h)
    if variant == "corrected":
        s_lo = (link.x_min - h) / (link.x_min + h)
    elif variant == "literal":
        s_lo = (link.x_min - h) / (link.x_min - h)
    else:
        raise ValueError(f"unknown formula variant {variant!r}")
    return L, math.asin(L * s_hi), math.asin(L * s_lo)


def _k_integrand(link: LinkModel):
    def f(x):
        return 1.0 / (link.sigma(x) * (link.alpha * link.k1 * x + link.k_m1) ** 2)
    return f


def normalization_quad(params: SystemParams | LinkModel, rtol: float = 1e-10) -> float:
    """K = int dx / (sigma(x) (alpha k1 x + k_m1)^2) by adaptive quadrature."""
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    f = _k_integrand(link)
    # integrate in u = x / x_max so the abscissae are O(1)
    val, err = integrate.quad(lambda u: f(u * link.x_max), link.x_min / link.x_max, 1.0,
                              epsabs=0.0, epsrel=rtol, limit=200)
    val *= link.x_max
    if not (np.isfinite(val) and val > 0) or err * link.x_max > 1e3 * rtol * val:
        raise NormalizationError(f"K quadrature did not converge (value {val}, err {err})")
    return val


def normalization_closed(params: SystemParams | LinkModel, variant: str = "corrected") -> float:
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    _, a_hi, a_lo = _arcsine_terms(link, variant)
    return (a_hi - a_lo) / (composite_constant(link) * math.sqrt(link.N_r))


def optimal_input_pdf(params: SystemParams | LinkModel, grid_size: int = 1024) -> TabulatedPdf:
    """Capacity-achieving density f* tabulated on a uniform grid over [Ntx_min, Ntx_max]."""
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    K = normalization_quad(link)
    grid = np.linspace(link.x_min, link.x_max, grid_size)
    dens = _k_integrand(link)(grid) / K
    return TabulatedPdf(grid, dens, abs(np.trapezoid(dens, grid) - 1.0))


def mi_taylor(input_pdf: TabulatedPdf, params: SystemParams | LinkModel) -> float:
    """Mutual information (bits) under the high-SNR approximation.

    -int f(x) [log2 sqrt(2 pi e sigma^2) + log2 f(x) - log2 |d mean/dx|] dx,
    integrated by trapezoid on the pdf's own grid.
    """
    if input_pdf.norm_residual > 1e-4:
        raise NormalizationError(f"input pdf residual {input_pdf.norm_residual:.2e} > 1e-4")
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    x, f = input_pdf.grid, input_pdf.density
    with np.errstate(divide="ignore"):
        logf = np.where(f > 0, np.log2(np.where(f > 0, f, 1.0)), 0.0)
    terms = gaussian_entropy(link.variance(x)) + logf - np.log2(link.mean_slope(x))
    return float(-np.trapezoid(f * terms, x))


def capacity_closed_form(params: SystemParams | LinkModel,
                         variant: str = "corrected") -> CapacityResult:
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    L, a_hi, a_lo = _arcsine_terms(link, variant)
    bracket = a_hi - a_lo
    if not bracket > 0:
        raise CapacityUndefined(f"arcsine bracket {bracket:g} <= 0")
    M = composite_constant(link)
    C = 0.5 * math.log2(link.N_r / (2 * math.pi * math.e)) + math.log2(bracket)
    return CapacityResult(C_bits=C, L=L, M=M, K_norm=bracket / (M * math.sqrt(link.N_r)),
                          arcsin_hi=a_hi, arcsin_lo=a_lo, formula_variant=variant)
