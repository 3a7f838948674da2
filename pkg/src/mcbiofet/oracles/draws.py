"""Seeded random parameter sets scattered log-uniformly around a base point."""
from __future__ import annotations

import numpy as np

from ..capacity import CapacityUndefined, capacity_closed_form
from ..params import SystemParams, default_params, validate

MASTER_SEED = 20160613


def random_params(n: int, base: SystemParams | None = None, seed: int = MASTER_SEED,
                  span: float = 4.0, max_tries: int = 10_000) -> list[SystemParams]:
    """Draw ``n`` parameter sets, each nonzero float field scaled by a factor
    log-uniform in [1/span, span]. Draws that fail validation or leave the
    capacity formula undefined are rejected."""
    base = base if base is not None else default_params()
    keys = [k for k, v in base.items() if isinstance(v, float) and v != 0.0]
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(max_tries):
        if len(out) == n:
            break
        scale = np.exp(rng.uniform(-np.log(span), np.log(span), len(keys)))
        cand = base.with_values(**{k: base.get(k) * float(s) for k, s in zip(keys, scale)})
        if validate(cand):
            continue
        try:
            capacity_closed_form(cand)
        except (CapacityUndefined, ValueError):
            continue
        out.append(cand)
    if len(out) < n:
        raise RuntimeError(f"only {len(out)} of {n} valid draws after {max_tries} tries")
    return out


def perturbed_pdfs(base_pdf, n: int, seed: int = MASTER_SEED, strength: float = 0.5,
                   harmonics: int = 4):
    """Smooth multiplicative perturbations of ``base_pdf`` on the same support:
    q(x) ~ p(x) exp(sum_k a_k cos(k pi t) + b_k sin(k pi t)), t in [0, 1]."""
    from ..capacity import TabulatedPdf

    rng = np.random.default_rng(seed)
    g = base_pdf.grid
    t = (g - g[0]) / (g[-1] - g[0])
    k = np.arange(1, harmonics + 1)[:, None]
    out = []
    for _ in range(n):
        a = rng.normal(0, strength / k[:, 0])[:, None]
        b = rng.normal(0, strength / k[:, 0])[:, None]
        tilt = (a * np.cos(np.pi * k * t) + b * np.sin(np.pi * k * t)).sum(0)
        out.append(TabulatedPdf.from_values(g, base_pdf.density * np.exp(tilt)))
    return out


def smooth_test_pdfs(lo: float, hi: float, n: int = 1024) -> dict:
    """A handful of smooth, strictly positive densities on [lo, hi]."""
    from ..capacity import TabulatedPdf

    g = np.linspace(lo, hi, n)
    t = (g - lo) / (hi - lo)
    shapes = {
        "uniform": np.ones_like(t),
        "falling": 2.0 - t,
        "rising": 1.0 + t,
        "bump": 0.05 + np.exp(-0.5 * ((t - 0.5) / 0.15) ** 2),
        "beta25": 0.02 + t * (1 - t) ** 4,
    }
    return {name: TabulatedPdf.from_values(g, v) for name, v in shapes.items()}
