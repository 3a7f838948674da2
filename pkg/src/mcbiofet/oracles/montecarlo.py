"""Monte Carlo draws of the receiver output current.

Each trial samples the bound count N_b ~ Binomial(N_r, P_b) and adds an
independent N(0, sigma_F^2) flicker term: I = g_FET psi_L N_b + noise.
A non-integer receptor count is handled by one extra receptor present with
probability frac(N_r), which keeps E[N_b] = P_b N_r exactly.

Trials are generated in fixed-size blocks with their own spawned seeds, so
the samples (and hence the moments) do not depend on how many workers run.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..link import LinkModel
from ..params import SystemParams

BLOCK = 8192


@dataclass(frozen=True)
class Moments:
    n: int
    mean: float
    m2: float                 # sum of squared deviations

    @property
    def var(self) -> float:
        return self.m2 / (self.n - 1) if self.n > 1 else 0.0

    @classmethod
    def of(cls, x: np.ndarray) -> "Moments":
        m = float(x.mean())
        return cls(x.size, m, float(((x - m) ** 2).sum()))

    def merge(self, other: "Moments") -> "Moments":
        n = self.n + other.n
        if n == 0:
            return self
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta ** 2 * self.n * other.n / n
        return Moments(n, mean, m2)


@dataclass(frozen=True)
class SimulationResult:
    Ntx: float
    mean: float
    var: float
    n_trials: int
    samples: np.ndarray
    expected_mean: float
    expected_var: float

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(self.expected_var / self.n_trials)

    expected_kappa4: float = 0.0

    @property
    def var_stderr(self) -> float:
        """Standard error of the sample variance, sqrt((kappa4 + 2 sigma^4) / n)."""
        return math.sqrt((self.expected_kappa4 + 2 * self.expected_var ** 2) / self.n_trials)


def _block(link: LinkModel, Ntx: float, n: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    P = float(link.bound_probability(Ntx))
    whole = int(math.floor(link.N_r))
    frac = link.N_r - whole
    nb = rng.binomial(whole, P, size=n).astype(float)
    if frac > 0:
        nb += rng.random(n) < frac * P
    flicker = rng.normal(0.0, math.sqrt(link.sigma2_F), size=n)
    return link.gain * nb + flicker


def simulate_link(params: SystemParams | LinkModel, Ntx: float, n_trials: int,
                  seed: int = 0, workers: int = 1) -> SimulationResult:
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    link = params if isinstance(params, LinkModel) else LinkModel(params)
    sizes = [BLOCK] * (n_trials // BLOCK)
    if n_trials % BLOCK:
        sizes.append(n_trials % BLOCK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i):
        return _block(link, Ntx, sizes[i], seeds[i])

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(run, range(len(sizes))))
    else:
        blocks = [run(i) for i in range(len(sizes))]
    total = Moments(0, 0.0, 0.0)
    for b in blocks:
        total = total.merge(Moments.of(b))
    return SimulationResult(Ntx, total.mean, total.var, n_trials, np.concatenate(blocks),
                            float(link.mean(Ntx)), float(link.variance(Ntx)),
                            _binding_kappa4(link, Ntx))


def _binding_kappa4(link: LinkModel, Ntx: float) -> float:
    # the Gaussian flicker term has zero fourth cumulant
    P = float(link.bound_probability(Ntx))
    pq = P * (1 - P)
    return link.gain ** 4 * link.N_r * pq * (1 - 6 * pq)


def normality_check(samples) -> float:
    """Kolmogorov-Smirnov distance between ``samples`` and their fitted normal."""
    x = np.asarray(samples, float)
    sd = x.std(ddof=1)
    if sd == 0:
        return 0.0
    return float(stats.kstest(x, "norm", args=(x.mean(), sd)).statistic)
