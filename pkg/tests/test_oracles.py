import math

import numpy as np
import pytest
from scipy import stats

from mcbiofet import LinkModel, TabulatedPdf, capacity_closed_form, mi_taylor, optimal_input_pdf
from mcbiofet.oracles import (ConvergenceError, binary_entropy, bsc, capacity_blahut_arimoto,
                              discretize_channel, mi_numeric, normality_check, perturbed_pdfs,
                              random_params, simulate_link, smooth_test_pdfs)
from mcbiofet.params import validate


@pytest.fixture
def dense_link(quiet_params):
    """Low-flicker regime with 100x the receptor density (N_r ~ 1.26e5), where the
    high-SNR expansion behind the closed form is accurate."""
    return LinkModel(quiet_params.with_values(**{"receptor.rho_SR": 4e18}))


def brute_force_mi(pdf, link, nx=6001, ny=20001):
    """Independent dense double sum of h(Y) - h(Y|X), shared code limited to the link."""
    x = np.linspace(pdf.grid[0], pdf.grid[-1], nx)
    w = np.interp(x, pdf.grid, pdf.density)
    w /= w.sum()
    mu, sd = link.mean(x), link.sigma(x)
    y = np.linspace((mu - 9 * sd).min(), (mu + 9 * sd).max(), ny)
    py = np.zeros_like(y)
    for i in range(0, nx, 500):
        py += (w[i:i + 500, None] * stats.norm.pdf(y, mu[i:i + 500, None], sd[i:i + 500, None])).sum(0)
    hy = -np.trapezoid(np.where(py > 0, py * np.log2(np.where(py > 0, py, 1)), 0), y)
    return hy - np.dot(w, 0.5 * np.log2(2 * np.pi * np.e * sd ** 2))


# -- mi_numeric --------------------------------------------------------------

@pytest.mark.parametrize("fixture", ["quiet_link", "link"])
def test_mi_numeric_matches_brute_force(fixture, request):
    lk = request.getfixturevalue(fixture)
    f = optimal_input_pdf(lk)
    assert abs(mi_numeric(f, lk, quad_tol=1e-5) - brute_force_mi(f, lk)) < 1e-3


def test_mi_numeric_point_input(quiet_link):
    x0 = 3e8
    g = np.linspace(x0, x0 * 1.00001, 65)
    assert abs(mi_numeric(TabulatedPdf.from_values(g, np.ones_like(g)), quiet_link)) < 1e-4


def test_mi_numeric_two_far_levels(quiet_link):
    lo, hi = quiet_link.x_min, quiet_link.x_max
    w = 1e-6 * (hi - lo)
    g = np.concatenate([np.linspace(lo, lo + w, 33), np.linspace(hi - w, hi, 33)])
    pdf = TabulatedPdf.from_values(g, np.r_[np.ones(33), np.ones(33)])
    # bridge nodes carry zero density between the two bumps
    g2 = np.r_[g[:33], lo + 2 * w, hi - 2 * w, g[33:]]
    d2 = np.r_[pdf.density[:33], 0, 0, pdf.density[33:]]
    bimodal = TabulatedPdf.from_values(g2, d2)
    assert mi_numeric(bimodal, quiet_link) == pytest.approx(1.0, abs=2e-3)


def test_mi_numeric_nonnegative_and_deterministic(link):
    f = optimal_input_pdf(link)
    a, b = mi_numeric(f, link), mi_numeric(f, link)
    assert a == b
    assert a >= 0


def test_mi_numeric_reports_failed_convergence(quiet_link):
    f = optimal_input_pdf(quiet_link)
    with pytest.raises(ConvergenceError, match="achieved"):
        mi_numeric(f, quiet_link, quad_tol=1e-15, max_per_sigma=16)


def test_taylor_error_shrinks_with_receptor_count(quiet_params):
    gaps = []
    for scale in (1, 10, 100):
        lk = LinkModel(quiet_params.with_values(**{"receptor.rho_SR": 4e16 * scale}))
        gaps.append(abs(capacity_closed_form(lk).C_bits - mi_numeric(optimal_input_pdf(lk), lk)))
    assert gaps[0] > gaps[1] > gaps[2]
    # roughly 1/sqrt(N_r)
    assert 2 < gaps[0] / gaps[1] < 6 and 2 < gaps[1] / gaps[2] < 6


def test_dense_regime_closed_form_agreement(dense_link):
    f = optimal_input_pdf(dense_link)
    C = capacity_closed_form(dense_link).C_bits
    assert abs(C - mi_numeric(f, dense_link)) < 0.02
    for name, q in smooth_test_pdfs(dense_link.x_min, dense_link.x_max).items():
        assert abs(mi_taylor(q, dense_link) - mi_numeric(q, dense_link)) < 0.05, name


def test_dense_regime_optimum_not_beaten(dense_link):
    f = optimal_input_pdf(dense_link)
    ref = mi_numeric(f, dense_link)
    for q in perturbed_pdfs(f, 20):
        assert mi_numeric(q, dense_link) <= ref + 0.02


# -- Blahut-Arimoto ----------------------------------------------------------

def test_bsc():
    r = capacity_blahut_arimoto(bsc(0.11), tol_bits=1e-9)
    assert r.converged
    assert abs(r.capacity_bits - (1 - binary_entropy(0.11))) < 1e-6
    assert r.capacity_bits == pytest.approx(0.5, abs=1e-3)
    np.testing.assert_allclose(r.input_distribution, [0.5, 0.5])


def test_noiseless_identity():
    r = capacity_blahut_arimoto(np.eye(4))
    assert r.capacity_bits == pytest.approx(2.0, abs=1e-12)


def test_asymmetric_channel_against_analytic_z_channel():
    # Z channel with crossover p: C = log2(1 + (1-p) p^(p/(1-p)))
    p = 0.3
    r = capacity_blahut_arimoto(np.array([[1.0, 0.0], [p, 1 - p]]), tol_bits=1e-10)
    assert r.capacity_bits == pytest.approx(math.log2(1 + (1 - p) * p ** (p / (1 - p))), abs=1e-8)


def test_ba_history_monotone_and_gap(quiet_link):
    r = capacity_blahut_arimoto(discretize_channel(quiet_link, 128, 512))
    assert r.converged and 0 <= r.gap_bound < 1e-3
    assert np.all(np.diff(r.history) >= -1e-12)


def test_ba_flags_nonconvergence(quiet_link):
    r = capacity_blahut_arimoto(discretize_channel(quiet_link, 128, 512), max_iter=3)
    assert not r.converged and r.iterations == 3 and r.gap_bound > 1e-3


def test_discretized_rows(quiet_link):
    ch = discretize_channel(quiet_link, 64, 256)
    np.testing.assert_allclose(ch.transition_matrix.sum(1), 1.0, atol=1e-9)
    assert np.all(ch.transition_matrix >= 0)
    centres = np.r_[ch.output_edges[1], 0.5 * (ch.output_edges[1:-2] + ch.output_edges[2:-1]),
                    ch.output_edges[-2]]
    means = ch.transition_matrix @ centres
    assert np.all(np.diff(means) > 0)


def test_discretize_rejects_small_grids(quiet_link):
    with pytest.raises(ValueError):
        discretize_channel(quiet_link, 32, 256)


def test_output_refinement_stable(quiet_link):
    a = capacity_blahut_arimoto(discretize_channel(quiet_link, 128, 1024)).capacity_bits
    b = capacity_blahut_arimoto(discretize_channel(quiet_link, 128, 2048)).capacity_bits
    assert abs(a - b) < 0.01


def test_ba_not_below_numeric_mi_of_optimum(quiet_link):
    # a capacity estimate cannot fall short of the MI of any admissible input by
    # more than its gap plus discretisation loss
    ba = capacity_blahut_arimoto(discretize_channel(quiet_link, 256, 1024)).capacity_bits
    assert ba >= mi_numeric(optimal_input_pdf(quiet_link), quiet_link) - 0.01


def test_dense_regime_ba_agreement(dense_link):
    ba = capacity_blahut_arimoto(discretize_channel(dense_link, 512, 2048))
    assert abs(ba.capacity_bits - capacity_closed_form(dense_link).C_bits) < 0.05


# -- Monte Carlo -------------------------------------------------------------

def test_simulation_deterministic(link):
    a = simulate_link(link, 1e9, 20_000, seed=5)
    b = simulate_link(link, 1e9, 20_000, seed=5)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert a.mean == b.mean and a.var == b.var


def test_simulation_independent_of_workers(quiet_link):
    a = simulate_link(quiet_link, 3e8, 50_000, seed=11, workers=1)
    b = simulate_link(quiet_link, 3e8, 50_000, seed=11, workers=4)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert (a.mean, a.var) == (b.mean, b.var)


def test_silent_link_gives_zeros(params):
    silent = LinkModel(params.with_values(**{"noise.N_ot": 0.0}), validate=False)
    sim = simulate_link(silent, 0.0, 1000, seed=1)
    assert np.all(sim.samples == 0)


@pytest.mark.parametrize("fixture", ["link", "quiet_link"])
@pytest.mark.parametrize("Ntx", [1e8, 3e8, 1e9])
def test_simulated_moments(fixture, Ntx, request):
    lk = request.getfixturevalue(fixture)
    sim = simulate_link(lk, Ntx, 100_000, seed=2)
    assert abs(sim.mean - sim.expected_mean) < 5 * sim.mean_stderr
    assert abs(sim.var - sim.expected_var) < 5 * sim.var_stderr


def test_normality_self_test():
    x = np.random.default_rng(0).normal(3.0, 2.0, 40_000)
    assert normality_check(x) < 3 / math.sqrt(x.size)


def test_normality_breaks_with_few_receptors(quiet_params):
    few = quiet_params.with_values(**{"receptor.rho_SR": 4e16 * 10 / 1256.637,
                                      "noise.N_ot": 1e-12 * quiet_params.noise.N_ot})
    lk = LinkModel(few)
    sim = simulate_link(lk, 1e9, 20_000, seed=3)
    assert normality_check(sim.samples) > 0.05
    many = simulate_link(LinkModel(quiet_params.with_values(
        **{"noise.N_ot": 1e-12 * quiet_params.noise.N_ot})), 1e9, 20_000, seed=3)
    assert normality_check(many.samples) < 0.02


# -- random draws ------------------------------------------------------------

def test_random_params_valid_and_reproducible(params):
    a = random_params(20)
    b = random_params(20)
    assert a == b
    assert all(validate(p) == [] for p in a)
    assert len({p.digest() for p in a}) == 20
    for p in a:
        ratio = p.channel.d / params.channel.d
        assert 0.25 <= ratio <= 4
