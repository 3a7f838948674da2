"""Acceptance criteria, each run at its stated tolerance on the default parameters.

Every criterion prints one ``[PASS]``/``[FAIL]`` line. Run the file directly
(``python3 tests/test_acceptance.py``) for the report alone.
"""
import math
import sys
import time
import warnings

import numpy as np
import pytest

from mcbiofet import (LinkModel, capacity_closed_form, default_params, gaussian_entropy,
                      mi_taylor, optimal_input_pdf)
from mcbiofet.binding import bound_probability
from mcbiofet.capacity import flicker_ratio
from mcbiofet.params import GaussianRegimeWarning
from mcbiofet.oracles import (binary_entropy, bsc, capacity_blahut_arimoto, mi_numeric,
                              perturbed_pdfs, random_params, smooth_test_pdfs)
from mcbiofet.sweep import SweepSpec, run_sweep
from mcbiofet.validation import ba_capacity, closed_vs_numeric, k_gap, mc_checks


def _curve(variable, values, base=None):
    spec = SweepSpec(variable, tuple(values))
    return np.array([r["C (bits)"] for r in run_sweep(spec, base or default_params())])


def criterion_1():
    t0 = time.perf_counter()
    base = default_params()
    gaps = [abs(c - m) for c, m, _ in map(closed_vs_numeric, [base] + random_params(20, base))]
    elapsed = time.perf_counter() - t0
    ok = max(gaps) <= 0.02 and elapsed < 60
    return ok, (f"default gap {gaps[0]:.4g} bits, worst of 20 draws {max(gaps[1:]):.4g} bits "
                f"(tol 0.02), {elapsed:.1f} s (limit 60)")


def criterion_2():
    p = default_params()
    C = capacity_closed_form(p).C_bits
    ba = ba_capacity(p, 512, 2048)
    link = LinkModel(p)
    f = optimal_input_pdf(link)
    ref = mi_numeric(f, link)
    excess = max(mi_numeric(q, link) for q in perturbed_pdfs(f, 20)) - ref
    ok = abs(ba.capacity_bits - C) <= 0.05 and excess <= 0.02
    return ok, (f"BA {ba.capacity_bits:.4g} vs C {C:.4g} bits (tol 0.05); "
                f"max perturbed excess {excess:.3g} bits (tol 0.02)")


def criterion_3():
    base = default_params()
    gaps = [k_gap(p) for p in [base] + random_params(20, base)]
    return max(gaps) <= 1e-6, f"worst relative K gap {max(gaps):.3g} (tol 1e-6)"


def criterion_4():
    checks = mc_checks(default_params(), n_trials=100_000)
    worst = {kind: max(c.measured for c in checks if c.name.startswith(kind))
             for kind in ("mc_mean_z", "mc_var_z", "normality_ks")}
    return all(c.passed for c in checks), (
        f"max |z| mean {worst['mc_mean_z']:.2f}, var {worst['mc_var_z']:.2f} (tol 5); "
        f"max KS {worst['normality_ks']:.4f} (tol 0.02)")


def criterion_5():
    ntx = np.geomspace(1e8, 1e12, 21)[1:]
    C = _curve("Ntx_max", ntx)
    c11, c12 = _curve("Ntx_max", [1e11, 1e12])
    mono = bool(np.all(np.diff(C) >= 0))
    ok = mono and c12 - c11 < 0.2 and 3 <= c12 <= 7
    return ok, (f"nondecreasing={mono}; C(1e12)-C(1e11)={c12 - c11:.3g} (< 0.2); "
                f"saturated C={c12:.3g} bits (want [3, 7])")


def criterion_6():
    d = np.geomspace(50e-6, 1e-3, 25)
    C = _curve("d", d)
    k = int(np.argmax(C))
    unimodal = 0 < k < len(d) - 1 and np.all(np.diff(C[:k + 1]) > 0) and np.all(np.diff(C[k:]) < 0)
    near = 150e-6 / 3 <= d[k] <= 150e-6 * 3
    return bool(unimodal and near), f"peak at d={d[k] * 1e6:.0f} um, single interior max={bool(unimodal)}"


def criterion_7():
    c_ion = _curve("c_ion", np.geomspace(10, 300, 12))
    n0 = default_params().noise.N_ot
    n_ot = _curve("N_ot", n0 * np.geomspace(0.1, 10, 12))
    a, b = bool(np.all(np.diff(c_ion) < 0)), bool(np.all(np.diff(n_ot) < 0))
    return a and b, f"strictly decreasing in c_ion={a}, in N_ot={b}"


def criterion_8():
    link = LinkModel(default_params())
    pdfs = {"f*": optimal_input_pdf(link), **smooth_test_pdfs(link.x_min, link.x_max)}
    gaps = {k: abs(mi_taylor(q, link) - mi_numeric(q, link)) for k, q in pdfs.items()}
    worst = max(gaps, key=gaps.get)
    return (link.N_r >= 1000 and gaps[worst] <= 0.05,
            f"N_r={link.N_r:.0f}; worst gap {gaps[worst]:.4g} bits on '{worst}' (tol 0.05)")


def criterion_9():
    p = default_params()
    bsc_gap = abs(capacity_blahut_arimoto(bsc(0.11), tol_bits=1e-9).capacity_bits
                  - (1 - binary_entropy(0.11)))
    L0 = flicker_ratio(LinkModel(p.with_values(**{"noise.N_ot": 0.0}), validate=False))
    r = p.receptor
    pb = float(bound_probability(r.K_D, r.k1, r.k_m1))
    ent = float(gaussian_entropy(4.0 * 2.3e-17) - gaussian_entropy(2.3e-17))
    ok = bsc_gap <= 1e-3 and L0 == 1.0 and pb == 0.5 and abs(ent - 1.0) <= 1e-12
    return ok, (f"BSC gap {bsc_gap:.2e}; L(sigma_F=0)={L0!r}; P_b(K_D)={pb!r}; "
                f"entropy step {ent!r} bits")


CRITERIA = {
    1: ("closed form vs numeric MI", criterion_1),
    2: ("optimality (Blahut-Arimoto, perturbations)", criterion_2),
    3: ("K quadrature vs arcsine", criterion_3),
    4: ("Monte Carlo moments and normality", criterion_4),
    5: ("capacity vs Ntx_max saturation", criterion_5),
    6: ("interior maximum in distance", criterion_6),
    7: ("decrease with c_ion and N_ot", criterion_7),
    8: ("Taylor approximation validity", criterion_8),
    9: ("analytic unit checks", criterion_9),
}


def report_line(n):
    name, fn = CRITERIA[n]
    ok, detail = fn()
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {n} ({name}): {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = report_line(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    warnings.simplefilter("ignore", GaussianRegimeWarning)
    results = [report_line(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
