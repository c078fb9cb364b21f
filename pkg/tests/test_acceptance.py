"""Acceptance gate: one test per criterion, at the stated tolerances.

Each test prints a single [acceptance] PASS line once its assertions hold;
a pytest failure on any test is the corresponding FAIL line.
"""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

import dysonlab as dl
from dysonlab.concentration import (
    LocalFunction,
    covariance_bound_check,
    gcb_check,
    moment_check,
    tail_check,
)
from dysonlab.decoupling import (
    BondOrder,
    crossing_bond_diagnostics,
    density_bound_constants,
    density_estimate,
    density_eigenfunction_trend,
)
from dysonlab.gibbs import (
    Window,
    dlr_consistency_check,
    heat_bath_sampler,
    shift_convergence_experiment,
    single_site_axiom_check,
    single_site_kernels,
    whole_line_single_site_kernel,
    window_gibbs,
)
from dysonlab.transfer import markov_equilibrium, word_marginal

from oracles import zeta_ref


def ok(n, text):
    print(f"[acceptance] criterion {n:2d}: PASS  {text}")


def test_criterion_01_dobrushin_closed_form():
    for alpha in (1.2, 1.5, 2.0, 3.0):
        for beta in (0.05, 0.1):
            value, _ = dl.dobrushin_bar_c(dl.dyson_interaction(alpha, beta))
            assert abs(value - 2 * beta * zeta_ref(alpha)) <= 1e-8
        bdu, _ = dl.beta_dobrushin(alpha)
        assert abs(bdu - 0.5 / zeta_ref(alpha)) <= 1e-8
    ok(1, "bar_c = 2 beta zeta(alpha) and beta_DU = 1/(2 zeta) within 1e-8")


def test_criterion_02_trivial_eigenpair():
    model = dl.build_transfer_model(dl.dyson_potential(2.0, 0.0), 6)
    assert abs(model.lam - 2.0) <= 1e-12
    assert model.residual < 1e-12
    assert abs(model.pressure - math.log(2.0)) <= 1e-12
    h = model.right_eig.values
    assert h.max() - h.min() <= 1e-12
    ok(2, "beta=0: lambda=2, constant eigenfunction, residual < 1e-12")


def test_criterion_03_product_equilibrium():
    target = math.exp(0.1 * zeta_ref(2.0)) / (2 * math.cosh(0.1 * zeta_ref(2.0)))
    model = dl.build_transfer_model(dl.product_potential(2.0, 0.1), 10)
    pi, _, _ = markov_equilibrium(model)
    marginal = float(word_marginal(pi, 10, 0)[1])
    assert abs(marginal - target) <= 1e-3

    inter = dl.product_interaction(2.0, 0.1)
    stream = heat_bath_sampler(inter, Window(0, 63, dl.PLUS, dl.PLUS),
                               seed=101, sweeps=8000, thin=2)
    mags = stream.magnetization_series()
    batches = mags[: (len(mags) // 32) * 32].reshape(32, -1).mean(axis=1)
    err = 3 * batches.std(ddof=1) / math.sqrt(32)
    assert abs(mags.mean() - math.tanh(0.1 * zeta_ref(2.0))) <= err
    ok(3, f"product marginal {marginal:.6f} within 1e-3; MC magnetization in 3 sigma")


def test_criterion_04_variational_identity():
    cases = [
        (dl.dyson_potential(2.0, 0.0), 4),
        (dl.dyson_potential(2.0, 0.1), 8),
        (dl.dyson_potential(3.0, 0.2), 10),
        (dl.product_potential(2.0, 0.1), 8),
        (dl.product_potential(1.8, 0.05), 6),
    ]
    for spec, depth in cases:
        model = dl.build_transfer_model(spec, depth)
        _, entropy, energy = markov_equilibrium(model)
        assert abs(entropy + energy - model.pressure) <= 1e-10
    ok(4, "entropy + energy - log lambda within 1e-10 for every built model")


def test_criterion_05_dlr_and_axiom_defects():
    worst = 0.0
    for beta in (0.1, 0.2):
        inter = dl.dyson_interaction(2.0, beta)
        for win in (
            Window(-2, 2, dl.PLUS, dl.PLUS),
            Window(-2, 2, dl.MINUS, dl.ALTERNATING),
            Window(0, 3, dl.PLUS, dl.MINUS),
        ):
            for sub in ([win.lo + 1], [win.lo, win.lo + 2], [win.lo + 1, win.lo + 2]):
                worst = max(worst, dlr_consistency_check(inter, win, sub))
        win5 = Window(-2, 2, dl.PLUS, dl.PLUS)
        kern = single_site_kernels(inter, win5)
        worst = max(worst, single_site_axiom_check(kern, 0, 1, win5, probes=64, seed=9))
    assert worst <= 1e-9

    inter = dl.dyson_interaction(2.0, 0.1)
    win = Window(-3, 3, dl.PLUS, dl.PLUS)
    kern = single_site_kernels(inter, win)

    def corrupted(site, spin, word):
        p = kern(site, spin, word)
        if site == 0 and spin == 1 and word[1 - win.lo] == 1:
            return p + 1e-3
        return p

    fired = single_site_axiom_check(corrupted, 0, 1, win, probes=64, seed=9)
    assert fired >= 1e-4
    ok(5, f"DLR/axiom defects <= 1e-9 (worst {worst:.2e}); detector fires at {fired:.2e}")


def test_criterion_06_whole_line_kernel_closed_form():
    spec = dl.dyson_potential(2.0, 0.1)
    inter = dl.dyson_interaction(2.0, 0.1)
    rng = np.random.default_rng(2024)
    for _ in range(50):
        wl = tuple(int(v) for v in rng.choice((-1, 1), size=int(rng.integers(1, 5))))
        wr = tuple(int(v) for v in rng.choice((-1, 1), size=int(rng.integers(1, 5))))
        left, right = dl.periodic(wl), dl.periodic(wr)
        p, b = whole_line_single_site_kernel(spec, 1, left, right)
        m = window_gibbs(inter, Window(0, 0, left, right))
        assert abs(p - m.probs[1]) <= b + m.meta["trunc_bound"] + 1e-12
    p_mixed, _ = whole_line_single_site_kernel(spec, 1, dl.MINUS, dl.PLUS)
    assert p_mixed == 0.5
    p_mixed2, _ = whole_line_single_site_kernel(spec, 1, dl.PLUS, dl.MINUS)
    assert p_mixed2 == 0.5
    ok(6, "closed-form kernel matches window enumeration on 50 random tails; mixed = 1/2")


def test_criterion_07_uniform_density_bounds():
    c = density_bound_constants(2.0, 0.1)
    spec = dl.dyson_potential(2.0, 0.1)
    for N in (2, 4, 6, 8):
        for d in (1, 2, 3, 4):
            if d > N + 1:
                continue
            est = density_estimate(spec, depth=d, N=N)
            assert np.all(est.values >= c.lower_bound)
            assert np.all(est.values <= c.upper_bound)
            assert est.unit_mean_defect() <= 1e-12
    ok(7, f"exact densities inside [{c.lower_bound:.4f}, {c.upper_bound:.4f}] "
          f"for d <= 4, N <= 8")


@pytest.mark.parametrize("alpha", [2.0, 3.0])
def test_criterion_08_density_eigenfunction_agreement(alpha):
    spec = dl.dyson_potential(alpha, 0.1)
    model = dl.build_transfer_model(spec, 10)
    report = density_eigenfunction_trend(
        spec, 4, [4, 8, 16], model, far_left=dl.PLUS, far_right=dl.PLUS,
    )
    sups = report["sup_dist"]
    assert sups[-1] <= 0.05
    assert report["nonincreasing_sup"]
    ok(8, f"alpha={alpha}: sup distances {['%.2e' % s for s in sups]} nonincreasing, "
          f"last <= 0.05")


def test_criterion_09_concentration_suite():
    inter = dl.dyson_interaction(2.0, 0.1)
    bar_c, _ = dl.dobrushin_bar_c(inter)
    D = 4.0 / (1.0 - bar_c) ** 2

    # exact window, 12 sites
    win = Window(-5, 6, dl.PLUS, dl.PLUS)
    measure = window_gibbs(inter, win)
    F = LocalFunction.magnetization(range(-2, 3))
    rows = [gcb_check(measure, F, D)]
    rows += tail_check(measure, LocalFunction.magnetization(range(-5, 6)), D, [2, 4, 8])
    rows += moment_check(measure, LocalFunction.spin_product([0, 1]), D, [2, 3, 4, 6])
    rows += covariance_bound_check(inter, win, [1, 2, 3, 4])
    assert all(r["passed"] for r in rows)

    # MC scale with 3-sigma margins, 20-site magnetization
    mc_win = Window(-12, 11, dl.PLUS, dl.PLUS)
    stream = heat_bath_sampler(inter, mc_win, seed=404, sweeps=64_000, thin=4)
    Fm = LocalFunction.magnetization(range(-10, 10))
    mc_rows = [gcb_check(stream, Fm, D)]
    mc_rows += tail_check(stream, Fm, D, [2, 4, 8])
    mc_rows += moment_check(stream, Fm, D, [2, 3, 4, 6])
    mc_rows += covariance_bound_check(inter, mc_win, [1, 2, 3, 4], source=stream)
    assert all(r["margin"] > 0 for r in mc_rows)
    assert all(r["passed"] for r in mc_rows)
    ok(9, f"{len(rows)} exact + {len(mc_rows)} MC concentration checks pass")


def test_criterion_10_shift_convergence():
    rows = shift_convergence_experiment(
        dl.dyson_potential(2.0, 0.1), [0, 5, 20], n_sites=96, left_len=160,
        samples=3000, seed=77,
    )
    d = {r["n"]: r for r in rows}
    sep = d[0]["distance"] - d[20]["distance"]
    sigma = math.hypot(d[0]["std_err"], d[20]["std_err"])
    assert sep > 3 * sigma
    assert d[0]["distance"] > d[20]["distance"] > 0

    prows = shift_convergence_experiment(
        dl.product_potential(2.0, 0.1), [20], n_sites=64, left_len=32,
        samples=64, seed=78,
    )
    assert prows[0]["distance"] < 0.01
    ok(10, f"shift distances {d[0]['distance']:.4f} -> {d[20]['distance']:.5f} "
           f"(3 sigma = {3*sigma:.5f}); product at n=20: {prows[0]['distance']:.5f}")


def test_criterion_11_crossing_bond_diagnostics():
    inter = dl.dyson_interaction(2.0, 0.1)
    diag = crossing_bond_diagnostics(inter, K=400, order=BondOrder("square_by_n"))
    assert diag["converges"]
    assert diag["sum_delta_sq_remainder"] >= 0
    total_ref = 8 * 0.01 * zeta_ref(3.0)
    assert abs(diag["sum_delta_sq_total"] - total_ref) <= 1e-10
    assert diag["sum_delta_sq"] + diag["sum_delta_sq_remainder"] >= total_ref - 1e-12

    rho_ref = zeta_ref(2.0) / (1.0 - 2 * 0.1 * zeta_ref(2.0))
    assert abs(diag["rho_bound_sum"] - rho_ref) <= 1e-6
    ok(11, f"sum_delta_sq certified (remainder {diag['sum_delta_sq_remainder']:.2e}); "
           f"rho bound within 1e-6 of {rho_ref:.6f}")


def _cli_artifact(tmp_path, name, argv, threads):
    out = tmp_path / name
    env = dict(os.environ)
    env["OMP_NUM_THREADS"] = str(threads)
    env["OPENBLAS_NUM_THREADS"] = str(threads)
    env["MKL_NUM_THREADS"] = str(threads)
    subprocess.run(
        [sys.executable, "-m", "dysonlab.cli", *argv, "--out", str(out)],
        check=True, env=env, capture_output=True,
    )
    return out.read_bytes()


def test_criterion_12_determinism(tmp_path):
    runs = {
        "density.csv": ["density", "--alpha", "2", "--beta", "0.1", "--depth", "3",
                        "--N", "6", "--seed", "7"],
        "density_mc.csv": ["density", "--alpha", "2", "--beta", "0.1", "--depth", "2",
                           "--N", "4", "--mode", "monte_carlo", "--samples", "4000",
                           "--seed", "7"],
        "eigen.json": ["eigen", "--alpha", "2", "--beta", "0.1", "--depth", "8",
                       "--format", "json"],
        "shift.csv": ["shift", "--alpha", "2", "--beta", "0.1", "--depths", "0,5",
                      "--sites", "48", "--left-len", "24", "--samples", "256",
                      "--seed", "3"],
    }
    for name, argv in runs.items():
        first = _cli_artifact(tmp_path, "a_" + name, argv, threads=1)
        again = _cli_artifact(tmp_path, "b_" + name, argv, threads=1)
        assert first == again, f"{name}: not reproducible at fixed threads"
        threaded = _cli_artifact(tmp_path, "c_" + name, argv, threads=4)
        assert first == threaded, f"{name}: output changed with thread count"
    ok(12, "byte-identical artifacts across repeats and thread counts")
