import math

import numpy as np
import pytest

import dysonlab as dl
from dysonlab.concentration import (
    LocalFunction,
    build_dobrushin_matrices,
    covariance_bound_check,
    delta_norm,
    gcb_check,
    moment_check,
    spec_kernel_lower_estimate,
    tail_check,
)
from dysonlab.gibbs import Window, heat_bath_sampler, window_gibbs


def zero_interaction():
    return dl.custom_pair_interaction(
        lambda r: 0.0 * np.asarray(r, float), tail_bound=lambda T: 0.0
    )


@pytest.fixture(scope="module")
def dyson_window_11(dyson_inter):
    return window_gibbs(dyson_inter, Window(-5, 5, dl.PLUS, dl.PLUS))


def D_const(inter):
    bar_c, _ = dl.dobrushin_bar_c(inter)
    return 4.0 / (1.0 - bar_c) ** 2


class TestDeltaNorm:
    def test_coordinate(self):
        assert delta_norm(LocalFunction.coordinate(0)) == 4.0

    def test_magnetization(self):
        assert delta_norm(LocalFunction.magnetization(range(10))) == pytest.approx(40.0)

    def test_pair_product(self):
        assert delta_norm(LocalFunction.spin_product([0, 1])) == pytest.approx(8.0)

    def test_constant(self):
        assert delta_norm(LocalFunction.constant(3.5)) == 0.0

    def test_profile_outside_support_is_empty(self):
        F = LocalFunction.coordinate(4)
        assert F.delta_profile().shape == (1,)


class TestDobrushinMatrices:
    def test_symmetry(self, dyson_inter):
        mats = build_dobrushin_matrices(dyson_inter, -30, 30)
        assert np.array_equal(mats.Cbar, mats.Cbar.T)

    def test_row_sums_below_bar_c(self, dyson_inter):
        mats = build_dobrushin_matrices(dyson_inter, -50, 50)
        assert np.max(mats.Cbar.sum(axis=1)) <= mats.bar_c + 1e-12

    def test_neumann_row_sum_bound(self, dyson_inter):
        mats = build_dobrushin_matrices(dyson_inter, -50, 50)
        rs = mats.dbar_row_sums()
        assert np.max(rs) <= 1.0 / (1.0 - mats.bar_c) + mats.neumann_remainder

    def test_out_of_regime(self):
        with pytest.raises(dl.RegimeError):
            build_dobrushin_matrices(dl.dyson_interaction(1.2, 2.0), -5, 5)


class TestGcb:
    def test_beta_zero_single_spin(self):
        m = window_gibbs(zero_interaction(), Window(0, 0, dl.FREE, dl.FREE))
        r = gcb_check(m, LocalFunction.coordinate(0), 4.0)
        assert r["lhs"] == pytest.approx(math.cosh(1.0), rel=1e-12)
        assert r["rhs"] == pytest.approx(math.exp(16.0), rel=1e-12)
        assert r["passed"]

    def test_constant_function(self, dyson_window_11, dyson_inter):
        r = gcb_check(dyson_window_11, LocalFunction.constant(2.0, site=0), D_const(dyson_inter))
        assert r["lhs"] == pytest.approx(1.0, abs=1e-12)
        assert r["rhs"] >= 1.0
        assert r["passed"]

    def test_dyson_window_magnetization(self, dyson_window_11, dyson_inter):
        F = LocalFunction.magnetization(range(-2, 3))
        r = gcb_check(dyson_window_11, F, D_const(dyson_inter))
        assert r["passed"] and r["margin"] == 0.0

    def test_mc_mode_has_margin(self, dyson_inter):
        stream = heat_bath_sampler(dyson_inter, Window(-5, 5, dl.PLUS, dl.PLUS),
                                   seed=4, sweeps=6400)
        r = gcb_check(stream, LocalFunction.magnetization(range(-2, 3)),
                      D_const(dyson_inter))
        assert r["margin"] > 0.0
        assert r["passed"]


class TestTailAndMoments:
    def test_tail_beta_zero_bounded_variable(self):
        m = window_gibbs(zero_interaction(), Window(0, 0, dl.FREE, dl.FREE))
        rows = tail_check(m, LocalFunction.coordinate(0), 4.0, [2.1])
        assert rows[0]["lhs"] == 0.0
        assert rows[0]["passed"]

    def test_tail_t_zero_trivial(self, dyson_window_11, dyson_inter):
        rows = tail_check(dyson_window_11, LocalFunction.coordinate(0),
                          D_const(dyson_inter), [0.0])
        assert rows[0]["rhs"] == 1.0
        assert rows[0]["passed"]

    def test_tail_grid_exact(self, dyson_window_11, dyson_inter):
        F = LocalFunction.magnetization(range(-5, 6))
        rows = tail_check(dyson_window_11, F, D_const(dyson_inter), [2, 4, 8])
        assert all(r["passed"] for r in rows)

    def test_moments_exact(self, dyson_window_11, dyson_inter):
        inter = dl.dyson_interaction(2.0, 0.2)
        m = window_gibbs(inter, Window(-5, 5, dl.PLUS, dl.PLUS))
        rows = moment_check(m, LocalFunction.spin_product([0, 1]), D_const(inter),
                            [2, 3, 4, 6])
        assert all(r["passed"] for r in rows)

    def test_moment_m2_beta_zero(self):
        m = window_gibbs(zero_interaction(), Window(0, 0, dl.FREE, dl.FREE))
        rows = moment_check(m, LocalFunction.coordinate(0), 4.0, [2])
        assert rows[0]["lhs"] == pytest.approx(1.0, abs=1e-12)
        assert rows[0]["rhs"] == pytest.approx(16.0, rel=1e-12)  # (D*dn/2)*2*Gamma(1) = 8*2


class TestCovariance:
    def test_beta_zero(self):
        rows = covariance_bound_check(zero_interaction(), Window(-2, 2, dl.FREE, dl.FREE), [1, 2])
        assert all(abs(r["cov"]) <= 1e-12 for r in rows)
        assert all(r["passed"] for r in rows)

    def test_dyson_window_12(self, dyson_inter):
        rows = covariance_bound_check(dyson_inter, Window(-5, 6, dl.PLUS, dl.PLUS),
                                      [1, 2, 3, 4])
        assert all(r["passed"] for r in rows)
        assert rows[2]["cov"] > 0  # genuinely positive correlation at lag 3

    def test_lag_outside_window(self, dyson_inter):
        with pytest.raises(ValueError, match="lag outside window"):
            covariance_bound_check(dyson_inter, Window(-5, 6), [40])


class TestSpecKernelEstimate:
    def test_lower_estimate_below_cbar(self, dyson_inter):
        win = Window(-4, 4, dl.PLUS, dl.PLUS)
        for i, j in ((0, 1), (0, 2), (1, 3)):
            est = spec_kernel_lower_estimate(dyson_inter, i, j, win, probes=64, seed=2)
            cbar_ij = 0.1 / abs(i - j) ** 2
            assert est["estimate"] <= cbar_ij + 1e-12
            assert est["estimate"] > 0
