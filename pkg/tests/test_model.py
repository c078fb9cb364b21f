import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import dysonlab as dl
from dysonlab import model, series
from dysonlab.errors import RegimeError

from oracles import site_oscillation_bruteforce, zeta_ref


class TestPotentialEvaluation:
    def test_all_plus_dyson(self):
        spec = dl.dyson_potential(2.0, 0.1, tail_truncation=1_000_000)
        v, err = dl.potential_value(spec, [1], dl.PLUS)
        assert err <= 1e-7
        assert abs(v - 0.1 * zeta_ref(2.0)) <= err

    def test_beta_zero_is_zero(self):
        spec = dl.dyson_potential(1.7, 0.0)
        v, _ = dl.potential_value(spec, [1, -1, 1], dl.MINUS)
        assert v == 0.0

    def test_product_all_minus(self):
        spec = dl.product_potential(2.0, 0.1, tail_truncation=1_000_000)
        v, err = dl.potential_value(spec, [-1], dl.MINUS)
        assert abs(v - (-0.1 * zeta_ref(2.0))) <= err

    def test_rejects_alpha_below_one(self):
        with pytest.raises(RegimeError):
            dl.dyson_potential(1.0, 0.1)

    def test_rejects_bad_spins(self):
        spec = dl.dyson_potential(2.0, 0.1)
        with pytest.raises(ValueError):
            dl.potential_value(spec, [1, 2], dl.PLUS)

    def test_free_tail_requires_full_word(self):
        spec = dl.dyson_potential(2.0, 0.1, tail_truncation=100)
        with pytest.raises(ValueError):
            dl.potential_value(spec, [1, 1], dl.FREE)
        v, _ = dl.potential_value(spec, [1] * 101, dl.FREE)
        assert v > 0

    def test_custom_pair_needs_tail_bound(self):
        spec = dl.custom_pair_potential(lambda r: np.asarray(r, float) ** -3.0)
        with pytest.raises(RegimeError):
            dl.potential_value(spec, [1, 1], dl.PLUS)

    def test_alternating_tail_value(self):
        # beta * sum (-1)^n-ish series computed directly
        spec = dl.dyson_potential(2.0, 0.1, tail_truncation=10_000)
        v, err = dl.potential_value(spec, [1], dl.ALTERNATING)
        n = np.arange(1, 10_001)
        direct = 0.1 * np.sum(np.where(n % 2 == 1, 1.0, -1.0) / n**2)
        assert abs(v - direct) < 1e-14


class TestRegularity:
    def test_dyson_site_oscillation_closed_form(self):
        spec = dl.dyson_potential(2.0, 0.1)
        assert dl.site_oscillation(spec, 2) == pytest.approx(0.05, abs=1e-15)
        assert dl.site_oscillation(spec, 0) == pytest.approx(
            2 * 0.1 * zeta_ref(2.0), abs=1e-9
        )

    def test_beta_zero_all_functionals_vanish(self):
        for kind in (dl.dyson_potential, dl.product_potential):
            spec = kind(1.8, 0.0)
            assert dl.site_oscillation(spec, 5) == 0.0
            assert dl.variation(spec, 3) == 0.0
            assert dl.good_future_sum(spec)[0] == 0.0
            assert np.all(dl.extensibility_defect(spec, [3], probe_budget=8) == 0.0)

    def test_product_site_oscillation(self):
        spec = dl.product_potential(2.0, 0.1)
        assert dl.site_oscillation(spec, 3) == pytest.approx(0.2 / 9, abs=1e-15)
        assert dl.site_oscillation(spec, 0) == 0.0

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0])
    def test_oscillation_matches_bruteforce(self, alpha):
        rng = np.random.default_rng(42)
        spec = dl.dyson_potential(alpha, 0.1, tail_truncation=4096)
        for k in range(1, 9):
            brute = site_oscillation_bruteforce(alpha, 0.1, "dyson", k, 12, 16, rng)
            closed = dl.site_oscillation(spec, k)
            assert closed == pytest.approx(brute, abs=1e-12)

    def test_oscillations_nonincreasing(self):
        for maker in (dl.dyson_potential, dl.product_potential):
            spec = maker(1.5, 0.3)
            deltas = [dl.site_oscillation(spec, k) for k in range(1, 12)]
            assert all(b <= a for a, b in zip(deltas, deltas[1:]))
            vs = [dl.variation(spec, k) for k in range(1, 12)]
            assert all(v >= 0 for v in vs)
            assert all(b <= a for a, b in zip(vs, vs[1:]))

    def test_good_future_sum_closed_form(self):
        spec = dl.dyson_potential(2.0, 0.1)
        value, bound = dl.good_future_sum(spec)
        assert abs(value - 2 * 0.1 * zeta_ref(2.0)) <= bound

    def test_variation_closed_form(self):
        spec = dl.dyson_potential(2.0, 0.1)
        from oracles import tail_ref

        for k in (1, 3, 7):
            assert dl.variation(spec, k) == pytest.approx(
                2 * 0.1 * tail_ref(2.0, k), rel=1e-10
            )

    def test_walters_diagnostic_decays_iff_alpha_above_two(self):
        p_grid = [1, 4, 16, 64]
        steep = dl.walters_diagnostic(dl.dyson_potential(3.0, 0.2), p_grid, n_max=64)
        assert steep[-1] < 0.05 * steep[0]
        flat = dl.walters_diagnostic(dl.dyson_potential(1.5, 0.2), p_grid, n_max=64)
        assert flat[-1] > 0.3 * flat[0]

    def test_extensibility_dyson_bound(self):
        spec = dl.dyson_potential(2.0, 0.1)
        d = dl.extensibility_defect(spec, [10], probe_budget=64, seed=1)[0]
        assert d <= 2 * 0.1 / 11**2 + 1e-9
        assert d == pytest.approx(2 * 0.1 / 11**2, rel=1e-6)

    def test_extensibility_product_closed_form(self):
        # the n -> n+1 gap is (b-a) beta (n+1)^-alpha, independent of x
        spec = dl.product_potential(2.0, 0.1)
        d = dl.extensibility_defect(spec, [10], probe_budget=32, seed=3)[0]
        assert d == pytest.approx(2 * 0.1 / 121, rel=1e-9)

    def test_report_roundtrip(self):
        spec = dl.dyson_potential(2.0, 0.1)
        report = dl.build_regularity_report(spec, k_max=6, n_grid=(1, 2), probe_budget=8)
        payload = json.loads(report.to_json())
        assert payload["alpha"] == 2.0
        assert len(payload["variations"]) == 6
        csv = report.to_csv()
        assert csv.splitlines()[0] == "k,variation,site_oscillation"
        assert len(csv.strip().splitlines()) == 7


class TestInteractions:
    def test_bar_c_closed_form(self, dyson_inter):
        value, bound = dl.dobrushin_bar_c(dyson_inter)
        assert abs(value - 2 * 0.1 * zeta_ref(2.0)) <= bound + 1e-12

    def test_bar_c_at_threshold_is_one(self):
        bdu, _ = dl.beta_dobrushin(2.0)
        value, _ = dl.dobrushin_bar_c(dl.dyson_interaction(2.0, bdu))
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_bar_c_beta_zero(self):
        assert dl.dobrushin_bar_c(dl.dyson_interaction(2.0, 0.0))[0] == 0.0

    @given(beta=st.floats(0.01, 0.4), scale=st.floats(1.5, 4.0))
    @settings(max_examples=20, deadline=None)
    def test_bar_c_linear_in_beta(self, beta, scale):
        a, _ = dl.dobrushin_bar_c(dl.dyson_interaction(2.0, beta, trunc=2000))
        b, _ = dl.dobrushin_bar_c(dl.dyson_interaction(2.0, beta * scale, trunc=2000))
        assert b == pytest.approx(scale * a, rel=1e-12)

    def test_bar_c_nonincreasing_in_alpha(self):
        alphas = [1.2, 1.5, 2.0, 2.5, 3.0]
        vals = [dl.dobrushin_bar_c(dl.dyson_interaction(a, 0.1))[0] for a in alphas]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_product_interaction_same_bar_c(self):
        d, _ = dl.dobrushin_bar_c(dl.dyson_interaction(2.0, 0.1))
        p, _ = dl.dobrushin_bar_c(dl.product_interaction(2.0, 0.1))
        assert d == pytest.approx(p, rel=1e-14)

    def test_custom_requires_bound_for_certification(self):
        inter = dl.custom_pair_interaction(lambda r: np.asarray(r, float) ** -2.5)
        with pytest.raises(RegimeError):
            dl.uac_sum(inter)

    def test_custom_with_bound(self):
        inter = dl.custom_pair_interaction(
            lambda r: np.asarray(r, float) ** -2.5,
            tail_bound=lambda T: series.integral_tail_bound(2.5, T),
        )
        value, cert = dl.uac_sum(inter)
        assert abs(value - zeta_ref(2.5)) <= cert + 1e-12


class TestJsonDescriptor:
    def test_roundtrip(self):
        spec = dl.dyson_potential(1.8, 0.25, tail_truncation=5000)
        again = model.PotentialSpec.from_json(spec.to_json())
        assert (again.kind, again.alpha, again.beta, again.tail_truncation) == (
            "dyson", 1.8, 0.25, 5000,
        )

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValueError):
            model.PotentialSpec.from_json(
                '{"kind": "dyson", "alpha": 2, "beta": 0.1, "bogus": 3}'
            )

    def test_custom_not_serializable(self):
        spec = dl.custom_pair_potential(lambda r: 0 * np.asarray(r), lambda T: 0.0)
        with pytest.raises(ValueError):
            spec.to_json()
