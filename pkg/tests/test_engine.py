import math

import numpy as np
import pytest

from mbcoherence.engine import (
    EXACT_FORM_MAX_N,
    coherence_asymptote,
    coherence_closed_form,
    coherence_exact_product,
    coherence_faint,
    coherence_from_external,
    coherence_maximally_mixed,
    coherence_oracle,
    coherence_reduced,
    coherence_spectral,
    coherence_spectral_series,
    h_complete,
    log_coherence_asymptote,
    log_coherence_maximally_mixed,
    oracle_power_sum,
)
from mbcoherence.errors import OrderError, RegimeError, SizeLimitError
from mbcoherence.external import build_external
from mbcoherence.states import DensityMatrix, PureProductSpec, Spectrum, product_state
from helpers import random_density
from oracles import (
    binomial_maximally_mixed,
    brute_h,
    exact_finite_n,
    log10_binomial_maximally_mixed,
    newton_h,
)


def diag_product(lam, n):
    return product_state(DensityMatrix(np.diag(lam)), n)


class TestHComplete:
    def test_examples(self):
        assert float(h_complete([1.0], 5)) == 1.0
        assert float(h_complete([0.25] * 4, 2)) == pytest.approx(0.625, abs=1e-15)
        assert float(h_complete([0.5, 0.5], 3)) == pytest.approx(0.5, abs=1e-15)

    def test_h0_is_one(self):
        assert float(h_complete([0.3, 0.7], 0)) == 1.0

    def test_seventy_thirty_cubed(self):
        # all four compositions of 3 into 2 parts
        expect = 0.7 ** 3 + 0.7 ** 2 * 0.3 + 0.7 * 0.3 ** 2 + 0.3 ** 3
        assert expect == pytest.approx(0.58, abs=1e-15)
        assert float(h_complete([0.7, 0.3], 3)) == pytest.approx(expect, abs=1e-15)
        assert oracle_power_sum([0.7, 0.3], 3) == pytest.approx(expect, abs=1e-15)

    def test_matches_brute_and_newton(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            lam = rng.dirichlet(np.ones(int(rng.integers(1, 6))))
            n = int(rng.integers(0, 9))
            got = float(h_complete(lam, n))
            assert got == pytest.approx(brute_h(list(lam), n), rel=1e-12)
            assert got == pytest.approx(newton_h(lam, n), rel=1e-10)

    def test_negative_degree(self):
        with pytest.raises(OrderError):
            h_complete([1.0], -1)


class TestOracle:
    def test_examples(self):
        assert coherence_oracle(diag_product([1.0, 0.0], 2), 2).value == pytest.approx(1.0, abs=1e-15)
        orth = PureProductSpec(([1, 0], [0, 1])).density_matrix()
        assert coherence_oracle(orth, 2).value == pytest.approx(0.0, abs=1e-15)
        assert coherence_oracle(diag_product([0.5, 0.5], 2), 2).value == pytest.approx(0.5, abs=1e-15)

    def test_n1_undefined(self):
        with pytest.raises(OrderError):
            coherence_oracle(DensityMatrix(np.diag([0.5, 0.5])), 1)

    def test_guard(self):
        with pytest.raises(SizeLimitError):
            coherence_oracle(diag_product([0.5, 0.5], 7), 7)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_double_sum_over_external_state(self, n):
        rng = np.random.default_rng(n)
        for stats in ("boson", "fermion"):
            rho = random_density(2 ** n, rng)
            ext = build_external(rho, n, stats)
            assert coherence_oracle(rho, n).value == pytest.approx(coherence_from_external(ext), abs=1e-12)

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_equivalence_with_spectral(self, m, n):
        rng = np.random.default_rng(10 * m + n)
        for _ in range(3):
            lam = rng.dirichlet(np.ones(m))
            oracle = coherence_oracle(diag_product(lam, n), n).value
            assert coherence_spectral(lam, n).value == pytest.approx(oracle, abs=1e-10)
            assert coherence_exact_product(lam, n).value == pytest.approx(oracle, abs=1e-10)
            assert oracle == pytest.approx(exact_finite_n(brute_h(list(lam), n), n), abs=1e-12)

    def test_non_diagonal_single_particle_state(self):
        # basis choice must not matter for product states
        rng = np.random.default_rng(8)
        rho1 = random_density(3, rng)
        lam = np.linalg.eigvalsh(rho1.data)
        assert coherence_oracle(product_state(rho1, 3), 3).value == pytest.approx(
            coherence_spectral(lam, 3).value, abs=1e-10)


class TestPowerSum:
    def test_examples(self):
        assert oracle_power_sum([1.0], 4) == pytest.approx(1.0, abs=1e-15)
        assert oracle_power_sum([0.5, 0.5], 2) == pytest.approx(0.75, abs=1e-15)

    def test_identity_with_h(self):
        rng = np.random.default_rng(33)
        for _ in range(40):
            lam = rng.dirichlet(np.ones(int(rng.integers(1, 7))))
            n = int(rng.integers(1, 9))
            assert oracle_power_sum(lam, n) == pytest.approx(float(h_complete(lam, n)), abs=1e-12)

    def test_guard(self):
        with pytest.raises(SizeLimitError):
            oracle_power_sum([0.5, 0.5], 9)


class TestSpectral:
    def test_examples(self):
        assert coherence_spectral([0.5, 0.5], 2).value == pytest.approx(0.5, abs=1e-15)
        for n in (2, 7, 50, 1000):
            assert coherence_spectral([1.0, 0.0], n).value == 1.0
        assert coherence_spectral([0.25] * 4, 2).value == pytest.approx(0.25, abs=1e-15)

    def test_switch_point(self):
        lam = [0.6, 0.3, 0.1]
        below = coherence_spectral(lam, EXACT_FORM_MAX_N).value
        assert below == pytest.approx(exact_finite_n(newton_h(lam, EXACT_FORM_MAX_N), EXACT_FORM_MAX_N),
                                      rel=1e-10)
        above = coherence_spectral(lam, EXACT_FORM_MAX_N + 1).value
        assert above == pytest.approx(newton_h(lam, EXACT_FORM_MAX_N + 1), rel=1e-10)

    def test_series_matches_single(self):
        lam = [0.5, 0.3, 0.2]
        ns = [2, 5, 20, 21, 200]
        for n, res in zip(ns, coherence_spectral_series(lam, ns)):
            assert res.value == coherence_spectral(lam, n).value
            assert res.n == n

    def test_underflow_keeps_log(self):
        res = coherence_spectral([0.25] * 4, 600)
        assert res.value == 0.0
        assert res.underflow
        assert res.log10_value == pytest.approx(log10_binomial_maximally_mixed(4, 600), abs=1e-9)

    def test_n1_undefined(self):
        with pytest.raises(OrderError):
            coherence_spectral([0.5, 0.5], 1)

    def test_bounds_and_monotonicity(self):
        rng = np.random.default_rng(44)
        for _ in range(50):
            lam = rng.dirichlet(np.ones(int(rng.integers(1, 8))) * rng.uniform(0.1, 3))
            vals = [r.value for r in coherence_spectral_series(lam, range(2, 60))]
            assert all(0.0 <= v <= 1.0 + 1e-10 for v in vals)
            assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


class TestReduced:
    def test_examples(self):
        lam = [0.6, 0.3, 0.1]
        assert coherence_reduced(lam, 7, 7).value == coherence_spectral(lam, 7).value
        assert coherence_reduced([0.5, 0.5], 10, 2).value == pytest.approx(0.5, abs=1e-15)
        assert coherence_reduced([0.9, 0.1], 5, 3).value >= coherence_spectral([0.9, 0.1], 5).value

    def test_independent_of_n(self):
        lam = [0.5, 0.3, 0.2]
        assert coherence_reduced(lam, 10, 4).value == coherence_reduced(lam, 90, 4).value
        assert coherence_reduced(lam, 10, 4).k == 4

    @pytest.mark.parametrize("k", [1, 0, 6])
    def test_order_errors(self, k):
        with pytest.raises(OrderError):
            coherence_reduced([0.5, 0.5], 5, k)


class TestClosedForms:
    def test_maximally_mixed_examples(self):
        assert coherence_maximally_mixed(1, 17) == pytest.approx(1.0, abs=1e-15)
        assert coherence_maximally_mixed(4, 2) == pytest.approx(0.625, abs=1e-15)
        assert coherence_maximally_mixed(2, 3) == pytest.approx(0.5, abs=1e-15)

    def test_maximally_mixed_large_n(self):
        exact = binomial_maximally_mixed(4, 100)
        assert coherence_maximally_mixed(4, 100) == pytest.approx(float(exact), rel=1e-12)
        ln = log_coherence_maximally_mixed(4, 100)
        assert ln / math.log(10) == pytest.approx(log10_binomial_maximally_mixed(4, 100), abs=1e-12)

    def test_maximally_mixed_matches_h(self):
        for m in (2, 3, 5):
            for n in (2, 10, 40):
                assert float(h_complete([1.0 / m] * m, n)) == pytest.approx(
                    coherence_maximally_mixed(m, n), rel=1e-12)

    def test_asymptote_examples(self):
        for n in (2, 10, 50):
            assert coherence_asymptote([0.6, 0.3, 0.1], n) == pytest.approx(2.4 * 0.6 ** n, rel=1e-12)
        assert coherence_asymptote([0.5, 0.5], 3) == pytest.approx(0.5, rel=1e-14)
        assert float(h_complete([0.5, 0.5], 3)) == pytest.approx(0.5, rel=1e-14)
        assert coherence_asymptote([0.5, 0.5], 100) == pytest.approx(101 * 2.0 ** -100, rel=1e-12)
        assert coherence_asymptote([0.5, 0.5], 100) == pytest.approx(7.97e-29, rel=1e-3)

    def test_asymptote_degenerate_with_tail(self):
        # d = 2 with a smaller eigenvalue: (N+1) lam^N / (1 - 0.2/0.4)
        lam = [0.4, 0.4, 0.2]
        assert coherence_asymptote(lam, 30) == pytest.approx(31 * 0.4 ** 30 * 2, rel=1e-12)
        ratio = float(h_complete(lam, 400)) / coherence_asymptote(lam, 400)
        assert ratio == pytest.approx(1.0, abs=0.01)

    def test_asymptote_convergence(self):
        lam = [0.6, 0.3, 0.1]
        ratios = [coherence_spectral(lam, n).value / coherence_asymptote(lam, n) for n in (10, 50, 200)]
        assert abs(ratios[2] - 1) < 0.01
        assert abs(ratios[2] - 1) <= abs(ratios[1] - 1) + 1e-12
        assert abs(ratios[1] - 1) < abs(ratios[0] - 1)

    def test_asymptote_deep_log(self):
        assert log_coherence_asymptote([0.6, 0.3, 0.1], 5000) == pytest.approx(
            5000 * math.log(0.6) + math.log(2.4), rel=1e-13)

    def test_asymptote_pure_is_regime_error(self):
        with pytest.raises(RegimeError):
            coherence_asymptote([1.0, 0.0], 10)

    def test_closed_form_dispatch(self):
        assert coherence_closed_form([1.0], 9).value == 1.0
        res = coherence_closed_form([0.25] * 4, 100)
        assert res.log10_value == pytest.approx(log10_binomial_maximally_mixed(4, 100), abs=1e-10)
        res = coherence_closed_form([0.6, 0.3, 0.1], 10)
        assert res.value == pytest.approx(2.4 * 0.6 ** 10, rel=1e-12)
        assert res.method == "asymptote"

    def test_faint_examples(self):
        assert coherence_faint(0.0, 13) == 1.0
        assert coherence_faint(0.01, 100) == pytest.approx(0.36603, abs=5e-6)
        assert coherence_faint(0.1, 2) == pytest.approx(0.81, abs=1e-15)
        with pytest.raises(RegimeError):
            coherence_faint(0.5, 3)

    def test_faint_consistency(self):
        # spectrum (1-eps, eps*mu): single excitations contribute eps (1-eps)^(N-1),
        # so the gap is first order in eps with a constant close to one
        rng = np.random.default_rng(55)
        worst = 0.0
        for eps in (0.001, 0.01, 0.03, 0.05):
            for _ in range(5):
                mu = rng.dirichlet(np.ones(int(rng.integers(1, 5))))
                lam = np.concatenate([[1 - eps], eps * mu])
                for n in (2, 5, 10, 30, 100):
                    dev = abs(coherence_spectral(lam, n).value - coherence_faint(eps, n))
                    worst = max(worst, dev / (eps * (1 - eps) ** (n - 1)))
        assert worst <= 1.1


class TestStatistics:
    def test_oracle_independent_of_statistics(self):
        rng = np.random.default_rng(3)
        rho = random_density(27, rng)
        b = coherence_from_external(build_external(rho, 3, "boson"))
        f = coherence_from_external(build_external(rho, 3, "fermion"))
        assert b == pytest.approx(f, abs=1e-15)


def test_spectrum_object_and_list_agree():
    assert coherence_spectral(Spectrum([3, 1]), 6).value == coherence_spectral([0.75, 0.25], 6).value
