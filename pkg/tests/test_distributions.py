import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyastates.distributions import (
    NegBinParams,
    PolyaParams,
    binomial_pmf,
    binomial_pmf_vector,
    negative_binomial_pmf,
    polya_log_pmf,
    polya_log_pmf_vector,
    polya_pmf,
    total_variation,
)
from polyastates.errors import DomainError

from conftest import GRID_ETA, GRID_GAMMA, GRID_M, STANDARD_GRID, exact_polya

params_strategy = st.builds(
    PolyaParams,
    M=st.integers(1, 60),
    gamma=st.floats(0, 20, allow_nan=False),
    eta=st.floats(0, 1, allow_nan=False),
)


class TestPolyaParams:
    @pytest.mark.parametrize(
        "M, gamma, eta",
        [(1.5, 0.1, 0.5), (-1, 0.1, 0.5), (3, -0.1, 0.5), (3, 0.1, 1.1), (3, math.nan, 0.5), (3, 0.1, math.inf)],
    )
    def test_rejects_invalid(self, M, gamma, eta):
        with pytest.raises(DomainError):
            PolyaParams(M, gamma, eta)

    def test_closed_domain(self):
        assert PolyaParams(3, 0.0, 0.0).eta_bar == 1.0
        assert PolyaParams(3, 0.0, 1.0).eta_bar == 0.0

    def test_negbin_rejects(self):
        with pytest.raises(DomainError):
            NegBinParams(0.0, 0.5)
        with pytest.raises(DomainError):
            NegBinParams(1.0, 1.0)


class TestLogPmf:
    def test_hand_evaluated(self):
        # denominator (1+g)(1+2g) = 3, numerator C(3,2) * 0.5 * 1.0 * 0.5
        assert polya_log_pmf(PolyaParams(3, 0.5, 0.5), 2) == pytest.approx(math.log(0.25), abs=1e-15)

    def test_binomial_case(self):
        assert polya_log_pmf(PolyaParams(2, 0.0, 0.5), 1) == pytest.approx(math.log(0.5), abs=1e-15)

    def test_point_mass(self):
        p = PolyaParams(4, 1.0, 0.0)
        assert polya_log_pmf(p, 0) == pytest.approx(0.0, abs=1e-15)
        assert all(polya_log_pmf(p, n) == -math.inf for n in range(1, 5))

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            polya_log_pmf(PolyaParams(3, 0.5, 0.5), 4)
        with pytest.raises(DomainError):
            polya_log_pmf(PolyaParams(3, 0.5, 0.5), -1)

    @pytest.mark.parametrize("params", [p for p in STANDARD_GRID if p.M <= 20])
    def test_scalar_matches_vector(self, params):
        vec = polya_log_pmf_vector(params)
        scal = np.array([polya_log_pmf(params, n) for n in range(params.M + 1)])
        assert np.array_equal(np.isneginf(vec), np.isneginf(scal))
        finite = np.isfinite(vec)
        np.testing.assert_allclose(scal[finite], vec[finite], rtol=1e-13, atol=1e-13)

    def test_large_M_survives(self):
        logs = polya_log_pmf_vector(PolyaParams(10_000, 0.3, 0.4))
        assert np.all(np.isfinite(logs))
        assert abs(math.fsum(np.exp(logs)) - 1.0) < 1e-12


class TestPolyaPmf:
    def test_uniform_urn_case(self):
        np.testing.assert_allclose(polya_pmf(PolyaParams(3, 0.5, 0.5)).probs, [0.25] * 4, atol=1e-15)

    def test_single_draw(self):
        np.testing.assert_allclose(polya_pmf(PolyaParams(1, 2.0, 0.3)).probs, [0.7, 0.3], atol=1e-15)

    def test_binomial_reduction(self):
        expected = [math.comb(5, n) * 0.4**n * 0.6 ** (5 - n) for n in range(6)]
        np.testing.assert_allclose(polya_pmf(PolyaParams(5, 0.0, 0.4)).probs, expected, rtol=0, atol=1e-14)

    @pytest.mark.parametrize("M", [1, 2, 5, 12])
    @pytest.mark.parametrize("gamma", [0.01, 0.5, 5.0])
    @pytest.mark.parametrize("eta", [0.1, 0.5, 0.9])
    def test_matches_exact_rational(self, M, gamma, eta):
        exact = np.array([float(x) for x in exact_polya(M, gamma, eta)])
        np.testing.assert_allclose(polya_pmf(PolyaParams(M, gamma, eta)).probs, exact, rtol=1e-13, atol=1e-16)

    @pytest.mark.parametrize("params", STANDARD_GRID)
    def test_normalization_and_nonnegativity(self, params):
        probs = polya_pmf(params).probs
        assert np.all(probs >= 0)
        assert abs(math.fsum(probs) - 1.0) <= 1e-12

    def test_no_silent_renormalization(self):
        pmf = polya_pmf(PolyaParams(100, 5.0, 0.1))
        assert pmf.total() == math.fsum(np.exp(polya_log_pmf_vector(PolyaParams(100, 5.0, 0.1))))

    @pytest.mark.parametrize("M", GRID_M)
    @pytest.mark.parametrize("gamma", GRID_GAMMA)
    @pytest.mark.parametrize("eta", GRID_ETA)
    def test_symmetry(self, M, gamma, eta):
        left = polya_pmf(PolyaParams(M, gamma, eta)).probs
        right = polya_pmf(PolyaParams(M, gamma, 1.0 - eta)).probs[::-1]
        np.testing.assert_allclose(left, right, rtol=0, atol=1e-13)

    @given(M=st.integers(1, 40), eta=st.floats(0, 1))
    def test_single_draw_independent_of_gamma(self, M, eta):
        assert polya_pmf(PolyaParams(1, M * 0.37, eta)).probs == pytest.approx([1 - eta, eta], abs=1e-15)

    @settings(max_examples=200)
    @given(params_strategy)
    def test_property_normalized(self, params):
        probs = polya_pmf(params).probs
        assert np.all(probs >= 0)
        assert abs(math.fsum(probs) - 1.0) <= 1e-12


class TestBinomial:
    def test_values(self):
        assert binomial_pmf(2, 0.5, 1) == pytest.approx(0.5, abs=1e-16)
        assert binomial_pmf(5, 1.0, 5) == 1.0
        assert binomial_pmf(10, 0.3, 3) == pytest.approx(polya_pmf(PolyaParams(10, 0.0, 0.3)).probs[3], abs=1e-16)

    def test_domain(self):
        with pytest.raises(DomainError):
            binomial_pmf(3, 0.5, 4)

    @pytest.mark.parametrize("M", GRID_M)
    @pytest.mark.parametrize("eta", GRID_ETA)
    def test_against_comb(self, M, eta):
        expected = [math.comb(M, n) * eta**n * (1 - eta) ** (M - n) for n in range(M + 1)]
        np.testing.assert_allclose(binomial_pmf_vector(M, eta), expected, rtol=1e-12, atol=1e-15)


class TestNegativeBinomial:
    def test_geometric(self):
        assert negative_binomial_pmf(NegBinParams(1.0, 0.5), 0) == pytest.approx(0.5, abs=1e-16)

    def test_direct_formula(self):
        assert negative_binomial_pmf(NegBinParams(2.0, 0.25), 1) == pytest.approx(0.28125, abs=1e-15)

    def test_lambda_rho_mapping(self):
        nb = NegBinParams.from_lambda_rho(1.0, 2.0)
        assert nb.r == 2.0
        assert nb.p == pytest.approx(1 / 3)
        # mean r p/(1-p) equals lambda
        probs = np.array([negative_binomial_pmf(nb, n) for n in range(200)])
        assert math.fsum(np.arange(200) * probs) == pytest.approx(1.0, rel=1e-12)

    def test_negative_n(self):
        with pytest.raises(DomainError):
            negative_binomial_pmf(NegBinParams(1.0, 0.5), -1)


class TestTotalVariation:
    def test_identity_and_disjoint(self):
        p = [0.2, 0.3, 0.5]
        assert total_variation(p, p) == 0.0
        assert total_variation([1, 0], [0, 1]) == 1.0

    def test_zero_padding(self):
        assert total_variation([0.5, 0.5], [0.5, 0.25, 0.25]) == pytest.approx(0.25)

    def test_small_gamma_regression(self):
        tv = total_variation(polya_pmf(PolyaParams(50, 1e-6, 0.3)).probs, binomial_pmf_vector(50, 0.3))
        assert tv < 1e-3
        assert tv == pytest.approx(1.2029762113798728e-05, rel=1e-6)

    @given(st.lists(st.lists(st.floats(0, 1), min_size=4, max_size=4), min_size=3, max_size=3))
    def test_metric(self, vecs):
        p, q, r = (np.array(v) / max(sum(v), 1e-9) for v in vecs)
        assert total_variation(p, q) == pytest.approx(total_variation(q, p), abs=1e-15)
        assert total_variation(p, r) <= total_variation(p, q) + total_variation(q, r) + 1e-12
