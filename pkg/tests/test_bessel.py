"""Tests for Jack polynomials and the Bessel function of matrix argument."""

import numpy as np
import pytest

from hypergeo import bessel
from oracles import bessel_0f1, partitions_brute

# frozen from the 50-digit confluent series (bessel_0f1)
B_FROZEN = 0.7538717682021518 + 0.0j


class TestPartitions:
    def test_matches_brute_force(self):
        for k, q in ((0, 3), (1, 1), (4, 2), (5, 3), (6, 4)):
            assert bessel.partitions_of_weight(k, q) == partitions_brute(k, q)

    def test_descending_lex_order(self):
        parts = bessel.partitions_of_weight(5, 3)
        assert parts == sorted(parts, reverse=True)
        assert parts[0] == (5,)


class TestJack:
    """Jack polynomials in the C normalization."""

    def test_known_p_normalized_coefficients(self):
        """P_2, P_21 and P_3 against their textbook expansions."""
        for alpha in (0.5, 1.0, 2.0):
            t2 = bessel._jack_tables(2, alpha, 3)
            np.testing.assert_allclose(t2[(2,)][(1, 1)], 2.0 / (alpha + 1.0))
            assert t2[(2,)][(2,)] == 1.0
            t3 = bessel._jack_tables(3, alpha, 3)
            np.testing.assert_allclose(t3[(2, 1)][(1, 1, 1)],
                                       6.0 / (alpha + 2.0))
            np.testing.assert_allclose(t3[(3,)][(2, 1)],
                                       3.0 / (2.0 * alpha + 1.0))
            np.testing.assert_allclose(
                t3[(3,)][(1, 1, 1)],
                6.0 / ((2.0 * alpha + 1.0) * (alpha + 1.0)))

    def test_rank_one_collapse(self):
        xi = np.array([1.7])
        for k in (1, 2, 5):
            np.testing.assert_allclose(bessel.jack_C((k,), 2.0, xi),
                                       1.7 ** k, rtol=1e-12)

    def test_trace_identity(self):
        """Sum of C_m over a weight shell is a power of the trace."""
        gen = np.random.default_rng(21)
        for alpha in (0.5, 1.0, 2.0):
            for q in (2, 3):
                for k in (1, 3, 5):
                    xi = gen.uniform(0.2, 2.0, q)
                    total = sum(bessel.jack_C(m, alpha, xi)
                                for m in bessel.partitions_of_weight(k, q))
                    np.testing.assert_allclose(total, xi.sum() ** k,
                                               rtol=1e-10)

    def test_empty_partition(self):
        assert bessel.jack_C((), 1.0, np.array([2.0, 3.0])) == 1.0

    def test_too_long_partition_rejected(self):
        with pytest.raises(AssertionError):
            bessel.jack_C((1, 1, 1), 1.0, np.array([1.0, 2.0]))


class TestPochhammer:
    def test_generalized_factorial(self):
        # m = (2, 1): j=1 contributes x(x+1), j=2 contributes x - 1/alpha
        x, alpha = 1.3, 2.0
        want = x * (x + 1.0) * (x - 1.0 / alpha)
        np.testing.assert_allclose(
            bessel.gen_pochhammer(x, (2, 1), alpha), want)

    def test_empty_is_one(self):
        assert bessel.gen_pochhammer(0.7, (), 1.0) == 1.0


class TestBesselIndex:
    def test_values(self):
        idx = bessel.bessel_index("r", 3.0)
        assert idx.mu == 1.5 and idx.alpha == 2.0
        idx = bessel.bessel_index("h", 2.5)
        assert idx.mu == 5.0 and idx.alpha == 0.5


class TestSeries:
    """The shell-summed Bessel series."""

    def test_rank_one_confluent_series(self):
        idx = bessel.bessel_index("r", 3.0)
        oracle = bessel_0f1(idx.mu, -0.5 * 0.8)
        assert oracle == B_FROZEN
        res = bessel.bessel_series(idx, np.array([0.5]), np.array([0.8]))
        np.testing.assert_allclose(res.value, B_FROZEN, rtol=1e-10)
        assert res.converged

    def test_argument_symmetry(self):
        idx = bessel.bessel_index("c", 4.0)
        xi = np.array([0.9, 0.2])
        eta = np.array([0.6, 0.1])
        a = bessel.bessel_series(idx, xi, eta)
        b = bessel.bessel_series(idx, eta, xi)
        np.testing.assert_allclose(a.value, b.value, rtol=1e-12)

    def test_zero_argument(self):
        idx = bessel.bessel_index("r", 5.0)
        res = bessel.bessel_series(idx, np.zeros(2), np.array([0.4, 0.1]))
        assert res.value == 1.0
        assert res.converged and res.tail_bound == 0.0

    def test_truncation_reporting(self):
        idx = bessel.bessel_index("r", 5.0)
        res = bessel.bessel_series(idx, np.array([2.0, 1.0]),
                                   np.array([1.5, 0.5]), max_degree=4)
        assert not res.converged
        assert res.truncation_degree == 4
        assert res.tail_bound > 0.0

    def test_vanishing_pochhammer_raises(self):
        idx = bessel.BesselIndex(0.5, 2.0)
        with pytest.raises(ValueError):
            bessel.bessel_series(idx, np.array([0.5, 0.2]),
                                 np.array([0.4, 0.1]), max_degree=6)

    def test_shape_mismatch_raises(self):
        idx = bessel.bessel_index("r", 5.0)
        with pytest.raises(ValueError):
            bessel.bessel_series(idx, np.array([0.5]), np.array([0.4, 0.1]))


class TestPhiTilde:
    """The rescaled small-t limit in both evaluation modes."""

    def test_series_equals_integral_within_noise(self):
        lam = np.array([1.0, 0.5])
        t = np.array([0.9, 0.4])
        srs = bessel.bessel_phi_tilde("r", 4.0, lam, t, mode="series")
        mc = bessel.bessel_phi_tilde("r", 4.0, lam, t, mode="integral",
                                     samples=200000, seed=3)
        assert abs(srs.value - mc.value) < 4.0 * mc.stderr

    def test_degenerate_boundary_sampler(self):
        lam = np.array([1.0, 0.5])
        t = np.array([0.9, 0.4])
        srs = bessel.bessel_phi_tilde("r", 3.0, lam, t, mode="series")
        mc = bessel.bessel_phi_tilde("r", 3.0, lam, t, mode="integral",
                                     samples=200000, seed=3)
        assert abs(srs.value - mc.value) < 4.0 * mc.stderr

    def test_below_boundary_rejected(self):
        with pytest.raises(ValueError):
            bessel.bessel_phi_tilde("r", 2.0, np.array([1.0, 0.5]),
                                    np.array([0.5, 0.2]), mode="integral")

    def test_complex_lambda_needs_series(self):
        with pytest.raises(ValueError):
            bessel.bessel_phi_tilde("r", 4.0, np.array([1.0 + 1.0j, 0.5]),
                                    np.array([0.5, 0.2]), mode="integral")

    def test_zero_t_exact(self):
        est = bessel.bessel_phi_tilde("c", 4.0, np.array([1.0, 0.5]),
                                      np.zeros(2), mode="integral",
                                      samples=64, seed=0)
        assert est.value == 1.0 + 0.0j and est.stderr == 0.0
        srs = bessel.bessel_phi_tilde("c", 4.0, np.array([1.0, 0.5]),
                                      np.zeros(2), mode="series")
        assert srs.value == 1.0

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            bessel.bessel_phi_tilde("r", 4.0, np.array([1.0]),
                                    np.array([0.5]), mode="mc")

    def test_worker_invariance(self):
        lam = np.array([1.0, 0.5])
        t = np.array([0.7, 0.3])
        a = bessel.bessel_phi_tilde("c", 5.0, lam, t, mode="integral",
                                    samples=30000, seed=5)
        b = bessel.bessel_phi_tilde("c", 5.0, lam, t, mode="integral",
                                    samples=30000, seed=5, workers=4)
        assert a.value == b.value and a.stderr == b.stderr
