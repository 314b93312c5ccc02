import math

import numpy as np
import pytest

from bandqft import number_theory as nt
from bandqft import performance as pf
from bandqft import qft_kernel as qk


class TestPeakProbabilities:
    @pytest.mark.parametrize("n, omega", [(8, 4), (10, 8), (12, 16)])
    def test_power_of_two_is_bandwidth_free(self, n, omega):
        ref = pf.full_bandwidth_probabilities(n, omega)
        for b in range(n):
            assert np.allclose(pf.peak_probabilities(n, b, omega), ref, atol=1e-12)

    @pytest.mark.parametrize("n, omega", [(9, 6), (11, 7), (12, 36)])
    def test_full_bandwidth_matches_geometric_sum(self, n, omega):
        brute = pf.peak_probabilities(n, n - 1, omega)
        assert np.allclose(pf.full_bandwidth_probabilities(n, omega), brute, atol=1e-12)

    @pytest.mark.parametrize("n, omega", [(12, 6), (12, 12), (14, 24), (16, 36)])
    def test_zero_offset_peaks(self, n, omega):
        # beta_j = 0 exactly when r divides j; such peaks carry K / 2^n for every b
        r = nt.r_decompose(omega).r
        K = qk.run_length(n, omega)
        for b in (0, 1, 2, n - 1):
            probs = pf.peak_probabilities(n, b, omega)
            assert np.allclose(probs[::r], K / 2**n, atol=1e-12)
            assert np.allclose(probs[::r], 1 / omega, atol=1 / 2**n)

    def test_single_peak_accessor(self):
        all_p = pf.peak_probabilities(12, 2, 10)
        assert pf.peak_probability(12, 2, 10, 3) == pytest.approx(all_p[3], abs=1e-15)
        with pytest.raises(ValueError):
            pf.peak_probability(12, 2, 10, 10)


class TestMeasure:
    def test_perfect_for_order_4(self):
        for b in range(8):
            assert pf.performance_measure(8, b, 4).P == pytest.approx(1, abs=1e-12)

    def test_full_bandwidth_is_one(self):
        for omega in (3, 6, 10, 21):
            assert pf.performance_measure(11, 10, omega).P == 1.0

    def test_monotone_in_bandwidth(self):
        values = [pf.performance_measure(14, b, 6).P for b in range(1, 14)]
        assert values[0] < values[-1]
        assert values[-1] == 1.0

    def test_order_6_asymptote(self):
        assert abs(pf.raw_measure(20, 1, 6) - 1 / 3) < 0.05

    def test_bad_b(self):
        with pytest.raises(ValueError):
            pf.performance_measure(8, 8, 4)

    def test_offset_average(self):
        pt = pf.performance_measure_averaged(12, 1, 6, samples=4, seed=1)
        offsets = pf.sampled_offsets(12, 6, 4, 1)
        expected = np.mean([pf.performance_measure(12, 1, 6, s0).P for s0 in offsets])
        assert pt.P == pytest.approx(expected, abs=1e-15)
        assert pt.s0 == "avg4"
        assert offsets == pf.sampled_offsets(12, 6, 4, 1)


class TestEnsemble:
    def test_15_is_perfect(self):
        rec = nt.semiprime_record(15)
        for b in range(rec.n):
            assert pf.ensemble_performance(rec, b).P == pytest.approx(1, abs=1e-12)

    def test_21_weighted_mix(self):
        rec = nt.semiprime_record(21)
        sp = nt.order_spectrum(rec)
        per = {w: pf.performance_measure(rec.n, 1, w).P for w in sp.orders}
        assert per[1] == pytest.approx(1) and per[2] == pytest.approx(1)
        expected = sum(per[w] * nu for w, nu in sp.entries) / sp.totient
        assert pf.ensemble_performance(rec, 1, sp).P == pytest.approx(expected, abs=1e-15)

    def test_full_bandwidth(self):
        rec = nt.semiprime_record(77)
        assert pf.ensemble_performance(rec, rec.n - 1).P == 1.0


class TestPeakShape:
    def test_full_bandwidth_matches_dirichlet_kernel(self):
        n, omega, j = 12, 10, 3
        K = qk.run_length(n, omega)
        for l, p in pf.peak_shape_scan(n, n - 1, omega, j, window=3):
            x = math.pi * omega * l / 2**n
            expected = math.sin(K * x) ** 2 / (2**n * K * math.sin(x) ** 2)
            assert p == pytest.approx(expected, abs=1e-12)

    def test_half_max_crossing_linear(self):
        scan = [(0, 0.0), (1, 0.4), (2, 1.0), (3, 0.8), (4, 0.2)]
        assert pf.half_max_crossing(scan, "left") == pytest.approx(1 + 0.1 / 0.6)
        assert pf.half_max_crossing(scan, "right") == pytest.approx(3 + 0.3 / 0.6)

    def test_crossing_outside_window(self):
        with pytest.raises(ValueError):
            pf.half_max_crossing([(0, 0.9), (1, 1.0), (2, 0.95)])

    def test_window_validation(self):
        with pytest.raises(ValueError):
            pf.peak_shape_scan(10, 2, 6, 1, window=0)


class TestSeparability:
    def test_zero_at_full_bandwidth(self):
        rec = nt.semiprime_record(33)
        rep = pf.separability(rec, rec.n - 1)
        assert rep.delta_k == pytest.approx(0, abs=1e-12)
        assert rep.delta_j == pytest.approx(0, abs=1e-12)

    def test_sums_against_definition(self):
        n, b, omega = 10, 1, 6
        a_k, b_k, b_j = pf._separability_sums(n, b, omega)
        ps = qk.peak_set(n, omega)
        s = np.arange(ps.K) * omega
        A = B = 0.0
        om_sq, mean_sq = [], []
        for l, beta in zip(ps.l, ps.beta):
            phi = np.array([qk.phi_double_sum(n, b, int(x), int(l)) for x in s])
            Phi = np.array([qk.Phi_double_sum(n, int(x), int(l)) for x in s])
            A += abs(np.exp(1j * (Phi - phi)).sum()) ** 2
            om = abs(np.exp(1j * Phi).sum()) ** 2
            mq = abs(np.exp(-1j * phi).mean()) ** 2
            B += om * mq
            om_sq.append(om)
            mean_sq.append(mq)
        norm = 2**n * ps.K
        assert a_k == pytest.approx(A / norm, rel=1e-10)
        assert b_k == pytest.approx(B / norm, rel=1e-10)
        assert b_j == pytest.approx(sum(om_sq) * sum(mean_sq) / omega / norm, rel=1e-10)

    def test_accessors(self):
        rec = nt.semiprime_record(65)
        rep = pf.separability(rec, 2)
        assert pf.separability_k(rec, 2) == rep.delta_k
        assert pf.separability_j(rec, 2) == rep.delta_j
        assert rep.delta_k > 0 and rep.delta_j > 0
