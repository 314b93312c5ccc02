import math
from fractions import Fraction

import numpy as np
import pytest

from bandqft import number_theory as nt


def brute_semiprimes(limit):
    out = []
    for N in range(3, limit + 1, 2):
        f = [d for d in range(2, N) if N % d == 0 and all(d % e for e in range(2, d))]
        if len(f) == 2 and f[0] * f[1] == N:
            out.append(N)
    return out


def brute_spectrum(N):
    counts = {}
    for x in range(1, N):
        if math.gcd(x, N) == 1:
            w = nt.naive_order(x, N)
            counts[w] = counts.get(w, 0) + 1
    return counts


class TestRegisterSize:
    @pytest.mark.parametrize("N", [15, 21, 181, 182, 255, 256, 1023, 4095])
    def test_matches_definition(self, N):
        n = nt.register_size(N)
        # n is the unique integer with 2^(n-1) <= N^2 < 2^n
        assert 2 ** (n - 1) <= N * N < 2**n

    def test_small_anchor(self):
        assert nt.register_size(15) == 8


class TestSemiprimes:
    def test_limit_15(self):
        recs = nt.enumerate_semiprimes(15)
        assert [(r.N, r.p, r.q, r.n) for r in recs] == [(15, 3, 5, 8)]

    def test_limit_36(self):
        assert [r.N for r in nt.enumerate_semiprimes(36)] == [15, 21, 33, 35]

    def test_against_trial_division(self):
        assert [r.N for r in nt.enumerate_semiprimes(600)] == brute_semiprimes(600)

    def test_empty_domain(self):
        with pytest.raises(nt.EmptyDomainError):
            nt.enumerate_semiprimes(14)

    @pytest.mark.parametrize(
        "N, reason", [(9, "square"), (7, "prime"), (16, "even"), (105, "more than two")]
    )
    def test_invalid_record(self, N, reason):
        with pytest.raises(nt.NotSemiprimeError, match=reason):
            nt.semiprime_record(N)

    def test_for_n_small(self):
        assert [r.N for r in nt.semiprimes_for_n(8, 7)] == [15]
        assert [r.N for r in nt.semiprimes_for_n(9, 7)] == [21]

    def test_for_n_16_is_smallest_in_window(self):
        # 183 = 3 * 61 is the first odd semiprime with N^2 >= 2^15
        window = [N for N in brute_semiprimes(256) if nt.register_size(N) == 16]
        got = [r.N for r in nt.semiprimes_for_n(16, 3)]
        assert got == window[:3] == [183, 185, 187]

    def test_is_prime_against_sieve(self):
        primes = set(nt.prime_sieve(5000).tolist())
        assert all(nt.is_prime(m) == (m in primes) for m in range(5001))
        assert nt.is_prime(2**61 - 1) and not nt.is_prime(3215031751)


class TestOrders:
    @pytest.mark.parametrize("x, N, expected", [(2, 15, 4), (1, 15, 1), (1, 77, 1), (2, 21, 6)])
    def test_examples(self, x, N, expected):
        assert nt.multiplicative_order(x, N) == expected

    def test_non_unit_seed(self):
        with pytest.raises(nt.InvalidSeedError):
            nt.multiplicative_order(3, 15)

    def test_agrees_with_naive_up_to_1000(self):
        for rec in nt.enumerate_semiprimes(1000):
            lam = rec.carmichael
            for x in range(1, rec.N, max(1, rec.N // 40)):
                if math.gcd(x, rec.N) == 1:
                    assert nt.multiplicative_order(x, rec.N, lam) == nt.naive_order(x, rec.N)


class TestSpectrum:
    def test_15(self):
        sp = nt.order_spectrum(nt.semiprime_record(15))
        assert sp.as_dict() == {1: 1, 2: 3, 4: 4}
        assert sp.totient == 8
        assert all(w & (w - 1) == 0 for w in sp.orders)

    def test_21(self):
        sp = nt.order_spectrum(nt.semiprime_record(21))
        assert sp.as_dict() == {1: 1, 2: 3, 3: 2, 6: 6}
        assert sp.totient == 12

    @pytest.mark.parametrize("N", [15, 21, 33, 35, 39, 55, 91, 143, 221, 247, 323, 437])
    def test_cyclic_matches_brute_force(self, N):
        rec = nt.semiprime_record(N)
        assert nt.order_spectrum(rec).as_dict() == brute_spectrum(N)
        assert nt.order_spectrum(rec, method="seeds").as_dict() == brute_spectrum(N)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            nt.order_spectrum(nt.semiprime_record(15), method="magic")


class TestOrderTheorems:
    @pytest.mark.parametrize("N, seed", [(15, 4), (21, 8), (35, 6)])
    def test_order2_seed(self, N, seed):
        assert nt.order2_seed(nt.semiprime_record(N)) == seed

    def test_order2_seed_is_only_one(self):
        for rec in nt.enumerate_semiprimes(300):
            roots = [x for x in range(2, (rec.N + 1) // 2) if x * x % rec.N == 1]
            assert roots == [nt.order2_seed(rec)]

    @pytest.mark.parametrize("limit, checked", [(15, 1), (100, None)])
    def test_verification_clean(self, limit, checked):
        for report in (nt.verify_order2_uniqueness(limit), nt.verify_max_order_bound(limit)):
            assert report.ok and not report.violations
            if checked is not None:
                assert report.checked == checked
        assert "0 violations in 1 semiprimes" in str(nt.verify_order2_uniqueness(15))

    @pytest.mark.parametrize("N, expected", [(15, 4), (21, 6)])
    def test_max_even_order(self, N, expected):
        rec = nt.semiprime_record(N)
        assert nt.max_even_order(nt.order_spectrum(rec)) == expected == rec.totient // 2


class TestRStatistics:
    @pytest.mark.parametrize("omega, r, alpha", [(36, 9, 2), (6, 3, 1), (8, 1, 3), (1, 1, 0)])
    def test_decompose(self, omega, r, alpha):
        d = nt.r_decompose(omega)
        assert (d.r, d.alpha) == (r, alpha)

    def test_inv_r(self):
        assert nt.inv_r_average(nt.order_spectrum(nt.semiprime_record(15))) == 1.0
        got = nt.inv_r_average(nt.order_spectrum(nt.semiprime_record(21)))
        expected = Fraction(1 * 1 + 3 * 1, 12) + Fraction(2, 3 * 12) + Fraction(6, 3 * 12)
        assert got == pytest.approx(float(expected), abs=1e-15)
        assert got == pytest.approx(5 / 9)

    def test_inv_r_model_anchor(self):
        assert nt.inv_r_model(8) == 1.0

    def test_mean_order_15(self):
        assert nt.mean_order(nt.order_spectrum(nt.semiprime_record(15))) == 2.875

    def test_omega_statistics_bins(self):
        scatter, binned = nt.omega_statistics(2000, bin_width=500)
        assert len(scatter) == len(nt.enumerate_semiprimes(2000))
        assert [round(c) for c, _, _ in binned] == [250, 750, 1250, 1750]
        assert sum(cnt for _, _, cnt in binned) == len(scatter)
        # the bin mean is the plain mean of the per-N values inside it
        first = [m for N, m in scatter if N <= 500]
        assert binned[0][1] == pytest.approx(np.mean(first))
