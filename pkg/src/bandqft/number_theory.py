"""Integer machinery for semiprimes: enumeration, order spectra and their statistics.

Everything here is exact integer arithmetic on Python ints, so products never
overflow regardless of the size of ``N``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class EmptyDomainError(ValueError):
    """Raised when a range contains no odd semiprime at all."""


class InvalidSeedError(ValueError):
    """Raised when a seed is not a unit modulo ``N``."""


class NotSemiprimeError(ValueError):
    """Raised when an integer is not a product of two distinct odd primes."""


def register_size(N: int) -> int:
    """Number of qubits ``n = floor(2 log2 N + 1)`` for a semiprime ``N``.

    ``floor(2 log2 N) + 1 == n`` is equivalent to ``2**(n-1) <= N**2 < 2**n``,
    i.e. ``n`` is the bit length of ``N**2``. No floating point is involved.
    """
    return (N * N).bit_length()


@dataclass(frozen=True)
class SemiprimeRecord:
    N: int
    p: int
    q: int
    n: int

    def __post_init__(self):
        if self.p * self.q != self.N:
            raise NotSemiprimeError(f"{self.p}*{self.q} != {self.N}")
        if self.p == self.q or min(self.p, self.q) <= 2:
            raise NotSemiprimeError(f"{self.N} needs distinct odd prime factors")
        if not (is_prime(self.p) and is_prime(self.q)):
            raise NotSemiprimeError(f"factors of {self.N} are not prime")
        if self.n != register_size(self.N):
            raise ValueError(f"register size {self.n} inconsistent with N={self.N}")

    @classmethod
    def from_factors(cls, p: int, q: int) -> "SemiprimeRecord":
        p, q = sorted((p, q))
        return cls(p * q, p, q, register_size(p * q))

    @property
    def totient(self) -> int:
        return (self.p - 1) * (self.q - 1)

    @property
    def carmichael(self) -> int:
        return math.lcm(self.p - 1, self.q - 1)


@dataclass(frozen=True)
class OrderSpectrum:
    """Distinct orders of the unit group mod ``N`` with their multiplicities."""

    N: int
    entries: tuple[tuple[int, int], ...]
    totient: int

    def __post_init__(self):
        if sum(nu for _, nu in self.entries) != self.totient:
            raise ValueError(f"multiplicities of N={self.N} do not sum to the totient")

    @property
    def orders(self) -> list[int]:
        return [w for w, _ in self.entries]

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def weighted_mean(self, values: Sequence[float]) -> float:
        """``(1/phi_E) * sum nu(w) * values[w]`` with values aligned to ``entries``."""
        return math.fsum(nu * v for (_, nu), v in zip(self.entries, values)) / self.totient


@dataclass(frozen=True)
class RDecomposition:
    omega: int
    r: int
    alpha: int


# ---------------------------------------------------------------------------
# primes and factoring
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, exact for every ``m < 3.3e24``."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def prime_sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for i in range(3, math.isqrt(limit) + 1, 2):
        if flags[i]:
            flags[i * i :: 2 * i] = False
    return np.flatnonzero(flags).astype(np.int64)


def factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division; ``m`` is at most a Carmichael value."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def divisors(m: int) -> list[int]:
    divs = [1]
    for p, e in factorize(m).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(m: int) -> int:
    result = m
    for p in factorize(m):
        result -= result // p
    return result


def semiprime_record(N: int) -> SemiprimeRecord:
    """Factor a small ``N`` and validate it, naming the violated property on failure."""
    if N < 2:
        raise NotSemiprimeError(f"{N} is not an integer >= 2")
    if N % 2 == 0:
        raise NotSemiprimeError(f"{N} is even")
    fac = factorize(N)
    if len(fac) == 1 and sum(fac.values()) == 1:
        raise NotSemiprimeError(f"{N} is prime")
    if len(fac) == 1 and sum(fac.values()) == 2:
        raise NotSemiprimeError(f"{N} is the square of a prime")
    if sum(fac.values()) != 2:
        raise NotSemiprimeError(f"{N} has more than two prime factors")
    p, q = sorted(fac)  # every odd squarefree semiprime is >= 15
    return SemiprimeRecord.from_factors(p, q)


# ---------------------------------------------------------------------------
# semiprime ensembles
# ---------------------------------------------------------------------------


def enumerate_semiprimes(limit: int) -> list[SemiprimeRecord]:
    """All odd semiprimes ``p*q <= limit`` with ``3 <= p < q``, ascending in ``N``."""
    if limit < 15:
        raise EmptyDomainError(f"no odd semiprime is <= {limit}")
    primes = prime_sieve(limit // 3)
    primes = primes[primes > 2].tolist()
    pairs = []
    for i, p in enumerate(primes):
        if p * p > limit:
            break
        for q in primes[i + 1 :]:
            if p * q > limit:
                break
            pairs.append((p * q, p, q))
    pairs.sort()
    return [SemiprimeRecord(N, p, q, register_size(N)) for N, p, q in pairs]


def semiprimes_for_n(n: int, count: int) -> list[SemiprimeRecord]:
    """The ``count`` smallest odd semiprimes whose register size is ``n``."""
    if n < 8:
        raise ValueError("n must be >= 8 (N=15 is the smallest odd semiprime)")
    if count < 1:
        raise ValueError("count must be positive")
    lo = math.isqrt((1 << (n - 1)) - 1) + 1  # smallest N with N^2 >= 2^(n-1)
    hi = math.isqrt((1 << n) - 1)  # largest N with N^2 < 2^n
    out = []
    for N in range(lo | 1, hi + 1, 2):
        fac = factorize(N)
        if len(fac) == 2 and all(e == 1 for e in fac.values()):
            p, q = sorted(fac)
            out.append(SemiprimeRecord(N, p, q, n))
            if len(out) == count:
                break
    return out


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------


def multiplicative_order(x: int, N: int, carmichael: int | None = None) -> int:
    """Smallest ``w >= 1`` with ``x**w = 1 (mod N)``.

    Starts from the Carmichael exponent (or the totient-free upper bound
    ``lambda`` when supplied) and strips prime factors while the power stays 1.
    """
    if math.gcd(x, N) != 1:
        raise InvalidSeedError(f"gcd({x}, {N}) != 1")
    x %= N
    if N == 1 or x == 1:
        return 1
    if carmichael is None:
        carmichael = _carmichael(N)
    w = carmichael
    for p, e in factorize(carmichael).items():
        for _ in range(e):
            if pow(x, w // p, N) == 1:
                w //= p
            else:
                break
    return w


def _carmichael(N: int) -> int:
    lam = 1
    for p, e in factorize(N).items():
        if p == 2 and e >= 3:
            part = 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        lam = math.lcm(lam, part)
    return lam


def naive_order(x: int, N: int) -> int:
    """Order by repeated multiplication; reference only."""
    if math.gcd(x, N) != 1:
        raise InvalidSeedError(f"gcd({x}, {N}) != 1")
    y, w = x % N, 1
    while y != 1:
        y = y * x % N
        w += 1
    return w


def order_spectrum(rec: SemiprimeRecord, method: str = "cyclic") -> OrderSpectrum:
    """Complete ``(w, nu)`` table over all ``phi_E(N)`` seeds, seed 1 included.

    ``method="cyclic"`` counts orders through ``(Z/N)* = C_{p-1} x C_{q-1}``:
    a cyclic group of order ``m`` has ``phi(d)`` elements of each order
    ``d | m``, and a pair has order ``lcm(d1, d2)``. ``method="seeds"`` computes
    the order of every seed individually.
    """
    if method == "cyclic":
        counts: Counter[int] = Counter()
        dp = [(d, euler_phi(d)) for d in divisors(rec.p - 1)]
        dq = [(d, euler_phi(d)) for d in divisors(rec.q - 1)]
        for d1, c1 in dp:
            for d2, c2 in dq:
                counts[math.lcm(d1, d2)] += c1 * c2
    elif method == "seeds":
        lam = rec.carmichael
        counts = Counter(
            multiplicative_order(x, rec.N, lam)
            for x in range(1, rec.N)
            if math.gcd(x, rec.N) == 1
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    return OrderSpectrum(rec.N, tuple(sorted(counts.items())), rec.totient)


def order2_seed(rec: SemiprimeRecord) -> int:
    """The unique ``1 < x < N/2`` with ``x**2 = 1 (mod N)``, built by CRT."""
    N, p, q = rec.N, rec.p, rec.q
    # x = 1 mod p, x = -1 mod q, and its mirror
    x = (pow(q, -1, p) * q - pow(p, -1, q) * p) % N
    x = min(x, N - x)
    if not (1 < x < N / 2 and x * x % N == 1):
        raise ArithmeticError(f"CRT construction failed for N={N}")
    return x


@dataclass
class VerificationReport:
    name: str
    checked: int = 0
    violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return f"{self.name}: {len(self.violations)} violations in {self.checked} semiprimes"


def verify_order2_uniqueness(limit: int) -> VerificationReport:
    """Brute-force count of order-2 seeds below ``N/2`` for every semiprime ``<= limit``."""
    report = VerificationReport("order-2 uniqueness")
    for rec in enumerate_semiprimes(limit):
        N = rec.N
        x = np.arange(2, (N + 1) // 2, dtype=np.int64)
        hits = np.count_nonzero(x * x % N == 1)
        report.checked += 1
        if hits != 1 or order2_seed(rec) != int(x[x * x % N == 1][0]):
            report.violations.append(N)
    return report


def max_even_order(spectrum: OrderSpectrum) -> int:
    return max(w for w in spectrum.orders if w % 2 == 0)


def verify_max_order_bound(limit: int) -> VerificationReport:
    """Check ``max even w <= phi_E/2 < N/2`` for every semiprime ``<= limit``."""
    report = VerificationReport("max-order bound")
    for rec in enumerate_semiprimes(limit):
        w = max_even_order(order_spectrum(rec))
        report.checked += 1
        if not (2 * w <= rec.totient and rec.totient < rec.N):
            report.violations.append(rec.N)
    return report


def r_decompose(omega: int) -> RDecomposition:
    """Split ``omega = r * 2**alpha`` with ``r`` odd."""
    if omega < 1:
        raise ValueError("omega must be >= 1")
    alpha = (omega & -omega).bit_length() - 1
    return RDecomposition(omega, omega >> alpha, alpha)


def inv_r_average(spectrum: OrderSpectrum) -> float:
    """Multiplicity-weighted mean of ``1/r`` over the spectrum."""
    return spectrum.weighted_mean([1.0 / r_decompose(w).r for w in spectrum.orders])


def inv_r_model(n: float) -> float:
    return 2.0 ** (-(n - 8) / 2.6)


def inv_r_sweep(n_values: Iterable[int], count: int = 7) -> list[tuple[int, int, float]]:
    """Rows ``(n, N, <1/r>)`` for the smallest ``count`` semiprimes of each ``n``."""
    rows = []
    for n in n_values:
        for rec in semiprimes_for_n(n, count):
            rows.append((n, rec.N, inv_r_average(order_spectrum(rec))))
    return rows


def mean_order(spectrum: OrderSpectrum) -> float:
    return spectrum.weighted_mean([float(w) for w in spectrum.orders])


def omega_statistics(
    limit: int, bin_width: int = 500
) -> tuple[list[tuple[int, float]], list[tuple[float, float, int]]]:
    """Per-semiprime ``<w>`` and its binned average.

    Returns ``(scatter, binned)`` with ``scatter`` rows ``(N, <w>)`` and
    ``binned`` rows ``(center, <<w>>, count)`` for bins ``(w*(i-1), w*i]``
    centred on ``w*(i - 1/2)``. Only complete bins are reported.
    """
    if limit < bin_width:
        raise ValueError("limit must cover at least one bin")
    scatter = [(rec.N, mean_order(order_spectrum(rec))) for rec in enumerate_semiprimes(limit)]
    binned = []
    for i in range(1, limit // bin_width + 1):
        vals = [m for N, m in scatter if bin_width * (i - 1) < N <= bin_width * i]
        if vals:
            binned.append((bin_width * (i - 0.5), math.fsum(vals) / len(vals), len(vals)))
    return scatter, binned
