"""Success-probability measure of period finding under a banded QFT.

For an order ``omega`` the register-I state after measuring register II is a
uniform superposition over ``s_k = s0 + k*omega``. The probability of reading
the peak state ``l_j`` is

    P~_j(n, b, omega) = |sum_k exp(i [Phi(s_k, l_j) - phi(n, b, s_k, l_j)])|^2 / (2^n K)

and the measure is ``P = sum_j P~_j(b) / sum_j P~_j(n-1)``. Ensemble values
weight ``P`` by the multiplicity of each order among the seeds of ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .number_theory import OrderSpectrum, SemiprimeRecord, order_spectrum
from .qft_kernel import (
    CHUNK,
    K_SUM_CAP,
    coherent_sums,
    omega_closed,
    peak_locations,
    peak_set,
    run_length,
)

P_TOLERANCE = 1e-9
DEFAULT_S0_SAMPLES = 8


@dataclass(frozen=True)
class PerformancePoint:
    n: int
    b: int
    P_raw: float
    P: float
    N: int | None = None
    omega: int | None = None
    s0: int | str = 0
    K: int | None = None


@dataclass(frozen=True)
class SeparabilityReport:
    N: int
    n: int
    b: int
    orders: tuple[int, ...]
    delta_k: float
    delta_j: float


def _class_states(n: int, omega: int, s0: int) -> np.ndarray:
    K = run_length(n, omega, s0)
    if K > K_SUM_CAP:
        raise ValueError(f"K={K} exceeds the per-peak k-sum cap")
    return s0 + omega * np.arange(K, dtype=np.int64)


def peak_sums(n: int, b: int, omega: int, s0: int = 0, j=None) -> np.ndarray:
    """Coherent k-sums at the peak states ``l_j`` (all ``j`` by default)."""
    j = np.arange(omega) if j is None else np.atleast_1d(j)
    l, _ = peak_locations(n, omega, j)
    return coherent_sums(n, b, _class_states(n, omega, s0), l)


def peak_probabilities(n: int, b: int, omega: int, s0: int = 0) -> np.ndarray:
    """``P~_j`` for every ``j = 0 .. omega-1``."""
    K = run_length(n, omega, s0)
    return np.abs(peak_sums(n, b, omega, s0)) ** 2 / (2.0**n * K)


def peak_probability(n: int, b: int, omega: int, j: int, s0: int = 0) -> float:
    if not 0 <= j < omega:
        raise ValueError("need 0 <= j < omega")
    K = run_length(n, omega, s0)
    return float(np.abs(peak_sums(n, b, omega, s0, j)[0]) ** 2 / (2.0**n * K))


def full_bandwidth_probabilities(n: int, omega: int, s0: int = 0) -> np.ndarray:
    """``P~_j`` at ``b = n-1``; the geometric-sum closed form when ``s0 = 0``."""
    if s0 == 0:
        ps = peak_set(n, omega)
        return np.abs(omega_closed(n, omega, ps.beta)) ** 2 / (2.0**n * ps.K)
    return peak_probabilities(n, n - 1, omega, s0)


@lru_cache(maxsize=None)
def raw_measure(n: int, b: int, omega: int, s0: int = 0) -> float:
    """``P~(n, b, omega) = sum_j P~_j``."""
    if b == n - 1:
        probs = full_bandwidth_probabilities(n, omega, s0)
    else:
        probs = peak_probabilities(n, b, omega, s0)
    return math.fsum(probs.tolist())


def performance_measure(n: int, b: int, omega: int, s0: int = 0) -> PerformancePoint:
    if not 0 <= b <= n - 1:
        raise ValueError("need 0 <= b <= n-1")
    raw = raw_measure(n, b, omega, s0)
    P = 1.0 if b == n - 1 else raw / raw_measure(n, n - 1, omega, s0)
    return PerformancePoint(n, b, raw, P, omega=omega, s0=s0, K=run_length(n, omega, s0))


def sampled_offsets(n: int, omega: int, samples: int = DEFAULT_S0_SAMPLES, seed: int = 0) -> list[int]:
    """Uniformly drawn class representatives, keyed on ``(seed, n, omega)`` only."""
    rng = np.random.default_rng([seed, n, omega])
    return rng.integers(0, omega, size=samples).tolist()


def performance_measure_averaged(
    n: int, b: int, omega: int, samples: int = DEFAULT_S0_SAMPLES, seed: int = 0
) -> PerformancePoint:
    """``P`` and ``P~`` averaged over randomly drawn ``s0``."""
    pts = [performance_measure(n, b, omega, s0) for s0 in sampled_offsets(n, omega, samples, seed)]
    raw = math.fsum(p.P_raw for p in pts) / len(pts)
    P = math.fsum(p.P for p in pts) / len(pts)
    return PerformancePoint(n, b, raw, P, omega=omega, s0=f"avg{samples}")


def ensemble_performance(
    rec: SemiprimeRecord,
    b: int,
    spectrum: OrderSpectrum | None = None,
    s0_samples: int | None = None,
    seed: int = 0,
) -> PerformancePoint:
    """Multiplicity-weighted ``P_N(n, b)`` over the order spectrum of ``N``."""
    spectrum = spectrum or order_spectrum(rec)
    if s0_samples:
        pts = [performance_measure_averaged(rec.n, b, w, s0_samples, seed) for w in spectrum.orders]
        s0: int | str = f"avg{s0_samples}"
    else:
        pts = [performance_measure(rec.n, b, w) for w in spectrum.orders]
        s0 = 0
    return PerformancePoint(
        rec.n,
        b,
        spectrum.weighted_mean([p.P_raw for p in pts]),
        spectrum.weighted_mean([p.P for p in pts]),
        N=rec.N,
        s0=s0,
    )


def peak_shape_scan(
    n: int, b: int, omega: int, j: int, window: int, s0: int = 0
) -> list[tuple[int, float]]:
    """``P~(n, l, b, omega)`` at every integer ``l`` within ``window`` of ``l_j``."""
    if window < 1:
        raise ValueError("window must be >= 1")
    (lj,), _ = peak_locations(n, omega, [j])
    l = np.arange(lj - window, lj + window + 1, dtype=np.int64) % (1 << n)
    K = run_length(n, omega, s0)
    probs = np.abs(coherent_sums(n, b, _class_states(n, omega, s0), l)) ** 2 / (2.0**n * K)
    return list(zip(range(int(lj) - window, int(lj) + window + 1), probs.tolist()))


def half_max_crossing(scan: Sequence[tuple[int, float]], side: str = "left") -> float:
    """Linearly interpolated ``l`` where the normalised shape crosses 1/2."""
    l = np.array([x for x, _ in scan], dtype=float)
    p = np.array([y for _, y in scan])
    p = p / p.max()
    top = int(np.argmax(p))
    idx = range(top, 0, -1) if side == "left" else range(top, len(p) - 1)
    step = -1 if side == "left" else 1
    for i in idx:
        a, c = p[i], p[i + step]
        if c <= 0.5 <= a:
            return float(l[i] + step * (a - 0.5) / (a - c))
    raise ValueError("shape never drops below half maximum inside the window")


def _separability_sums(n: int, b: int, omega: int) -> tuple[float, float, float]:
    """``(A_k, B_k, B_j)`` for one order, each divided by ``2^n K``."""
    ps = peak_set(n, omega)
    total, deficit = coherent_sums(n, b, _class_states(n, omega, 0), ps.l, with_deficit=True)
    omega_sq = np.abs(omega_closed(n, omega, ps.beta)) ** 2
    mean_sq = np.abs(deficit / ps.K) ** 2
    norm = 2.0**n * ps.K
    a_k = math.fsum((np.abs(total) ** 2).tolist()) / norm
    b_k = math.fsum((omega_sq * mean_sq).tolist()) / norm
    b_j = math.fsum(omega_sq.tolist()) * math.fsum(mean_sq.tolist()) / omega / norm
    return a_k, b_k, b_j


def separability(
    rec: SemiprimeRecord, b: int, spectrum: OrderSpectrum | None = None
) -> SeparabilityReport:
    """Relative errors of the k- and j-factorisations, aggregated over the spectrum.

    ``A`` and ``B`` sums of each order are normalised by ``2^n K`` and
    multiplicity-weighted before the ratio is taken.
    """
    spectrum = spectrum or order_spectrum(rec)
    sums = [_separability_sums(rec.n, b, w) for w in spectrum.orders]
    a_k = spectrum.weighted_mean([s[0] for s in sums])
    b_k = spectrum.weighted_mean([s[1] for s in sums])
    b_j = spectrum.weighted_mean([s[2] for s in sums])
    if a_k == 0 or b_k == 0:
        raise ZeroDivisionError(f"vanishing A sum for N={rec.N}, b={b}")
    return SeparabilityReport(
        rec.N, rec.n, b, tuple(spectrum.orders), abs(a_k - b_k) / a_k, abs(b_k - b_j) / b_k
    )


def separability_k(rec: SemiprimeRecord, b: int, spectrum: OrderSpectrum | None = None) -> float:
    return separability(rec, b, spectrum).delta_k


def separability_j(rec: SemiprimeRecord, b: int, spectrum: OrderSpectrum | None = None) -> float:
    return separability(rec, b, spectrum).delta_j


__all__ = [
    "CHUNK",
    "PerformancePoint",
    "SeparabilityReport",
    "ensemble_performance",
    "full_bandwidth_probabilities",
    "half_max_crossing",
    "peak_probabilities",
    "peak_probability",
    "peak_shape_scan",
    "peak_sums",
    "performance_measure",
    "performance_measure_averaged",
    "raw_measure",
    "sampled_offsets",
    "separability",
    "separability_j",
    "separability_k",
]
