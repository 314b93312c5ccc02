"""Bit-level phase machinery of the banded QFT.

Conventions: ``s`` is a register-I basis state before the transform, ``l`` the
measured state after it, both ``n``-bit integers. The full phase is
``Phi(n, s, l)`` and the phase removed by bandwidth truncation is
``phi(n, b, s, l)``; the banded transform applies ``Phi - phi``.

Both phases are integer multiples of ``pi / 2**(n-1)`` modulo ``2 pi``:

* ``exp(i Phi) = exp(2 pi i (s*l mod 2**n) / 2**n)``
* ``phi = pi / 2**(n-1) * sum_i s_[i] * c_i`` with ``c_i = (2**i l) mod 2**(n-b-1)``

so the banded phase is ``2 pi ((s*l - sum_i s_[i] c_i) mod 2**n) / 2**n``.
The hot path :func:`coherent_sums` evaluates that integer exactly and only
takes the exponential at the end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

CHUNK = 4096
"""Fixed k-chunk length; sums are reduced chunk by chunk in index order."""

N_CAP = 26
K_SUM_CAP = 1 << 26
L_BLOCK = 512
HALF_WIDTH_CONSTANT = 1.39


class CapExceededError(RuntimeError):
    pass


def check_cap(n: int, unsafe_large: bool = False) -> None:
    if n > N_CAP and not unsafe_large:
        raise CapExceededError(f"n={n} exceeds the register cap {N_CAP}")
    if 2 * n > 62:
        raise CapExceededError(f"n={n}: s*l no longer fits in int64")


def bit(x: int, i: int) -> int:
    return (x >> i) & 1


# ---------------------------------------------------------------------------
# peaks
# ---------------------------------------------------------------------------


def run_length(n: int, omega: int, s0: int = 0) -> int:
    """Size of the class ``{s0 + k*omega}`` inside ``[0, 2**n)``."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if not 0 <= s0 < omega:
        raise ValueError("need 0 <= s0 < omega")
    return -((s0 - (1 << n)) // omega)


@dataclass(frozen=True)
class PeakSet:
    n: int
    omega: int
    s0: int
    K: int
    l: np.ndarray
    beta: np.ndarray

    def __len__(self) -> int:
        return self.omega

    @property
    def j(self) -> np.ndarray:
        return np.arange(self.omega)


def peak_locations(n: int, omega: int, j) -> tuple[np.ndarray, np.ndarray]:
    """Integer ``l_j`` nearest to ``2**n j / omega`` and offset ``beta_j``.

    A tie at exactly one half rounds down, so ``beta`` lies in ``[-1/2, 1/2)``.
    """
    j = np.asarray(j, dtype=np.int64)
    num = (j << (n + 1)) - omega
    l = -((-num) // (2 * omega))  # ceil(2^n j / omega - 1/2)
    beta = (l * omega - (j << n)) / omega
    return l, beta


def peak_set(n: int, omega: int, s0: int = 0) -> PeakSet:
    if omega < 1:
        raise ValueError("omega must be >= 1")
    l, beta = peak_locations(n, omega, np.arange(omega))
    return PeakSet(n, omega, s0, run_length(n, omega, s0), l, beta)


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------


def Phi_double_sum(n: int, s: int, l: int) -> float:
    """Full QFT phase ``pi sum_{m=0}^{n-1} sum_{mu=0}^{m} s_[n-m-1] l_[mu] 2**(mu-m)``."""
    total = 0.0
    for m in range(n):
        if bit(s, n - m - 1):
            for mu in range(m + 1):
                if bit(l, mu):
                    total += 2.0 ** (mu - m)
    return math.pi * total


def phi_double_sum(n: int, b: int, s: int, l: int) -> float:
    """Truncation phase, reference O(n^2) evaluation of the double bit sum."""
    if not 0 <= b <= n - 1:
        raise ValueError("need 0 <= b <= n-1")
    total = 0.0
    for m in range(b + 1, n):
        if bit(s, n - m - 1):
            for mu in range(m - b):
                if bit(l, mu):
                    total += 2.0 ** (mu - m)
    return math.pi * total


@dataclass(frozen=True)
class PhaseContext:
    n: int
    b: int
    l: int
    weights: tuple[int, ...]

    @classmethod
    def build(cls, n: int, b: int, l: int) -> "PhaseContext":
        if not 0 <= b <= n - 1:
            raise ValueError("need 0 <= b <= n-1")
        width = n - b - 1
        mod = 1 << width
        return cls(n, b, l, tuple(((l << i) % mod) for i in range(width)))

    def phase_units(self, s: int) -> int:
        """``phi`` in units of ``pi / 2**(n-1)``."""
        return sum(c for i, c in enumerate(self.weights) if (s >> i) & 1)


def phi_fast(ctx: PhaseContext, s: int) -> float:
    return math.pi * ctx.phase_units(s) / (1 << (ctx.n - 1))


def phi_max(n: int, b: int) -> float:
    """Largest truncation phase, reached with every bit of ``s`` and ``l`` set."""
    if not 0 <= b <= n - 1:
        raise ValueError("need 0 <= b <= n-1")
    return 2 * math.pi * (2.0 ** (-b - 1) * (n - b - 2) + 2.0**-n)


def exp_iPhi_closed(n: int, omega: int, beta_j: float, k, s0: int = 0):
    """``exp(i Phi(n, k*omega, l_j)) = exp(2 pi i k omega beta_j / 2**n)``; valid for ``s0 = 0``."""
    if s0 != 0:
        raise ValueError("the closed form assumes s0 = 0")
    return np.exp(2j * np.pi * np.asarray(k) * omega * beta_j / 2.0**n)


def exp_iPhi_modular(n: int, s, l):
    """``exp(i Phi)`` from the integer product ``s*l mod 2**n``."""
    t = (np.asarray(s, dtype=np.int64) * np.asarray(l, dtype=np.int64)) & ((1 << n) - 1)
    return np.exp(2j * np.pi * t / 2.0**n)


def omega_closed(n: int, omega: int, beta_j, s0: int = 0):
    """Geometric sum ``sum_k exp(2 pi i k omega beta / 2**n)`` over ``k < K``.

    Written as ``exp(i (K-1) t/2) sin(K t/2) / sin(t/2)`` to avoid the
    cancellation in ``1 - exp(i t)``; ``|beta| < 1e-15`` returns ``K``.
    """
    if s0 != 0:
        raise ValueError("the closed form assumes s0 = 0")
    K = run_length(n, omega, 0)
    beta = np.asarray(beta_j, dtype=float)
    t = 2 * np.pi * omega * beta / 2.0**n
    small = np.abs(beta) < 1e-15
    safe_t = np.where(small, 1.0, t)
    val = np.exp(0.5j * (K - 1) * safe_t) * np.sin(0.5 * K * safe_t) / np.sin(0.5 * safe_t)
    return np.where(small, complex(K), val)


# ---------------------------------------------------------------------------
# coherent k-sums (hot path)
# ---------------------------------------------------------------------------


def phase_weight_table(n: int, b: int, l: np.ndarray) -> np.ndarray:
    """``c_i(l) = (2**i l) mod 2**(n-b-1)`` as a float matrix of shape ``(n-b-1, len(l))``."""
    width = n - b - 1
    l = np.asarray(l, dtype=np.int64)
    if width == 0:
        return np.zeros((0, l.size))
    mask = (1 << width) - 1
    shifts = np.arange(width, dtype=np.int64)[:, None]
    return ((l[None, :] << shifts) & mask).astype(np.float64)


def coherent_sums(
    n: int,
    b: int,
    s: np.ndarray,
    l: np.ndarray,
    with_deficit: bool = False,
    chunk: int = CHUNK,
):
    """``sum_k exp(i [Phi(s_k, l) - phi(n, b, s_k, l)])`` for every ``l``.

    With ``with_deficit`` also returns ``sum_k exp(-i phi(n, b, s_k, l))``.
    Partial sums over consecutive ``chunk``-long blocks of ``s`` are added in
    block order, so the result does not depend on how callers parallelise.
    """
    s = np.asarray(s, dtype=np.int64)
    l = np.asarray(l, dtype=np.int64)
    total = np.zeros(l.size, dtype=complex)
    deficit = np.zeros(l.size, dtype=complex)
    # l-blocks only bound memory; every l keeps the same k-reduction order
    for lo in range(0, l.size, L_BLOCK):
        tot, dfc = _coherent_block(n, b, s, l[lo : lo + L_BLOCK], with_deficit, chunk)
        total[lo : lo + L_BLOCK] = tot
        deficit[lo : lo + L_BLOCK] = dfc
    if with_deficit:
        return total, deficit
    return total


def _coherent_block(n, b, s, l, with_deficit, chunk):
    width = n - b - 1
    mask = (1 << n) - 1
    scale = 2 * np.pi / 2.0**n
    weights = phase_weight_table(n, b, l)
    shifts = np.arange(width, dtype=np.int64)
    total = np.zeros(l.size, dtype=complex)
    deficit = np.zeros(l.size, dtype=complex)
    for start in range(0, s.size, chunk):
        sk = s[start : start + chunk]
        if width:
            bits = ((sk[:, None] >> shifts) & 1).astype(np.float64)
            # integer-valued products, exact in double precision
            units = (bits @ weights).astype(np.int64)
        else:
            units = np.zeros((sk.size, l.size), dtype=np.int64)
        t = (sk[:, None] * l[None, :] - units) & mask
        total += np.exp(1j * scale * t).sum(axis=0)
        if with_deficit:
            # phi = pi*units/2^(n-1) = scale*units
            deficit += np.exp(-1j * scale * (units & mask)).sum(axis=0)
    return total, deficit


# ---------------------------------------------------------------------------
# peak width heuristics
# ---------------------------------------------------------------------------


def peak_half_width(K: int) -> float:
    """Heuristic half width ``1.39 / K`` of ``sin^2(K z) / sin^2(z)``."""
    if K <= 10:
        warnings.warn(f"half-width heuristic used outside K > 10 (K={K})", stacklevel=2)
    return HALF_WIDTH_CONSTANT / K


def half_width_residual(K: int) -> float:
    """``|f(1.39/K) - 1/2|`` for ``f(z) = sin^2(K z) / (K^2 sin^2 z)``."""
    z = HALF_WIDTH_CONSTANT / K
    return abs(math.sin(K * z) ** 2 / (K**2 * math.sin(z) ** 2) - 0.5)


def fwhm_in_l(n: int | None = None, omega: int | None = None, K: int | None = None) -> float:
    """``(2**n / (omega K)) (1.39 / pi)``; with no arguments ``K = 2**n / omega`` exactly."""
    ratio = 1.0 if n is None else 2.0**n / (omega * K)
    return ratio * HALF_WIDTH_CONSTANT / math.pi
