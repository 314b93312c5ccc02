"""Closed-form performance models, their random-bit moments, and fits to data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np
from scipy import integrate, optimize

from .number_theory import inv_r_model
from .qft_kernel import phi_max

XI_PREFACTOR = 1.1
ANCHOR_N = 8
SMALL_N_DIVISOR = 100.0
ANALYTIC_SMALL_N_DIVISOR = 64.0
FORMULA_VALID_FROM_B = 8


class OutOfValidityError(ValueError):
    pass


class FitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# decay constants and the two regimes
# ---------------------------------------------------------------------------


def xi_model(b: int) -> float:
    return XI_PREFACTOR * 2.0 ** (-2 * b)


def analytic_xi(b: int) -> float:
    """Random-bit prediction ``pi^2 / (12 ln 2) * 2**(-2b)``."""
    if b < 0:
        raise ValueError("b must be >= 0")
    return math.pi**2 / (12 * math.log(2)) * 2.0 ** (-2 * b)


def model_P_large_n(n: float, b: int) -> float:
    """Exponential regime ``2**(-xi_b (n - 8))``."""
    if n < ANCHOR_N:
        raise ValueError("the exponential law is anchored at n = 8")
    return 2.0 ** (-xi_model(b) * (n - ANCHOR_N))


@lru_cache(maxsize=1)
def fbar() -> float:
    """Mean of ``sinc^2(pi beta)`` over ``beta in [-1/2, 1/2]``."""
    val, _ = integrate.quad(lambda x: np.sinc(x) ** 2, -0.5, 0.5, epsabs=1e-13, epsrel=1e-13)
    return val


def model_P_small_n(
    n: float, b: int, divisor: float = SMALL_N_DIVISOR, inv_r: float | None = None
) -> float:
    """Non-exponential regime ``P~_< / fbar``.

    ``P~_< = <1/r> + (fbar - <1/r>) exp(-phi_max^2 / divisor)``, with
    ``<1/r>`` taken from the ``2**(-(n-8)/2.6)`` model unless given.
    """
    if n < b + 1:
        raise ValueError("need n >= b+1")
    f = fbar()
    u = inv_r_model(n) if inv_r is None else inv_r
    raw = u + (f - u) * math.exp(-phi_max(n, b) ** 2 / divisor)
    return raw / f


def model_P_small_n_analytic(n: float, b: int) -> float:
    return math.exp(-phi_max(n, b) ** 2 / ANALYTIC_SMALL_N_DIVISOR)


# ---------------------------------------------------------------------------
# random-bit moments of the truncation phase
# ---------------------------------------------------------------------------


class PhaseMoments(NamedTuple):
    mean: float
    mean_square: float
    mean_square_of_k_mean: float


def _x(n: int, b: int) -> int:
    x = n - b - 2
    if x < 0:
        raise ValueError("need n >= b+2")
    return x


def moments(n: int, b: int) -> PhaseMoments:
    """``<phi>``, ``<phi^2>`` and ``<<phi>_k^2>_j`` for independent uniform bits."""
    x = _x(n, b)
    scale = 2.0 ** (-2 * b)
    mean = math.pi / 4 * (2.0**-b * x + 2.0 ** (1 - n))
    sq = math.pi**2 / 144 * scale * (9 * x * x + 21 * x - 10 + 9 * (2 + x) * 2.0**-x + 2.0 ** (-2 * x))
    ksq = math.pi**2 / 96 * scale * (6 * x * x + 6 * x - 4 + 6 * (1 + x) * 2.0**-x + 2.0 ** (-2 * x))
    return PhaseMoments(mean, sq, ksq)


def sigma_hat_squared(n: int, b: int) -> float:
    x = _x(n, b)
    return math.pi**2 / 288 * 2.0 ** (-2 * b) * (24 * x - 8 + 18 * 2.0**-x - 2.0 ** (-2 * x))


def monte_carlo_moments(n: int, b: int, samples: int = 10**6, seed: int = 0) -> PhaseMoments:
    """Sampling estimate of :func:`moments` from i.i.d. uniform ``s`` and ``l``.

    The inner k-average of ``phi`` is taken exactly (``phi`` is linear in the
    bits of ``s``), so only ``l`` is sampled for the third moment.
    """
    rng = np.random.default_rng(seed)
    s = rng.integers(0, 1 << n, size=samples, dtype=np.int64)
    l = rng.integers(0, 1 << n, size=samples, dtype=np.int64)
    width = n - b - 1
    mask = (1 << width) - 1
    units = np.zeros(samples)
    weight_total = np.zeros(samples)
    for i in range(width):
        c = ((l << i) & mask).astype(float)
        units += ((s >> i) & 1) * c
        weight_total += c
    unit = math.pi / 2.0 ** (n - 1)
    phi = unit * units
    k_mean = unit * weight_total / 2
    return PhaseMoments(float(phi.mean()), float((phi**2).mean()), float((k_mean**2).mean()))


# ---------------------------------------------------------------------------
# transition and validity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionPoint:
    b: int
    n_t_formula: float
    n_t_quadratic: float
    n_t_empirical: float | None
    valid: bool


def _quadratic_roots(b: int) -> tuple[float, float]:
    C = 55 * math.log(2) / math.pi**2
    centre = C + b + 2
    disc = centre**2 - 16 * C - (b + 2) ** 2
    if disc < 0:
        raise OutOfValidityError(f"no real transition for b={b}")
    return centre - math.sqrt(disc), centre + math.sqrt(disc)


def transition_point(b: int, empirical: bool = False) -> TransitionPoint:
    """Onset of the exponential regime from ``phi_max^2/100 = xi_b ln2 (n - 8)``.

    ``n_t_formula`` is the rounded closed form ``b + 5.9 + sqrt(7.7(b+2) - 47)``;
    ``n_t_quadratic`` the larger root of the underlying quadratic, which
    satisfies the defining relation exactly.
    """
    disc = 7.7 * (b + 2) - 47
    if disc < 0:
        raise OutOfValidityError(f"7.7(b+2) - 47 = {disc:.3g} < 0 for b={b}")
    formula = b + 5.9 + math.sqrt(disc)
    _, upper = _quadratic_roots(b)
    emp = empirical_transition(b) if empirical else None
    return TransitionPoint(b, formula, upper, emp, b >= FORMULA_VALID_FROM_B)


def empirical_transition(b: int, lo: float | None = None, hi: float = 64.0) -> float | None:
    """Largest crossing of ``P_<`` and ``P_>`` on ``[b+2, hi]``, located by bisection."""
    lo = max(b + 2.0, ANCHOR_N) if lo is None else lo

    def gap(n):
        return model_P_small_n(n, b) - model_P_large_n(n, b)

    grid = np.linspace(lo, hi, 1024)
    vals = np.array([gap(n) for n in grid])
    flips = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
    if flips.size == 0:
        return None
    i = flips[-1]
    return optimize.bisect(gap, grid[i], grid[i + 1], xtol=1e-12)


def validity_bound(b: int) -> int:
    """Largest ``n`` with ``sigma_hat^2 < 1`` to leading order: ``floor(12 * 4**b / pi^2)``."""
    return math.floor(12 * 4.0**b / math.pi**2)


def taylor_validity_bound(b: int) -> int:
    """``floor(2**(b+1) / (2 pi))``, where ``phi_max`` itself stays below 1."""
    return math.floor(2.0 ** (b + 1) / (2 * math.pi))


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    b: int
    xi_fitted: float
    xi_model: float
    xi_analytic: float
    n_min: int
    n_max: int
    count: int
    residual_rms: float

    @property
    def ratio_to_model(self) -> float:
        return self.xi_fitted / self.xi_model


def fit_exponential(rows: Iterable, b: int, n_min: int = ANCHOR_N) -> FitResult:
    """Zero-intercept least squares of ``log2 P`` against ``n - 8``.

    ``rows`` are objects with ``n``, ``b`` and ``P`` attributes (or mappings
    with those keys). Only rows with ``n`` above ``n_min`` and above the
    transition point (where one exists) are used.
    """
    try:
        cutoff = max(n_min, transition_point(b).n_t_formula)
    except OutOfValidityError:
        cutoff = n_min
    pts = []
    for row in rows:
        get = row.get if isinstance(row, dict) else lambda k, r=row: getattr(r, k)
        if int(get("b")) == b and int(get("n")) > cutoff:
            pts.append((int(get("n")), float(get("P"))))
    if len(pts) < 4:
        raise FitError(f"need >= 4 rows above n={cutoff:.2f} for b={b}, got {len(pts)}")
    n = np.array([p[0] for p in pts], dtype=float)
    P = np.array([p[1] for p in pts])
    if np.any(P <= 0):
        raise FitError("non-positive performance values cannot be fitted in log space")
    x = n - ANCHOR_N
    y = np.log2(P)
    (slope,), *_ = np.linalg.lstsq(x[:, None], y, rcond=None)
    resid = y - slope * x
    return FitResult(
        b,
        float(-slope),
        xi_model(b),
        analytic_xi(b),
        int(n.min()),
        int(n.max()),
        len(pts),
        float(np.sqrt(np.mean(resid**2))),
    )
