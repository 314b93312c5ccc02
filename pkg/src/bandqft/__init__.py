"""Period finding with a bandwidth-limited quantum Fourier transform.

Submodules:

* :mod:`bandqft.number_theory` semiprimes, multiplicative orders and their spectra
* :mod:`bandqft.qft_kernel` peak locations and the banded phase sums
* :mod:`bandqft.performance` the success-probability measure and separability
* :mod:`bandqft.analytics` closed-form models, moments and fits
* :mod:`bandqft.statevector` gate-level reference simulation
* :mod:`bandqft.store` sweeps, caching and result files
* :mod:`bandqft.cli` the ``bandqft`` command
"""

from .number_theory import (
    OrderSpectrum,
    SemiprimeRecord,
    order_spectrum,
    semiprime_record,
    semiprimes_for_n,
)
from .performance import ensemble_performance, performance_measure, separability
from .qft_kernel import peak_set, phi_max

__version__ = "0.1.0"

__all__ = [
    "OrderSpectrum",
    "SemiprimeRecord",
    "ensemble_performance",
    "order_spectrum",
    "peak_set",
    "performance_measure",
    "phi_max",
    "semiprime_record",
    "semiprimes_for_n",
    "separability",
]
