"""Gate-level simulation of the banded QFT on small registers.

This path never touches the phase formulas in :mod:`bandqft.qft_kernel`; it
applies Hadamards, controlled phase rotations and the final bit reversal to a
dense amplitude vector, so it can be used as an independent check.

Qubit ``i`` holds bit ``i`` of the basis index. The circuit processes qubits
from the most significant one down: Hadamard on qubit ``m``, then a controlled
rotation by ``2 pi / 2**(d+1)`` between qubits ``m`` and ``m - d`` for every
``d = 1 .. min(m, b)``. Bit reversal puts qubit ``m`` on output bit ``n-1-m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qft_kernel import run_length

STATE_CAP = 16


class ResourceError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuantumState:
    n: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True)
class Hadamard:
    qubit: int


@dataclass(frozen=True)
class ControlledPhase:
    qubit: int
    control: int
    angle: float


@dataclass(frozen=True)
class BitReversal:
    pass


@dataclass(frozen=True)
class BandedQftCircuit:
    n: int
    b: int
    gates: tuple

    @classmethod
    def build(cls, n: int, b: int) -> "BandedQftCircuit":
        gates: list = []
        for m in range(n - 1, -1, -1):
            gates.append(Hadamard(m))
            for d in range(1, min(m, b) + 1):
                gates.append(ControlledPhase(m, m - d, 2 * math.pi / 2 ** (d + 1)))
        gates.append(BitReversal())
        return cls(n, b, tuple(gates))

    @property
    def rotation_count(self) -> int:
        return sum(isinstance(g, ControlledPhase) for g in self.gates)


def initial_state(n: int, omega: int, s0: int = 0, cap: int = STATE_CAP) -> QuantumState:
    """Uniform superposition over ``s0 + k*omega``, ``k < K``, in register I."""
    if n > cap:
        raise ResourceError(f"n={n} exceeds the state-vector cap {cap}")
    K = run_length(n, omega, s0)
    amp = np.zeros(1 << n, dtype=complex)
    amp[s0 + omega * np.arange(K)] = 1 / math.sqrt(K)
    return QuantumState(n, amp)


def _bit_reversal_permutation(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    rev = np.zeros_like(idx)
    for i in range(n):
        rev |= ((idx >> i) & 1) << (n - 1 - i)
    return rev


def apply_gate(amps: np.ndarray, n: int, gate) -> np.ndarray:
    """Apply one gate to ``amps`` of shape ``(2**n,)`` or ``(2**n, batch)``."""
    if isinstance(gate, Hadamard):
        m = gate.qubit
        view = amps.reshape((1 << (n - m - 1), 2, 1 << m) + amps.shape[1:])
        a0, a1 = view[:, 0], view[:, 1]
        out = np.stack(((a0 + a1), (a0 - a1)), axis=1) / math.sqrt(2)
        return out.reshape(amps.shape)
    if isinstance(gate, ControlledPhase):
        idx = np.arange(1 << n)
        both = ((idx >> gate.qubit) & (idx >> gate.control) & 1).astype(bool)
        out = amps.copy()
        out[both] *= np.exp(1j * gate.angle)
        return out
    if isinstance(gate, BitReversal):
        out = np.empty_like(amps)
        out[_bit_reversal_permutation(n)] = amps
        return out
    raise TypeError(f"unknown gate {gate!r}")


def apply_banded_qft(state: QuantumState, b: int) -> QuantumState:
    circuit = BandedQftCircuit.build(state.n, b)
    amps = state.amplitudes
    for gate in circuit.gates:
        amps = apply_gate(amps, state.n, gate)
    return QuantumState(state.n, amps)


def circuit_matrix(n: int, b: int) -> np.ndarray:
    """Unitary of the banded circuit, column ``s`` is the image of ``|s>``."""
    amps = np.eye(1 << n, dtype=complex)
    for gate in BandedQftCircuit.build(n, b).gates:
        amps = apply_gate(amps, n, gate)
    return amps


def measure_distribution(state: QuantumState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def semiclassical_distribution(state: QuantumState, b: int) -> np.ndarray:
    """Outcome distribution of the measure-as-you-go (single-qubit) circuit.

    Each qubit is measured right after its Hadamard; its classical result then
    switches single-qubit phase gates on the lower qubits. The measurement tree
    is enumerated exhaustively, so this costs ``O(n 2**n)``.
    """
    n = state.n
    probs = np.zeros(1 << n)

    def descend(amps: np.ndarray, m: int, outcome: int) -> None:
        # amps spans qubits 0..m
        view = amps.reshape(2, 1 << m)
        a0, a1 = view[0], view[1]
        branches = ((a0 + a1) / math.sqrt(2), (a0 - a1) / math.sqrt(2))
        low = np.arange(1 << m)
        for result, branch in enumerate(branches):
            weight = float(np.sum(np.abs(branch) ** 2))
            if weight == 0.0:
                continue
            l = outcome | (result << (n - 1 - m))
            if m == 0:
                probs[l] += weight
                continue
            if result:
                branch = branch.copy()
                for d in range(1, min(m, b) + 1):
                    target = ((low >> (m - d)) & 1).astype(bool)
                    branch[target] *= np.exp(2j * math.pi / 2 ** (d + 1))
            descend(branch, m - 1, l)

    descend(state.amplitudes, n - 1, 0)
    return probs
