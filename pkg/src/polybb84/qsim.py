"""Single-qubit simulation: basis encoding, projective measurement, and
stochastic noise channels, all driven by an injectable seeded random stream.

The protocol never entangles qubits, so a transmission is just a sequence of
independent pure states. Noise uses trajectory sampling: each call picks one
Kraus branch and returns another pure state, which matches shot-style
repetition of the whole circuit at O(1) cost per qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

NORM_TOL = 1e-12

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

Rng = np.random.Generator


class Basis(Enum):
    """Z is the computational basis, X the Hadamard (superposition) basis."""

    Z = "Z"
    X = "X"

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Basis.{self.name}"


def bases_from_string(text: str) -> tuple[Basis, ...]:
    return tuple(Basis(ch) for ch in text)


def bases_to_string(bases: Iterable[Basis]) -> str:
    return "".join(b.value for b in bases)


class QubitState(NamedTuple):
    """Normalized single-qubit pure state: amplitudes of |0> and |1>."""

    amp0: complex
    amp1: complex

    def norm_sq(self) -> float:
        return abs(self.amp0) ** 2 + abs(self.amp1) ** 2


@dataclass(frozen=True)
class NoiseSpec:
    """Channel noise knobs applied on Bob's side of the quantum channel.

    Depolarizing noise hits only the qubit indices in ``depol_targets``;
    Pauli and measurement-flip noise apply to every qubit.
    """

    pauli_p: float = 0.0
    depol_p: float = 0.0
    depol_targets: frozenset[int] = frozenset()
    meas_flip_p: float = 0.0

    def __post_init__(self) -> None:
        for name in ("pauli_p", "depol_p", "meas_flip_p"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p!r}")
        object.__setattr__(self, "depol_targets", frozenset(self.depol_targets))

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls()

    @property
    def silent(self) -> bool:
        return self.pauli_p == 0.0 and self.depol_p == 0.0 and self.meas_flip_p == 0.0


def make_rng(seed: int) -> Rng:
    """Deterministic stream: equal seeds give bit-identical draw sequences."""
    return np.random.default_rng(np.random.SeedSequence(seed))


def derive_seed(master_seed: int, *path: int) -> int:
    """Stable 64-bit child seed keyed by (master_seed, *path).

    This is the seed-splitting rule used everywhere: trial i of sweep point j
    gets derive_seed(master, domain_tag, j, i), so trials stay independent and
    reordering their execution cannot change any aggregate.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


_STATE_0 = QubitState(1.0 + 0j, 0j)
_STATE_1 = QubitState(0j, 1.0 + 0j)
_STATE_PLUS = QubitState(_INV_SQRT2 + 0j, _INV_SQRT2 + 0j)
_STATE_MINUS = QubitState(_INV_SQRT2 + 0j, -_INV_SQRT2 + 0j)


def encode(bit: int, basis: Basis) -> QubitState:
    """Encode a classical bit: Z maps to |0>/|1>, X to |+>/|->."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    if basis is Basis.Z:
        return _STATE_0 if bit == 0 else _STATE_1
    return _STATE_PLUS if bit == 0 else _STATE_MINUS


def measure(state: QubitState, basis: Basis, rng: Rng) -> int:
    """Projective measurement; the caller treats the state as consumed.

    Outcome 0 corresponds to |0> in Z and to |+> in X, matching encode().
    """
    if basis is Basis.Z:
        p0 = abs(state.amp0) ** 2
    else:
        p0 = abs((state.amp0 + state.amp1) * _INV_SQRT2) ** 2
    return 0 if rng.random() < p0 else 1


def _pauli_x(s: QubitState) -> QubitState:
    return QubitState(s.amp1, s.amp0)


def _pauli_y(s: QubitState) -> QubitState:
    return QubitState(-1j * s.amp1, 1j * s.amp0)


def _pauli_z(s: QubitState) -> QubitState:
    return QubitState(s.amp0, -s.amp1)


# Branch draw order is fixed so stubbed streams can force a specific operator.
_PAULI_BRANCHES = (_pauli_x, _pauli_y, _pauli_z)
_DEPOL_BRANCHES = (lambda s: s, _pauli_x, _pauli_y, _pauli_z)


def apply_pauli_noise(state: QubitState, p: float, rng: Rng) -> QubitState:
    """With probability p apply one of X, Y, Z drawn uniformly; else identity."""
    if p > 0.0 and rng.random() < p:
        return _PAULI_BRANCHES[int(rng.integers(3))](state)
    return state


def apply_depolarizing(state: QubitState, p: float, rng: Rng) -> QubitState:
    """Trajectory sample of the depolarizing channel.

    With probability p the state is replaced by the maximally mixed state,
    realized as one of I, X, Y, Z applied with probability 1/4 each.
    """
    if p > 0.0 and rng.random() < p:
        return _DEPOL_BRANCHES[int(rng.integers(4))](state)
    return state


def flip_measurement(bit: int, p: float, rng: Rng) -> int:
    """Readout error: return the complement bit with probability p."""
    if p > 0.0 and rng.random() < p:
        return 1 - bit
    return bit
