"""Intercept-resend eavesdropper tapping the channel before Bob measures.

Eve picks exactly round(alpha * qubits) positions, measures each in a random
basis, and forwards a fresh qubit prepared in her observed state. A wrong
basis guess randomizes the forwarded state, which is what makes her visible
downstream: touched positions where the honest parties' bases agree disagree
in value a quarter of the time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .qsim import Basis, QubitState, Rng, bases_to_string, encode, measure


@dataclass(frozen=True)
class EveSpec:
    """Attack strength: alpha is the fraction of qubits intercepted."""

    alpha: float = 0.0
    enabled: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha!r}")

    @classmethod
    def off(cls) -> "EveSpec":
        return cls()


@dataclass(frozen=True)
class EveReport:
    """What Eve learned: positions touched, her bases and observed bits."""

    touched: tuple[int, ...]
    bases: tuple[Basis, ...]
    bits: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "touched": list(self.touched),
            "bases": bases_to_string(self.bases),
            "bits": "".join(str(b) for b in self.bits),
        }


def touched_count(alpha: float, total: int) -> int:
    """Exact intercept count, rounded half-up (not a per-qubit coin flip)."""
    return int(alpha * total + 0.5)


def intercept_resend(
    states: Sequence[QubitState], alpha: float, rng: Rng
) -> tuple[list[QubitState], EveReport]:
    """Measure-and-resend on a uniform subset of exactly round(alpha*N) qubits.

    Untouched positions pass through as the identical state objects.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha!r}")
    total = len(states)
    k = touched_count(alpha, total)
    out = list(states)
    if k == 0:
        return out, EveReport((), (), ())
    touched = sorted(int(i) for i in rng.choice(total, size=k, replace=False))
    eve_bases = []
    eve_bits = []
    for i in touched:
        basis = Basis.Z if int(rng.integers(2)) == 0 else Basis.X
        bit = measure(out[i], basis, rng)
        out[i] = encode(bit, basis)
        eve_bases.append(basis)
        eve_bits.append(bit)
    return out, EveReport(tuple(touched), tuple(eve_bases), tuple(eve_bits))
