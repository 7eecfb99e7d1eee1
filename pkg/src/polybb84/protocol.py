"""Alice/Bob state machines and the classical-channel transcript.

The disclosure rule is asymmetric: Bob publishes his measurement bases, Alice
never publishes hers, so only Alice learns which positions were measured in
matching bases. Every message that crosses the classical channel is appended
to a Transcript, which also holds both parties' private data so tests can
audit that nothing secret leaked onto the wire.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .qsim import (
    Basis,
    NoiseSpec,
    QubitState,
    Rng,
    apply_depolarizing,
    apply_pauli_noise,
    bases_to_string,
    encode,
    flip_measurement,
    measure,
)

TRANSCRIPT_SCHEMA = "qkd-transcript/v1"

# Classical-channel record kinds. The set is closed so the leakage audit can
# enumerate everything an eavesdropper would see.
BOB_BASES = "bob_bases"
SHUFFLE_COMMAND = "shuffle_command"
Y_SEQUENCE = "y_sequence"
COEFFICIENT_COMMITMENT = "coefficient_commitment"
REMOVAL_ANNOUNCEMENT = "removal_announcement"
REMOVED_VALUES_EXCHANGE = "removed_values_exchange"
DECISION = "decision"


@dataclass(frozen=True)
class PartySecrets:
    """One party's private bit and basis sequences (equal length)."""

    bits: tuple[int, ...]
    bases: tuple[Basis, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != len(self.bases):
            raise ValueError("bits and bases must have equal length")


@dataclass(frozen=True)
class RawKey:
    """Bits at basis-agreement positions, before any verification."""

    bits: tuple[int, ...]
    indices: tuple[int, ...]


def random_secrets(count: int, rng: Rng) -> PartySecrets:
    """Uniform random bits and bases for ``count`` qubits."""
    if count < 1:
        raise ValueError("count must be >= 1")
    bits = tuple(int(b) for b in rng.integers(0, 2, size=count))
    bases = tuple(Basis.Z if d == 0 else Basis.X for d in rng.integers(0, 2, size=count))
    return PartySecrets(bits, bases)


def prepare_states(secrets: PartySecrets) -> list[QubitState]:
    return [encode(b, basis) for b, basis in zip(secrets.bits, secrets.bases)]


def alice_prepare(n: int, rng: Rng) -> tuple[PartySecrets, list[QubitState]]:
    """Draw 4n random bits/bases and encode them (4N qubits for ~N key bits)."""
    secrets = random_secrets(4 * n, rng)
    return secrets, prepare_states(secrets)


def measure_with_bases(
    states: Sequence[QubitState],
    bases: Sequence[Basis],
    noise: NoiseSpec,
    rng: Rng,
) -> list[int]:
    """Measure each qubit in the given basis with channel noise applied.

    Fixed per-qubit order: depolarizing (targeted indices only), then Pauli
    noise, then the projective measurement, then the readout flip.
    """
    if len(states) != len(bases):
        raise ValueError("states and bases must have equal length")
    bits = []
    for i, (state, basis) in enumerate(zip(states, bases)):
        if noise.depol_p > 0.0 and i in noise.depol_targets:
            state = apply_depolarizing(state, noise.depol_p, rng)
        state = apply_pauli_noise(state, noise.pauli_p, rng)
        bit = measure(state, basis, rng)
        bits.append(flip_measurement(bit, noise.meas_flip_p, rng))
    return bits


def bob_measure(
    states: Sequence[QubitState], noise: NoiseSpec, rng: Rng
) -> tuple[tuple[Basis, ...], list[int]]:
    """Bob draws a random basis per qubit and measures under channel noise."""
    bases = tuple(Basis.Z if d == 0 else Basis.X for d in rng.integers(0, 2, size=len(states)))
    return bases, measure_with_bases(states, bases, noise, rng)


def sift(alice_bases: Sequence[Basis], bob_bases: Sequence[Basis]) -> list[int]:
    """Ascending indices where the bases agree.

    Computed by Alice alone from Bob's published bases; never transmitted.
    """
    if len(alice_bases) != len(bob_bases):
        raise ValueError("basis sequences must have equal length")
    return [i for i, (a, b) in enumerate(zip(alice_bases, bob_bases)) if a is b]


def raw_key(
    secrets: PartySecrets, bob_bits: Sequence[int], common_idx: Sequence[int]
) -> tuple[RawKey, RawKey]:
    """Both parties' bits restricted to the basis-agreement positions."""
    idx = tuple(common_idx)
    alice = RawKey(tuple(secrets.bits[i] for i in idx), idx)
    bob = RawKey(tuple(int(bob_bits[i]) for i in idx), idx)
    return alice, bob


@dataclass(frozen=True)
class Message:
    seq: int
    sender: str
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "sender": self.sender, "kind": self.kind, "payload": self.payload}


class Transcript:
    """Ordered log of every classical-channel record plus private state.

    ``public_document`` models exactly what an eavesdropper observes. The
    private fields (Alice's secrets, Bob's bits, Alice's sift result, row
    classes, polynomial coefficients) are retained only so the leakage audit
    and golden-file tests can cross-check the public side.
    """

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.messages: list[Message] = []
        self.alice: PartySecrets | None = None
        self.bob_bits: tuple[int, ...] | None = None
        self.common_idx: tuple[int, ...] | None = None
        self.row_classes: tuple[str, ...] | None = None
        self.alice_key: tuple[int, ...] | None = None
        self.secret_polys: set[tuple[int, ...]] = set()

    def add(self, sender: str, kind: str, payload: dict) -> Message:
        if sender not in ("alice", "bob", "both"):
            raise ValueError(f"unknown sender {sender!r}")
        msg = Message(len(self.messages), sender, kind, payload)
        self.messages.append(msg)
        return msg

    def set_private(
        self,
        *,
        alice: PartySecrets | None = None,
        bob_bits: Iterable[int] | None = None,
        common_idx: Iterable[int] | None = None,
        row_classes: Iterable[str] | None = None,
        alice_key: Iterable[int] | None = None,
    ) -> None:
        if alice is not None:
            self.alice = alice
        if bob_bits is not None:
            self.bob_bits = tuple(int(b) for b in bob_bits)
        if common_idx is not None:
            self.common_idx = tuple(int(i) for i in common_idx)
        if row_classes is not None:
            self.row_classes = tuple(row_classes)
        if alice_key is not None:
            self.alice_key = tuple(int(b) for b in alice_key)

    def record_secret_poly(self, coeffs: Sequence[int]) -> None:
        """Remember a coefficient list that must never appear on the wire."""
        self.secret_polys.add(tuple(int(c) for c in coeffs))

    def public_document(self) -> dict:
        return {
            "schema": TRANSCRIPT_SCHEMA,
            "n_qubits": self.n_qubits,
            "messages": [m.to_dict() for m in self.messages],
        }

    def document(self) -> dict:
        doc = self.public_document()
        private: dict = {}
        if self.alice is not None:
            private["alice_bits"] = "".join(str(b) for b in self.alice.bits)
            private["alice_bases"] = bases_to_string(self.alice.bases)
        if self.bob_bits is not None:
            private["bob_bits"] = "".join(str(b) for b in self.bob_bits)
        if self.common_idx is not None:
            private["common_idx"] = list(self.common_idx)
        if self.row_classes is not None:
            private["row_classes"] = list(self.row_classes)
        if self.alice_key is not None:
            private["alice_key"] = "".join(str(b) for b in self.alice_key)
        doc["private"] = private
        return doc

    def to_json(self, public_only: bool = False, indent: int | None = 2) -> str:
        doc = self.public_document() if public_only else self.document()
        return json.dumps(doc, indent=indent)
