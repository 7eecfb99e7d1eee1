"""Experiment harness: configuration, the end-to-end trial runner, and the
Monte Carlo sweeps over eavesdropping strength and channel noise.

A trial is a pure function of (config, seed): prepare, optional intercept,
measure, sift, arrange into the verification matrix, reconcile row by row,
then decide against the tolerance. Sweeps derive one independent seed per
trial with a documented splitting rule, so execution order never matters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import sqrt
from typing import Sequence

from . import protocol
from .adversary import EveReport, EveSpec, intercept_resend
from .emit import Table
from .polyverify import (
    DEFAULT_PRIME,
    Decision,
    ReconSummary,
    RowStatus,
    RowVerdict,
    decide,
    epsilon,
    flag_suspicious_rows,
    gen_y,
    is_prime,
    verify_row,
)
from .protocol import PartySecrets, Transcript, bases_to_string
from .qsim import Basis, NoiseSpec, bases_from_string, derive_seed, make_rng
from .setgen import (
    ConfigError,
    DegenerateMatrix,
    KeyMatrix,
    RowClass,
    arrange_until_distinct,
    build_from_shuffle,
    rebuild_after_reconciliation,
    try_chunk_rows,
)

# Domain tags for the seed-splitting rule: (master, tag, point, trial).
_DOMAIN_RUN = 0
_DOMAIN_ALPHA = 1
_DOMAIN_NOISE = 2
_DOMAIN_DEPOL = 3

DEFAULT_ALPHAS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.66)
DEFAULT_NOISE_PROBS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
NOISE_KINDS = ("pauli", "depolarizing", "measurement")


@dataclass(frozen=True)
class FixedInputs:
    """Injected bits/bases replacing the random draws (demo and noise runs)."""

    alice_bits: tuple[int, ...]
    alice_bases: tuple[Basis, ...]
    bob_bases: tuple[Basis, ...] | None = None


# The 7-qubit demonstration instance used by the noise sweeps: its common
# positions are [1, 2, 4, 5] and the noiseless shared key is 1011.
SEVEN_QUBIT_DEMO = FixedInputs(
    alice_bits=(1, 1, 0, 0, 1, 1, 0),
    alice_bases=bases_from_string("ZXZZZXX"),
    bob_bases=bases_from_string("XXZXZXZ"),
)


@dataclass(frozen=True)
class ExperimentConfig:
    """All knobs for one experiment; validated on construction."""

    n_qubits: int = 180
    m: int = 12
    chunk_bits: int = 3
    q: int = DEFAULT_PRIME
    tau: Fraction = Fraction(1, 5)
    suspicious_threshold: Fraction = Fraction(1, 4)
    eve: EveSpec = field(default_factory=EveSpec.off)
    noise: NoiseSpec = field(default_factory=NoiseSpec.none)
    trials: int = 100
    shots: int = 1024
    seed: int = 0
    second_pass: bool = False

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ConfigError("n_qubits must be >= 1")
        if self.m < 2:
            raise ConfigError("m must be >= 2")
        if self.chunk_bits < 1 or self.m % self.chunk_bits != 0:
            raise ConfigError(
                f"chunk_bits ({self.chunk_bits}) must divide the row width ({self.m})"
            )
        if not is_prime(self.q):
            raise ConfigError(f"q must be prime, got {self.q}")
        if self.q <= 2**self.chunk_bits:
            raise ConfigError(f"q must exceed 2^chunk_bits = {2 ** self.chunk_bits}")
        if self.s > 2**self.chunk_bits:
            raise ConfigError(
                f"{self.s} chunks per row cannot be pairwise distinct at {self.chunk_bits} bits"
            )
        if not 0 < self.tau <= 1:
            raise ConfigError("tau must be in (0, 1]")
        if not 0 < self.suspicious_threshold <= 1:
            raise ConfigError("suspicious_threshold must be in (0, 1]")
        if self.trials < 1 or self.shots < 1:
            raise ConfigError("trials and shots must be >= 1")
        for t in self.noise.depol_targets:
            if not 0 <= t < self.n_qubits:
                raise ConfigError(f"depol target {t} outside circuit range")

    @property
    def s(self) -> int:
        return self.m // self.chunk_bits


@dataclass(frozen=True)
class TrialResult:
    """One protocol run's summary, JSON-serializable for diagnostics."""

    seed: int
    sifted_count: int
    raw_error_count: int
    epsilon: Fraction
    pct_error: float
    decision: Decision
    success: bool
    verified: bool
    bits_changed: int
    final_key_bits: tuple[int, ...]
    alice_key_bits: tuple[int, ...]
    removed_chunks: int
    condemned_rows: int
    unverifiable_rows: int
    dropped_rows: int
    flagged_rows: tuple[int, ...]
    second_pass_ran: bool
    eve: EveReport | None

    @property
    def raw_error_rate(self) -> float:
        return self.raw_error_count / self.sifted_count if self.sifted_count else 0.0

    def to_dict(self) -> dict:
        return {
            "schema": "trial/v1",
            "seed": self.seed,
            "sifted_count": self.sifted_count,
            "raw_error_count": self.raw_error_count,
            "epsilon": str(self.epsilon),
            "pct_error": round(self.pct_error, 6),
            "decision": self.decision.value,
            "success": self.success,
            "verified": self.verified,
            "bits_changed": self.bits_changed,
            "final_key_bits": "".join(str(b) for b in self.final_key_bits),
            "alice_key_bits": "".join(str(b) for b in self.alice_key_bits),
            "removed_chunks": self.removed_chunks,
            "condemned_rows": self.condemned_rows,
            "unverifiable_rows": self.unverifiable_rows,
            "dropped_rows": self.dropped_rows,
            "flagged_rows": list(self.flagged_rows),
            "second_pass_ran": self.second_pass_ran,
            "eve": self.eve.to_dict() if self.eve is not None else None,
        }


def _kept_row_bits(matrix: KeyMatrix, r: int, verdict: RowVerdict, chunk_bits: int) -> list[int]:
    """A row's surviving bits: everything outside the removed chunks."""
    removed = {rc.index for rc in verdict.removed}
    row = matrix.entries[r]
    s = len(row) // chunk_bits
    kept: list[int] = []
    for j in range(s):
        if j not in removed:
            kept.extend(row[j * chunk_bits : (j + 1) * chunk_bits])
    return kept


def _verify_matrix(
    config: ExperimentConfig,
    alice_chunks,
    bob_chunks,
    dropped: set[int],
    bob_bad: set[int],
    n_rows: int,
    row_width: int,
    rng,
    transcript: Transcript | None,
) -> list[RowVerdict]:
    """Run the per-row verification loop, logging the channel records."""
    s = row_width // config.chunk_bits
    verdicts: list[RowVerdict] = []
    for r in range(n_rows):
        if r in dropped:
            verdicts.append(RowVerdict(RowStatus.DROPPED, (), row_width, 0, row_width))
            if transcript is not None:
                transcript.add(
                    "alice",
                    protocol.REMOVAL_ANNOUNCEMENT,
                    {"row": r, "status": "dropped", "subset": None, "attempts": 0},
                )
            continue
        if r in bob_bad:
            verdicts.append(RowVerdict(RowStatus.UNVERIFIABLE, (), row_width, 0, row_width))
            if transcript is not None:
                transcript.add(
                    "bob",
                    protocol.REMOVAL_ANNOUNCEMENT,
                    {"row": r, "status": "unverifiable", "subset": None, "attempts": 0},
                )
            continue
        y = gen_y(s, config.q, rng)
        if transcript is not None:
            transcript.add("alice", protocol.Y_SEQUENCE, {"row": r, "values": y})

            def on_attempt(subset, poly_a, poly_b, digest_a, digest_b, _row=r):
                transcript.add(
                    "alice",
                    protocol.COEFFICIENT_COMMITMENT,
                    {"row": _row, "subset": list(subset), "digest": digest_a},
                )
                transcript.add(
                    "bob",
                    protocol.COEFFICIENT_COMMITMENT,
                    {"row": _row, "subset": list(subset), "digest": digest_b},
                )
                # Constant fits through a single kept point reproduce Alice's
                # own public ordinate; everything longer is secret.
                if len(poly_a) > 1 or s > 1:
                    transcript.record_secret_poly(poly_a)
                    transcript.record_secret_poly(poly_b)

        else:
            on_attempt = None
        verdict = verify_row(alice_chunks[r], y, bob_chunks[r], config.q, on_attempt=on_attempt)
        verdicts.append(verdict)
        if transcript is not None:
            transcript.add(
                "alice",
                protocol.REMOVAL_ANNOUNCEMENT,
                {
                    "row": r,
                    "status": verdict.status.value,
                    "subset": [rc.index for rc in verdict.removed] if verdict.matched else None,
                    "attempts": verdict.attempts,
                },
            )
            for rc in verdict.removed:
                transcript.add(
                    "both",
                    protocol.REMOVED_VALUES_EXCHANGE,
                    {
                        "row": r,
                        "index": rc.index,
                        "alice_value": rc.alice_value,
                        "bob_value": rc.bob_value,
                    },
                )
    return verdicts


def run_trial(
    config: ExperimentConfig,
    seed: int,
    transcript: Transcript | None = None,
    fixed: FixedInputs | None = None,
) -> TrialResult:
    """Execute one full protocol run, fully determined by (config, seed).

    When the sifted classes are too small to fill the verification matrix
    (for example the 7-qubit demo), the verification stage is skipped: the
    raw keys become the result with a zero error rate and ``verified`` False.
    A Restart decision empties both final keys; it is a result, not an error.
    """
    rng = make_rng(seed)
    if fixed is not None:
        secrets = PartySecrets(tuple(fixed.alice_bits), tuple(fixed.alice_bases))
        n_qubits = len(secrets.bits)
    else:
        n_qubits = config.n_qubits
        secrets = protocol.random_secrets(n_qubits, rng)
    states = protocol.prepare_states(secrets)

    eve_report = None
    if config.eve.enabled and config.eve.alpha > 0:
        states, eve_report = intercept_resend(states, config.eve.alpha, rng)

    if fixed is not None and fixed.bob_bases is not None:
        bob_bases = tuple(fixed.bob_bases)
        bob_bits = protocol.measure_with_bases(states, bob_bases, config.noise, rng)
    else:
        bob_bases, bob_bits = protocol.bob_measure(states, config.noise, rng)
    if transcript is not None:
        transcript.n_qubits = n_qubits
        transcript.add("bob", protocol.BOB_BASES, {"bases": bases_to_string(bob_bases)})

    common = protocol.sift(secrets.bases, bob_bases)
    alice_raw, bob_raw = protocol.raw_key(secrets, bob_bits, common)
    raw_errors = sum(a != b for a, b in zip(alice_raw.bits, bob_raw.bits))
    success = alice_raw.bits == bob_raw.bits
    bits_changed = len(eve_report.touched) if eve_report is not None else 0

    m = config.m
    feasible = len(common) >= m and (n_qubits - len(common)) >= m

    counters = dict(removed=0, condemned=0, unverifiable=0, dropped=0)
    flagged_rows: tuple[int, ...] = ()
    second_pass_ran = False

    if not feasible:
        eps = Fraction(0)
        decision = Decision.CONTINUE
        alice_key: tuple[int, ...] = alice_raw.bits
        bob_key: tuple[int, ...] = bob_raw.bits
        verified = False
        if transcript is not None:
            transcript.add(
                "alice",
                protocol.DECISION,
                {"decision": decision.value, "epsilon": str(eps), "key_rows": [], "pass": 1},
            )
    else:
        verified = True
        arranged = arrange_until_distinct(
            list(secrets.bits), common, m, config.chunk_bits, rng
        )
        matrix, shuffle = arranged.matrix, arranged.shuffle
        if transcript is not None:
            transcript.add(
                "alice",
                protocol.SHUFFLE_COMMAND,
                {
                    "perm": [int(i) for i in shuffle],
                    "discarded": [int(i) for i in matrix.discarded],
                    "rows": matrix.n_rows,
                    "cols": m,
                    "chunk_bits": config.chunk_bits,
                    "chunks_per_row": config.s,
                },
            )
        bob_matrix = build_from_shuffle(list(bob_bits), shuffle, matrix.n_rows, m)
        bob_chunks, bob_bad = try_chunk_rows(bob_matrix, config.chunk_bits)

        verdicts = _verify_matrix(
            config,
            arranged.chunks,
            bob_chunks,
            set(arranged.dropped),
            set(bob_bad) - set(arranged.dropped),
            matrix.n_rows,
            m,
            rng,
            transcript,
        )
        classes = matrix.row_class
        assert classes is not None
        c = m * sum(
            1
            for v, cls in zip(verdicts, classes)
            if cls is RowClass.COMMON and v.status in (RowStatus.MATCHED, RowStatus.CONDEMNED)
        )
        if c == 0:
            # Every common row was dropped or unverifiable: no key material.
            eps = Fraction(1)
            decision = Decision.RESTART
        else:
            eps = epsilon(verdicts, classes, c)
            decision = decide(eps, config.tau)
        flagged = flag_suspicious_rows(verdicts, classes, config.suspicious_threshold)
        flagged_rows = tuple(sorted(flagged))

        counters["removed"] = sum(len(v.removed) for v in verdicts)
        counters["condemned"] = sum(v.status is RowStatus.CONDEMNED for v in verdicts)
        counters["unverifiable"] = sum(v.status is RowStatus.UNVERIFIABLE for v in verdicts)
        counters["dropped"] = sum(v.status is RowStatus.DROPPED for v in verdicts)

        key_rows = [
            r
            for r in range(matrix.n_rows)
            if classes[r] is RowClass.COMMON
            and verdicts[r].status is RowStatus.MATCHED
            and r not in flagged
        ]
        alice_key = tuple(
            b
            for r in key_rows
            for b in _kept_row_bits(matrix, r, verdicts[r], config.chunk_bits)
        )
        bob_key = tuple(
            b
            for r in key_rows
            for b in _kept_row_bits(bob_matrix, r, verdicts[r], config.chunk_bits)
        )
        if transcript is not None:
            transcript.set_private(row_classes=[cls.value for cls in classes])
            transcript.add(
                "alice",
                protocol.DECISION,
                {
                    "decision": decision.value,
                    "epsilon": str(eps),
                    "key_rows": key_rows,
                    "flagged_rows": list(flagged_rows),
                    "pass": 1,
                },
            )

        if decision is Decision.CONTINUE and config.second_pass:
            survivors = [
                (
                    _kept_row_bits(matrix, r, verdicts[r], config.chunk_bits),
                    classes[r],
                )
                for r in range(matrix.n_rows)
                if verdicts[r].status is RowStatus.MATCHED and r not in flagged
            ]
            bob_survivors = [
                _kept_row_bits(bob_matrix, r, verdicts[r], config.chunk_bits)
                for r in range(matrix.n_rows)
                if verdicts[r].status is RowStatus.MATCHED and r not in flagged
            ]
            alice_key, bob_key, second_pass_ran = _second_pass(
                config, survivors, bob_survivors, rng, transcript, counters
            )

    if decision is Decision.RESTART:
        alice_key = ()
        bob_key = ()

    if transcript is not None:
        transcript.set_private(
            alice=secrets,
            bob_bits=bob_bits,
            common_idx=common,
            alice_key=alice_key,
        )

    return TrialResult(
        seed=seed,
        sifted_count=len(common),
        raw_error_count=int(raw_errors),
        epsilon=eps,
        pct_error=100.0 * float(eps),
        decision=decision,
        success=bool(success),
        verified=verified,
        bits_changed=bits_changed,
        final_key_bits=tuple(bob_key),
        alice_key_bits=tuple(alice_key),
        removed_chunks=counters["removed"],
        condemned_rows=counters["condemned"],
        unverifiable_rows=counters["unverifiable"],
        dropped_rows=counters["dropped"],
        flagged_rows=flagged_rows,
        second_pass_ran=second_pass_ran,
        eve=eve_report,
    )


def _second_pass(
    config: ExperimentConfig,
    survivors: list[tuple[list[int], RowClass]],
    bob_survivors: list[list[int]],
    rng,
    transcript: Transcript | None,
    counters: dict,
) -> tuple[tuple[int, ...], tuple[int, ...], bool]:
    """Optional re-verification of the surviving bits on a rebuilt matrix."""
    try:
        arranged, new_m = rebuild_after_reconciliation(
            survivors, config.m, config.chunk_bits, rng
        )
    except DegenerateMatrix:
        alice_key = tuple(b for bits, cls in survivors if cls is RowClass.COMMON for b in bits)
        bob_key = tuple(
            b
            for bits, (_, cls) in zip(bob_survivors, survivors)
            if cls is RowClass.COMMON
            for b in bits
        )
        return alice_key, bob_key, False

    matrix, shuffle = arranged.matrix, arranged.shuffle
    if transcript is not None:
        transcript.add(
            "alice",
            protocol.SHUFFLE_COMMAND,
            {
                "perm": [int(i) for i in shuffle],
                "discarded": [int(i) for i in matrix.discarded],
                "rows": matrix.n_rows,
                "cols": new_m,
                "chunk_bits": config.chunk_bits,
                "chunks_per_row": new_m // config.chunk_bits,
                "pass": 2,
            },
        )
    flat_bob = [b for bits in bob_survivors for b in bits]
    bob_matrix = build_from_shuffle(flat_bob, shuffle, matrix.n_rows, new_m)
    bob_chunks, bob_bad = try_chunk_rows(bob_matrix, config.chunk_bits)
    cfg2 = replace(config, m=new_m) if new_m != config.m else config
    verdicts = _verify_matrix(
        cfg2,
        arranged.chunks,
        bob_chunks,
        set(arranged.dropped),
        set(bob_bad) - set(arranged.dropped),
        matrix.n_rows,
        new_m,
        rng,
        transcript,
    )
    classes = matrix.row_class
    assert classes is not None
    flagged = flag_suspicious_rows(verdicts, classes, config.suspicious_threshold)
    counters["removed"] += sum(len(v.removed) for v in verdicts)
    counters["condemned"] += sum(v.status is RowStatus.CONDEMNED for v in verdicts)
    counters["unverifiable"] += sum(v.status is RowStatus.UNVERIFIABLE for v in verdicts)
    counters["dropped"] += sum(v.status is RowStatus.DROPPED for v in verdicts)
    key_rows = [
        r
        for r in range(matrix.n_rows)
        if classes[r] is RowClass.COMMON
        and verdicts[r].status is RowStatus.MATCHED
        and r not in flagged
    ]
    alice_key = tuple(
        b for r in key_rows for b in _kept_row_bits(matrix, r, verdicts[r], config.chunk_bits)
    )
    bob_key = tuple(
        b for r in key_rows for b in _kept_row_bits(bob_matrix, r, verdicts[r], config.chunk_bits)
    )
    if transcript is not None:
        transcript.add(
            "alice",
            protocol.DECISION,
            {
                "decision": Decision.CONTINUE.value,
                "epsilon": None,
                "key_rows": key_rows,
                "flagged_rows": sorted(flagged),
                "pass": 2,
            },
        )
    return alice_key, bob_key, True


def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if n <= 0:
        return 0.0, 1.0
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def sweep_alpha(
    config: ExperimentConfig, alphas: Sequence[float] = DEFAULT_ALPHAS
) -> Table:
    """Eavesdropping-strength sweep: config.trials independent runs per alpha.

    ``mean_pct_error`` is the sifted-bit disagreement rate pooled over all
    trials (in percent), with its Wilson 95% interval; ``restart_fraction``
    reflects the tolerance decision made on the reconciled error rate.
    """
    table = Table(
        columns=(
            "alpha",
            "mean_bits_changed",
            "mean_pct_error",
            "restart_fraction",
            "ci_low",
            "ci_high",
        ),
        meta={
            "title": "Sifted-bit error vs eavesdropping strength",
            "x": "alpha",
            "ys": ["mean_pct_error"],
            "xlabel": "alpha (strength of eavesdropping)",
            "ylabel": "% error",
        },
    )
    for ai, alpha in enumerate(alphas):
        cfg = replace(config, eve=EveSpec(alpha=alpha, enabled=True))
        touched_total = 0
        error_bits = 0
        sifted_bits = 0
        restarts = 0
        for t in range(config.trials):
            res = run_trial(cfg, derive_seed(config.seed, _DOMAIN_ALPHA, ai, t))
            touched_total += res.bits_changed
            error_bits += res.raw_error_count
            sifted_bits += res.sifted_count
            restarts += res.decision is Decision.RESTART
        lo, hi = wilson_interval(error_bits, sifted_bits)
        table.rows.append(
            (
                float(alpha),
                touched_total / config.trials,
                100.0 * error_bits / sifted_bits if sifted_bits else 0.0,
                restarts / config.trials,
                100.0 * lo,
                100.0 * hi,
            )
        )
    return table


def _noise_for(kind: str, p: float, targets: frozenset[int]) -> NoiseSpec:
    if kind == "pauli":
        return NoiseSpec(pauli_p=p)
    if kind == "measurement":
        return NoiseSpec(meas_flip_p=p)
    if kind == "depolarizing":
        return NoiseSpec(depol_p=p, depol_targets=targets)
    raise ConfigError(f"unknown noise kind {kind!r}; expected one of {NOISE_KINDS}")


def _success_probability(
    fixed: FixedInputs, noise: NoiseSpec, shots: int, rng
) -> tuple[int, int]:
    """Shots where every common-position bit matches the sender's bit."""
    states = protocol.prepare_states(
        PartySecrets(tuple(fixed.alice_bits), tuple(fixed.alice_bases))
    )
    assert fixed.bob_bases is not None
    common = protocol.sift(fixed.alice_bases, fixed.bob_bases)
    successes = 0
    for _ in range(shots):
        bits = protocol.measure_with_bases(states, fixed.bob_bases, noise, rng)
        if all(bits[i] == fixed.alice_bits[i] for i in common):
            successes += 1
    return successes, shots


def sweep_noise(
    config: ExperimentConfig,
    kinds: Sequence[str] = NOISE_KINDS,
    probs: Sequence[float] = DEFAULT_NOISE_PROBS,
    fixed: FixedInputs = SEVEN_QUBIT_DEMO,
) -> Table:
    """Success probability of the demo circuit's key bits per noise channel.

    Pauli and measurement noise hit every qubit; depolarizing noise targets
    the first common-basis qubit, mirroring the single-qubit comparison plot.
    """
    assert fixed.bob_bases is not None
    common = protocol.sift(fixed.alice_bases, fixed.bob_bases)
    depol_targets = frozenset(common[:1])
    table = Table(
        columns=("kind", "p", "success", "ci_low", "ci_high"),
        meta={
            "title": "Key success probability under channel noise",
            "x": "p",
            "ys": ["success"],
            "xlabel": "noise probability",
            "ylabel": "success probability",
        },
    )
    for ki, kind in enumerate(kinds):
        for pi, p in enumerate(probs):
            rng = make_rng(derive_seed(config.seed, _DOMAIN_NOISE, ki, pi))
            noise = _noise_for(kind, p, depol_targets)
            successes, shots = _success_probability(fixed, noise, config.shots, rng)
            lo, hi = wilson_interval(successes, shots)
            table.rows.append((kind, float(p), successes / shots, lo, hi))
    return table


def sweep_depol_qubits(
    config: ExperimentConfig,
    qubit_counts: Sequence[int] = (1, 2, 3, 4),
    probs: Sequence[float] = DEFAULT_NOISE_PROBS,
    fixed: FixedInputs = SEVEN_QUBIT_DEMO,
) -> Table:
    """Depolarizing noise applied to the first k qubits, for each k."""
    table = Table(
        columns=("k", "p", "success", "ci_low", "ci_high"),
        meta={
            "title": "Key success probability vs depolarized qubit count",
            "x": "p",
            "ys": ["success"],
            "xlabel": "noise probability",
            "ylabel": "success probability",
        },
    )
    for ki, k in enumerate(qubit_counts):
        if not 0 <= k <= len(fixed.alice_bits):
            raise ConfigError(f"qubit count {k} outside the demo circuit")
        for pi, p in enumerate(probs):
            rng = make_rng(derive_seed(config.seed, _DOMAIN_DEPOL, ki, pi))
            noise = NoiseSpec(depol_p=p, depol_targets=frozenset(range(k)))
            successes, shots = _success_probability(fixed, noise, config.shots, rng)
            lo, hi = wilson_interval(successes, shots)
            table.rows.append((int(k), float(p), successes / shots, lo, hi))
    return table


def run_trials(config: ExperimentConfig, trials: int | None = None) -> list[TrialResult]:
    """Independent trials seeded by the documented splitting rule."""
    count = config.trials if trials is None else trials
    return [
        run_trial(config, derive_seed(config.seed, _DOMAIN_RUN, 0, t)) for t in range(count)
    ]


def summarize_reconciliation(
    verdicts: Sequence[RowVerdict],
    row_classes: Sequence[RowClass],
    row_width: int,
    tau: Fraction,
    threshold: Fraction,
) -> ReconSummary:
    """Bundle one pass's verdicts into a summary with the resulting decision."""
    c = row_width * sum(
        1
        for v, cls in zip(verdicts, row_classes)
        if cls is RowClass.COMMON and v.status in (RowStatus.MATCHED, RowStatus.CONDEMNED)
    )
    eps = epsilon(verdicts, row_classes, c) if c else Fraction(1)
    return ReconSummary(
        epsilon=eps,
        tau=tau,
        c=c,
        per_row=tuple(verdicts),
        decision=decide(eps, tau),
        flagged=frozenset(flag_suspicious_rows(verdicts, row_classes, threshold)),
    )
