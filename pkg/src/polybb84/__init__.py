"""Seedable simulator of a BB84 variant where the sender never reveals her
bases and erroneous key bits are detected and removed with prime-field
polynomial interpolation."""

from .adversary import EveReport, EveSpec, intercept_resend
from .harness import (
    ExperimentConfig,
    FixedInputs,
    SEVEN_QUBIT_DEMO,
    TrialResult,
    run_trial,
    run_trials,
    sweep_alpha,
    sweep_depol_qubits,
    sweep_noise,
    wilson_interval,
)
from .polyverify import (
    DEFAULT_PRIME,
    Decision,
    RowStatus,
    RowVerdict,
    commit,
    decide,
    epsilon,
    gen_y,
    interpolate,
    verify_row,
)
from .protocol import (
    PartySecrets,
    RawKey,
    Transcript,
    alice_prepare,
    bob_measure,
    measure_with_bases,
    raw_key,
    sift,
)
from .qsim import Basis, NoiseSpec, QubitState, encode, make_rng, measure
from .setgen import ChunkRow, KeyMatrix, RowClass, arrange, chunk_rows

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "ChunkRow",
    "DEFAULT_PRIME",
    "Decision",
    "EveReport",
    "EveSpec",
    "ExperimentConfig",
    "FixedInputs",
    "KeyMatrix",
    "NoiseSpec",
    "PartySecrets",
    "QubitState",
    "RawKey",
    "RowClass",
    "RowStatus",
    "RowVerdict",
    "SEVEN_QUBIT_DEMO",
    "Transcript",
    "TrialResult",
    "alice_prepare",
    "arrange",
    "bob_measure",
    "chunk_rows",
    "measure_with_bases",
    "commit",
    "decide",
    "encode",
    "epsilon",
    "gen_y",
    "intercept_resend",
    "interpolate",
    "make_rng",
    "measure",
    "raw_key",
    "run_trial",
    "run_trials",
    "sift",
    "sweep_alpha",
    "sweep_depol_qubits",
    "sweep_noise",
    "verify_row",
    "wilson_interval",
]
