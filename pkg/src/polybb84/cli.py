"""Command-line front end: single runs, the three sweep experiments, and
transcript inspection. A flat key=value config file can seed any option;
explicit flags win.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from fractions import Fraction

from .adversary import EveSpec
from .emit import Table, emit, emit_trials_json
from .harness import (
    DEFAULT_ALPHAS,
    DEFAULT_NOISE_PROBS,
    NOISE_KINDS,
    ExperimentConfig,
    run_trial,
    run_trials,
    sweep_alpha,
    sweep_depol_qubits,
    sweep_noise,
)
from .protocol import Transcript
from .qsim import NoiseSpec, derive_seed
from .setgen import ConfigError

_CONFIG_KEYS = {
    "seed": int,
    "trials": int,
    "shots": int,
    "qubits": int,
    "m": int,
    "chunk_bits": int,
    "q": int,
    "tau": str,
    "suspicious_threshold": str,
    "alpha": float,
    "noise_kind": str,
    "noise_p": float,
    "second_pass": lambda v: v.lower() in ("1", "true", "yes"),
    "out": str,
    "format": str,
}


def load_config_file(path: str) -> dict:
    """Parse a flat key=value file; '#' starts a comment."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_KEYS[key](value)
    return values


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override it")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--trials", type=int, help="trials per point (default 100)")
    p.add_argument("--qubits", type=int, help="total transmitted qubits (default 180)")
    p.add_argument("--m", type=int, help="matrix row width in bits (default 12)")
    p.add_argument("--chunk-bits", type=int, help="bits per chunk (default 3)")
    p.add_argument("--q", type=int, help="prime field modulus (default 2^31-1)")
    p.add_argument("--tau", help="tolerable error rate, e.g. 0.2")
    p.add_argument("--alpha", type=float, help="eavesdropping strength in [0,1]")
    p.add_argument("--second-pass", action="store_true", default=None,
                   help="re-verify survivors on a rebuilt matrix")
    p.add_argument("--out", help="output path; '-' or omitted means stdout")
    p.add_argument("--format", choices=("csv", "json", "svg"), help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polybb84",
        description="BB84-variant QKD simulator with polynomial key verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run independent protocol trials")
    _add_common_flags(p_run)
    p_run.add_argument("--shots", type=int, help=argparse.SUPPRESS)
    p_run.add_argument("--noise-kind", choices=NOISE_KINDS, help="channel noise type")
    p_run.add_argument("--noise-p", type=float, help="channel noise probability")

    p_alpha = sub.add_parser("sweep-alpha", help="error rate vs eavesdropping strength")
    _add_common_flags(p_alpha)
    p_alpha.add_argument("--alphas", help="comma-separated strengths (default 0..0.66)")

    p_noise = sub.add_parser("sweep-noise", help="key success probability vs noise")
    _add_common_flags(p_noise)
    p_noise.add_argument("--noise-kind", choices=NOISE_KINDS + ("all",), default="all")
    p_noise.add_argument("--probs", help="comma-separated probabilities")
    p_noise.add_argument("--shots", type=int, help="shots per point (default 1024)")

    p_depol = sub.add_parser(
        "sweep-depol", help="success probability vs depolarized qubit count"
    )
    _add_common_flags(p_depol)
    p_depol.add_argument("--qubit-counts", help="comma-separated counts (default 1,2,3,4)")
    p_depol.add_argument("--probs", help="comma-separated probabilities")
    p_depol.add_argument("--shots", type=int, help="shots per point (default 1024)")

    p_show = sub.add_parser("show-transcript", help="print one trial's transcript JSON")
    _add_common_flags(p_show)
    p_show.add_argument("--noise-kind", choices=NOISE_KINDS, help="channel noise type")
    p_show.add_argument("--noise-p", type=float, help="channel noise probability")
    p_show.add_argument("--public", action="store_true",
                        help="only the records visible on the classical channel")
    return parser


def _merged(args: argparse.Namespace) -> dict:
    values = load_config_file(args.config) if getattr(args, "config", None) else {}
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def config_from_values(values: dict) -> ExperimentConfig:
    alpha = values.get("alpha", 0.0)
    noise = NoiseSpec.none()
    kind = values.get("noise_kind")
    if kind and kind != "all" and values.get("noise_p", 0.0) > 0.0:
        p = values["noise_p"]
        if kind == "pauli":
            noise = NoiseSpec(pauli_p=p)
        elif kind == "measurement":
            noise = NoiseSpec(meas_flip_p=p)
        else:
            noise = NoiseSpec(depol_p=p, depol_targets=frozenset({0}))
    kwargs = dict(
        n_qubits=values.get("qubits", 180),
        m=values.get("m", 12),
        chunk_bits=values.get("chunk_bits", 3),
        q=values.get("q", 2**31 - 1),
        eve=EveSpec(alpha=alpha, enabled=alpha > 0.0),
        noise=noise,
        trials=values.get("trials", 100),
        shots=values.get("shots", 1024),
        seed=values.get("seed", 0),
        second_pass=bool(values.get("second_pass", False)),
    )
    if "tau" in values:
        kwargs["tau"] = Fraction(str(values["tau"]))
    if "suspicious_threshold" in values:
        kwargs["suspicious_threshold"] = Fraction(str(values["suspicious_threshold"]))
    return ExperimentConfig(**kwargs)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _run_summary_table(results) -> Table:
    table = Table(
        columns=(
            "seed",
            "sifted_count",
            "raw_error_count",
            "pct_error",
            "decision",
            "bits_changed",
            "final_key_len",
            "success",
        )
    )
    for r in results:
        table.rows.append(
            (
                r.seed,
                r.sifted_count,
                r.raw_error_count,
                r.pct_error,
                r.decision.value,
                r.bits_changed,
                len(r.final_key_bits),
                r.success,
            )
        )
    return table


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        values = _merged(args)
        config = config_from_values(values)
        out = values.get("out")
        fmt = values.get("format", "csv")

        if args.command == "run":
            results = run_trials(config)
            if fmt == "json":
                emit_trials_json(results, out)
            elif fmt == "csv":
                emit(_run_summary_table(results), "csv", out)
            else:
                raise ConfigError("run supports csv or json output")
        elif args.command == "sweep-alpha":
            if "qubits" not in values:  # the strength experiment runs at 45 qubits
                config = replace(config, n_qubits=45)
            alphas = _parse_floats(args.alphas) if args.alphas else DEFAULT_ALPHAS
            emit(sweep_alpha(config, alphas), fmt, out)
        elif args.command == "sweep-noise":
            probs = _parse_floats(args.probs) if args.probs else DEFAULT_NOISE_PROBS
            kinds = NOISE_KINDS if args.noise_kind == "all" else (args.noise_kind,)
            emit(sweep_noise(config, kinds, probs), fmt, out)
        elif args.command == "sweep-depol":
            probs = _parse_floats(args.probs) if args.probs else DEFAULT_NOISE_PROBS
            counts = (
                tuple(int(v) for v in args.qubit_counts.split(","))
                if args.qubit_counts
                else (1, 2, 3, 4)
            )
            emit(sweep_depol_qubits(config, counts, probs), fmt, out)
        elif args.command == "show-transcript":
            transcript = Transcript(config.n_qubits)
            run_trial(config, derive_seed(config.seed, 0, 0, 0), transcript=transcript)
            text = transcript.to_json(public_only=args.public) + "\n"
            if out and out != "-":
                with open(out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
