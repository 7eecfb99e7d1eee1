#!/usr/bin/env python3
"""Noise experiments on the fixed 7-qubit demo circuit: key success
probability under Pauli, depolarizing, and measurement noise, plus the
depolarizing comparison across 1..4 affected qubits.

Writes noise_sweep.{csv,svg} and depol_qubits.{csv,svg} into --out-dir.
"""

import argparse
from pathlib import Path

from polybb84.emit import emit
from polybb84.harness import ExperimentConfig, sweep_depol_qubits, sweep_noise


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shots", type=int, default=1024, help="shots per point")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    config = ExperimentConfig(n_qubits=7, shots=args.shots, seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    noise = sweep_noise(config)
    emit(noise, "csv", str(out / "noise_sweep.csv"))
    emit(noise, "svg", str(out / "noise_sweep.svg"))

    depol = sweep_depol_qubits(config)
    emit(depol, "csv", str(out / "depol_qubits.csv"))
    emit(depol, "svg", str(out / "depol_qubits.svg"))

    for kind in ("pauli", "depolarizing", "measurement"):
        last = [r for r in noise.rows if r[0] == kind][-1]
        print(f"{kind:>13}: success at p=1 -> {last[2]:.3f}")
    for k in (1, 2, 3, 4):
        last = [r for r in depol.rows if r[0] == k][-1]
        print(f"depol k={k}: success at p=1 -> {last[2]:.3f}")
    print(f"wrote 4 files into {out}/")


if __name__ == "__main__":
    main()
