"""Leakage audit: prove the public channel never carried Alice's secrets.

The scan is two-layered. A structural walk compares every payload value
against the secret needles (Alice's bit and basis sequences, the final key,
every polynomial coefficient list computed during verification). A substring
pass over the serialized public document then catches secrets smuggled inside
longer strings; it only fires on needles long enough to rule out accidental
collisions.
"""

from __future__ import annotations

from typing import Iterator

from .protocol import Transcript
from .qsim import bases_to_string

_MIN_SUBSTRING_NEEDLE = 12


def _walk(value, path: str) -> Iterator[tuple[str, object]]:
    yield path, value
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _walk(v, f"{path}.{k}")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            yield from _walk(v, f"{path}[{i}]")


def leakage_findings(transcript: Transcript) -> list[str]:
    """Scan the public transcript; every returned string is a leak.

    Requires the transcript's private fields to be populated (run_trial does
    this); an empty return means the audit found nothing.
    """
    if transcript.alice is None:
        raise ValueError("transcript has no private data to audit against")

    bits_str = "".join(str(b) for b in transcript.alice.bits)
    bases_str = bases_to_string(transcript.alice.bases)
    key_str = (
        "".join(str(b) for b in transcript.alice_key)
        if transcript.alice_key is not None
        else None
    )

    secret_lists: dict[str, list] = {
        "alice bits": [int(b) for b in transcript.alice.bits],
        "alice bases": list(bases_str),
    }
    if transcript.alice_key:
        secret_lists["alice key"] = [int(b) for b in transcript.alice_key]
    secret_strings: dict[str, str] = {
        "alice bits": bits_str,
        "alice bases": bases_str,
    }
    if key_str:
        secret_strings["alice key"] = key_str
    poly_needles = {tuple(p) for p in transcript.secret_polys}

    findings: list[str] = []
    for msg in transcript.messages:
        for path, value in _walk(msg.payload, f"messages[{msg.seq}].payload"):
            if isinstance(value, str):
                for label, needle in secret_strings.items():
                    if value == needle or (
                        len(needle) >= _MIN_SUBSTRING_NEEDLE and needle in value
                    ):
                        findings.append(f"{label} in {path} ({msg.kind})")
            elif isinstance(value, (list, tuple)):
                plain = list(value)
                for label, needle_list in secret_lists.items():
                    if plain == needle_list:
                        findings.append(f"{label} in {path} ({msg.kind})")
                if tuple(int(v) for v in plain if isinstance(v, int)) in poly_needles and plain:
                    findings.append(f"polynomial coefficients in {path} ({msg.kind})")

    text = transcript.to_json(public_only=True)
    for label, needle in secret_strings.items():
        if len(needle) >= _MIN_SUBSTRING_NEEDLE and needle in text:
            finding = f"{label} in serialized public transcript"
            if finding not in findings:
                findings.append(finding)
    return findings
