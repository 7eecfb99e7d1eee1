"""Prime-field Lagrange interpolation and the row verification loop.

Both parties interpolate a polynomial per row: their own chunk decimals are
the x coordinates, Alice's published random sequence the y coordinates. Equal
chunk values give equal polynomials, so comparing coefficient digests reveals
one equality bit per attempt and nothing else. Mismatched rows are repaired by
removing chunk subsets in a deterministic order until the kept points agree,
which keeps the two sides synchronized without extra coordination messages.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .qsim import Rng
from .setgen import ChunkRow, RowClass

DEFAULT_PRIME = 2**31 - 1

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DuplicateX(ValueError):
    """Two interpolation points share an x coordinate."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def poly_eval(coeffs: Sequence[int], x: int, q: int) -> int:
    """Evaluate a polynomial (ascending coefficients) at x, mod q."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def poly_trim(coeffs: Sequence[int]) -> list[int]:
    """Canonical form: drop trailing zeros; the zero polynomial is []."""
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def interpolate(points: Sequence[tuple[int, int]], q: int) -> list[int]:
    """Unique minimal-degree polynomial through the points, coefficients mod q.

    Lagrange form: degree <= len(points) - 1, returned in canonical trimmed
    ascending order. Raises DuplicateX when two x values coincide.
    """
    if not points:
        raise ValueError("need at least one point")
    xs = [int(x) % q for x, _ in points]
    ys = [int(y) % q for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateX(f"x values must be pairwise distinct, got {xs}")
    k = len(points)
    acc = [0] * k
    for i in range(k):
        # Basis numerator prod_{j != i} (x - x_j), ascending coefficients.
        num = [1]
        denom = 1
        for j in range(k):
            if j == i:
                continue
            shifted = [0] * (len(num) + 1)
            neg = (-xs[j]) % q
            for d, a in enumerate(num):
                shifted[d] = (shifted[d] + a * neg) % q
                shifted[d + 1] = (shifted[d + 1] + a) % q
            num = shifted
            denom = denom * ((xs[i] - xs[j]) % q) % q
        scale = ys[i] * pow(denom, q - 2, q) % q
        for d, a in enumerate(num):
            acc[d] = (acc[d] + a * scale) % q
    return poly_trim(acc)


def commit(coeffs: Sequence[int], q: int) -> str:
    """Collision-resistant digest of (q, canonical coefficients).

    Encoding is fixed (see the transcript schema) so digests are bit-exact
    across implementations: sha256 over "pc1|q=<q>|c=<c0>,<c1>,...".
    """
    canonical = poly_trim(coeffs)
    data = "pc1|q=%d|c=%s" % (q, ",".join(str(c) for c in canonical))
    return hashlib.sha256(data.encode("ascii")).hexdigest()


def gen_y(s: int, q: int, rng: Rng) -> list[int]:
    """Fresh row ordinates: s values uniform in [0, q), sent in the clear."""
    if s < 1:
        raise ValueError("s must be >= 1")
    return [int(v) for v in rng.integers(0, q, size=s)]


def hamming(a: int, b: int) -> int:
    return bin(a ^ b).count("1")


class RowStatus(Enum):
    MATCHED = "matched"
    CONDEMNED = "condemned"
    UNVERIFIABLE = "unverifiable"
    DROPPED = "dropped"


@dataclass(frozen=True)
class RemovedChunk:
    index: int
    alice_value: int
    bob_value: int


@dataclass(frozen=True)
class RowVerdict:
    """Outcome of verifying one row.

    ``bit_errors`` is the summed Hamming distance of the removed chunk pairs
    for matched rows, and the full row width for condemned, unverifiable and
    dropped rows (every bit is lost either way).
    """

    status: RowStatus
    removed: tuple[RemovedChunk, ...]
    bit_errors: int
    attempts: int
    row_bits: int

    @property
    def matched(self) -> bool:
        return self.status is RowStatus.MATCHED


class Decision(Enum):
    CONTINUE = "continue"
    RESTART = "restart"


AttemptHook = Callable[[tuple[int, ...], list[int], list[int], str, str], None]


def verify_row(
    alice_row: ChunkRow,
    alice_y: Sequence[int],
    bob_row: ChunkRow,
    q: int,
    max_remove: int | None = None,
    on_attempt: AttemptHook | None = None,
) -> RowVerdict:
    """Find the smallest chunk subset whose removal reconciles the row.

    Subsets are enumerated by size then lexicographically, so both parties
    walk the same sequence with no coordination beyond one digest comparison
    per attempt. After a match the removed values are exchanged and scored by
    Hamming distance; a row that never matches is condemned whole. Bob-side
    duplicate decimals (possible after channel errors) make the row
    unverifiable without any attempt.
    """
    s = alice_row.s
    n = alice_row.n
    if bob_row.s != s or bob_row.n != n:
        raise ValueError("row shapes differ")
    if len(alice_y) != s:
        raise ValueError("alice_y length must equal the chunk count")
    m = n * s
    if max_remove is None:
        max_remove = max(0, s - 2)
    if not 0 <= max_remove <= max(0, s - 2):
        raise ValueError(f"max_remove must be in [0, {max(0, s - 2)}]")

    xa = alice_row.decimals
    xb = bob_row.decimals
    if len(set(xb)) != s:
        return RowVerdict(RowStatus.UNVERIFIABLE, (), m, 0, m)

    ys = [int(y) for y in alice_y]
    attempts = 0
    for j in range(max_remove + 1):
        for subset in combinations(range(s), j):
            removed_set = set(subset)
            kept = [i for i in range(s) if i not in removed_set]
            poly_a = interpolate([(xa[i], ys[i]) for i in kept], q)
            poly_b = interpolate([(xb[i], ys[i]) for i in kept], q)
            digest_a = commit(poly_a, q)
            digest_b = commit(poly_b, q)
            attempts += 1
            if on_attempt is not None:
                on_attempt(subset, poly_a, poly_b, digest_a, digest_b)
            if digest_a == digest_b:
                removed = tuple(RemovedChunk(i, xa[i], xb[i]) for i in subset)
                errors = sum(hamming(rc.alice_value, rc.bob_value) for rc in removed)
                return RowVerdict(RowStatus.MATCHED, removed, errors, attempts, m)
    return RowVerdict(RowStatus.CONDEMNED, (), m, attempts, m)


def epsilon(
    per_row: Sequence[RowVerdict], row_classes: Sequence[RowClass], c: int
) -> Fraction:
    """Average bit error rate over common-basis rows, exact rational.

    ``c`` is the number of common-basis bits that entered verification (row
    width times the number of verdicts that actually ran: matched or
    condemned). Dropped and unverifiable rows are excluded from both sides of
    the ratio.
    """
    if c <= 0:
        raise ValueError("no common-basis key material to average over")
    total = sum(
        v.bit_errors
        for v, cls in zip(per_row, row_classes, strict=True)
        if cls is RowClass.COMMON and v.status in (RowStatus.MATCHED, RowStatus.CONDEMNED)
    )
    return Fraction(total, c)


def decide(eps: Fraction | float, tau: Fraction | float) -> Decision:
    """Continue only when the error rate is strictly below the tolerance."""
    return Decision.CONTINUE if eps < tau else Decision.RESTART


def flag_suspicious_rows(
    per_row: Sequence[RowVerdict],
    row_classes: Sequence[RowClass],
    threshold: Fraction | float,
) -> set[int]:
    """Common rows whose per-row error rate exceeds the threshold.

    Flagged rows are cut from the final key even when the average rate passes:
    a localized error burst looks like targeted interference rather than
    device noise. Condemned and unverifiable rows count at full row weight;
    dropped rows carry no channel evidence and are never flagged.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    flagged = set()
    for r, (v, cls) in enumerate(zip(per_row, row_classes, strict=True)):
        if (
            cls is RowClass.COMMON
            and v.status is not RowStatus.DROPPED
            and Fraction(v.bit_errors, v.row_bits) > threshold
        ):
            flagged.add(r)
    return flagged


@dataclass(frozen=True)
class ReconSummary:
    """One verification pass: per-row verdicts and the resulting decision."""

    epsilon: Fraction
    tau: Fraction
    c: int
    per_row: tuple[RowVerdict, ...]
    decision: Decision
    flagged: frozenset[int]
