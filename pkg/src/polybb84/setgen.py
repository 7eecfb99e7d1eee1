"""Set generation: arrange a party's bits into a rectangular matrix whose rows
are homogeneous by basis class, then cut each row into fixed-width chunks read
as decimal values.

Row composition is Alice's private knowledge. The published shuffle is a
permutation of all source indices: the first M*m entries fill the matrix in
row-major order, the tail lists the discarded indices, so Bob can build the
identically shaped matrix from his own bits without learning row classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .qsim import Rng


class ConfigError(ValueError):
    """Parameter combination violates the matrix/chunk sizing rules."""


class DegenerateMatrix(ValueError):
    """Too few bits in one basis class to form even a single row."""


class DuplicateChunk(ValueError):
    """A row contains two chunks with the same decimal value."""

    def __init__(self, row: int):
        super().__init__(f"row {row} has duplicate chunk values")
        self.row = row


class RowClass(Enum):
    COMMON = "common"
    DIFFERENT = "different"


@dataclass(frozen=True)
class ChunkRow:
    """One matrix row as s decimal values of n bits each (big-endian)."""

    decimals: tuple[int, ...]
    n: int

    @property
    def s(self) -> int:
        return len(self.decimals)


@dataclass
class KeyMatrix:
    """M x m bit matrix with per-row source indices and (optional) classes.

    ``row_class`` is None on Bob's side: he rebuilds the shape from the
    published shuffle but cannot tell common rows from different rows.
    """

    entries: list[list[int]]
    row_class: list[RowClass] | None
    source: list[list[int]]
    discarded: list[int]

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def row_width(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def arrange(
    bits: Sequence[int], common_idx: Sequence[int], m: int, rng: Rng
) -> tuple[KeyMatrix, list[int]]:
    """Arrange 4N bits into basis-homogeneous rows of width m.

    Each class fills floor(count/m) rows; leftover bits of each class are
    discarded (selection is uniform via the rng). Row order is randomized so
    a row's position in the matrix does not reveal its class.
    """
    if m < 2:
        raise ConfigError(f"row width must be >= 2, got {m}")
    total = len(bits)
    common = sorted(set(common_idx))
    if common and (common[0] < 0 or common[-1] >= total):
        raise ValueError("common_idx out of range")
    common_set = set(common)
    different = [i for i in range(total) if i not in common_set]

    n_common_rows = len(common) // m
    n_diff_rows = len(different) // m
    if n_common_rows == 0 or n_diff_rows == 0:
        raise DegenerateMatrix(
            f"cannot form rows of width {m}: "
            f"{len(common)} common and {len(different)} different bits"
        )

    shuffled_common = [common[k] for k in rng.permutation(len(common))]
    shuffled_diff = [different[k] for k in rng.permutation(len(different))]

    row_sources = [shuffled_common[k * m : (k + 1) * m] for k in range(n_common_rows)]
    row_sources += [shuffled_diff[k * m : (k + 1) * m] for k in range(n_diff_rows)]
    classes = [RowClass.COMMON] * n_common_rows + [RowClass.DIFFERENT] * n_diff_rows

    order = [int(k) for k in rng.permutation(len(row_sources))]
    row_sources = [row_sources[k] for k in order]
    classes = [classes[k] for k in order]

    discarded = shuffled_common[n_common_rows * m :] + shuffled_diff[n_diff_rows * m :]
    shuffle = [i for row in row_sources for i in row] + discarded
    entries = [[int(bits[i]) for i in row] for row in row_sources]
    return KeyMatrix(entries, classes, row_sources, discarded), shuffle


def build_from_shuffle(
    bits: Sequence[int], shuffle: Sequence[int], n_rows: int, m: int
) -> KeyMatrix:
    """Rebuild the published matrix shape from one's own bits (Bob's side)."""
    if n_rows * m > len(shuffle):
        raise ConfigError("shuffle shorter than the announced matrix")
    source = [list(shuffle[r * m : (r + 1) * m]) for r in range(n_rows)]
    entries = [[int(bits[i]) for i in row] for row in source]
    return KeyMatrix(entries, None, source, list(shuffle[n_rows * m :]))


def chunk_value(bits: Sequence[int]) -> int:
    """Big-endian unsigned value of a bit slice (leftmost bit most significant)."""
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def try_chunk_rows(matrix: KeyMatrix, n: int) -> tuple[list[ChunkRow | None], list[int]]:
    """Chunk every row; rows with duplicate decimals come back as None.

    Returns (chunk rows, indices of colliding rows). Raises ConfigError when
    n does not divide the row width.
    """
    m = matrix.row_width
    if n < 1 or m % n != 0:
        raise ConfigError(f"chunk width {n} must divide row width {m}")
    s = m // n
    rows: list[ChunkRow | None] = []
    bad: list[int] = []
    for r, row in enumerate(matrix.entries):
        decimals = tuple(chunk_value(row[j * n : (j + 1) * n]) for j in range(s))
        if len(set(decimals)) != s:
            rows.append(None)
            bad.append(r)
        else:
            rows.append(ChunkRow(decimals, n))
    return rows, bad


def chunk_rows(matrix: KeyMatrix, n: int) -> list[ChunkRow]:
    """Chunk every row, raising DuplicateChunk on the first colliding row."""
    rows, bad = try_chunk_rows(matrix, n)
    if bad:
        raise DuplicateChunk(bad[0])
    return rows  # type: ignore[return-value]


@dataclass
class ArrangedSet:
    """Alice's arrangement after the duplicate-retry policy.

    ``dropped`` lists rows that still collided after every redraw; their bits
    never enter the key and never count toward the error rate.
    """

    matrix: KeyMatrix
    shuffle: list[int]
    chunks: list[ChunkRow | None]
    dropped: list[int]


def _row_has_duplicates(bits: Sequence[int], row_src: Sequence[int], n: int) -> bool:
    s = len(row_src) // n
    seen = set()
    for j in range(s):
        value = chunk_value([bits[i] for i in row_src[j * n : (j + 1) * n]])
        if value in seen:
            return True
        seen.add(value)
    return False


def _deal_class_rows(
    indices: list[int],
    bits: Sequence[int],
    m: int,
    n: int,
    rng: Rng,
    max_redraws: int,
) -> tuple[list[tuple[list[int], bool]], list[int]]:
    """Shuffle one class pool and deal rows of m bits with distinct chunks.

    A colliding row is re-dealt by reshuffling the undealt remainder of the
    pool, so no bit is ever excluded, only re-partitioned. Re-dealing rejects
    collision-heavy prefixes and therefore concentrates same-valued bits in
    the tail, which can leave a late row unfixable; when a row exhausts its
    re-deal budget the whole class is redrawn from a fresh shuffle. Rows
    still colliding on the final class redraw are kept but marked dropped.
    Returns ([(row source indices, collides)], discarded indices).
    """
    row_budget = max(1, max_redraws // 4)
    class_budget = max(1, max_redraws // 8)
    for attempt in range(class_budget):
        pool = [indices[k] for k in rng.permutation(len(indices))]
        n_rows = len(pool) // m
        rows: list[tuple[list[int], bool]] = []
        stuck = False
        pos = 0
        for _ in range(n_rows):
            tries = 0
            while _row_has_duplicates(bits, pool[pos : pos + m], n) and tries < row_budget:
                rest = pool[pos:]
                pool[pos:] = [rest[k] for k in rng.permutation(len(rest))]
                tries += 1
            row_src = pool[pos : pos + m]
            bad = _row_has_duplicates(bits, row_src, n)
            stuck = stuck or bad
            rows.append((row_src, bad))
            pos += m
        if not stuck or attempt == class_budget - 1:
            return rows, pool[pos:]
    raise AssertionError("unreachable")


def arrange_until_distinct(
    bits: Sequence[int],
    common_idx: Sequence[int],
    m: int,
    n: int,
    rng: Rng,
    max_redraws: int = 32,
    require_both_classes: bool = True,
) -> ArrangedSet:
    """Arrange into basis-homogeneous rows with per-row distinct chunks.

    Same shape rules as :func:`arrange`. Each colliding row redraws its slice
    of the shuffle (from the undealt remainder of its class) up to
    ``max_redraws`` times; a row that still collides is dropped whole from
    the key and from the error average, but stays in the published matrix.
    Rebuilt second-pass matrices may be single-class (survivors of one class
    can vanish entirely), so they pass ``require_both_classes=False``.
    """
    if m < 2:
        raise ConfigError(f"row width must be >= 2, got {m}")
    if n < 1 or m % n != 0:
        raise ConfigError(f"chunk width {n} must divide row width {m}")
    total = len(bits)
    common = sorted(set(common_idx))
    if common and (common[0] < 0 or common[-1] >= total):
        raise ValueError("common_idx out of range")
    common_set = set(common)
    different = [i for i in range(total) if i not in common_set]
    n_common_rows = len(common) // m
    n_diff_rows = len(different) // m
    degenerate = (
        (n_common_rows == 0 or n_diff_rows == 0)
        if require_both_classes
        else n_common_rows + n_diff_rows == 0
    )
    if degenerate:
        raise DegenerateMatrix(
            f"cannot form rows of width {m}: "
            f"{len(common)} common and {len(different)} different bits"
        )

    common_rows, common_rest = _deal_class_rows(common, bits, m, n, rng, max_redraws)
    diff_rows, diff_rest = _deal_class_rows(different, bits, m, n, rng, max_redraws)

    tagged = [(src, RowClass.COMMON, bad) for src, bad in common_rows]
    tagged += [(src, RowClass.DIFFERENT, bad) for src, bad in diff_rows]
    order = [int(k) for k in rng.permutation(len(tagged))]
    tagged = [tagged[k] for k in order]

    row_sources = [src for src, _, _ in tagged]
    classes = [cls for _, cls, _ in tagged]
    discarded = common_rest + diff_rest
    shuffle = [i for row in row_sources for i in row] + discarded
    entries = [[int(bits[i]) for i in row] for row in row_sources]
    matrix = KeyMatrix(entries, classes, row_sources, discarded)
    chunks, bad = try_chunk_rows(matrix, n)
    return ArrangedSet(matrix, shuffle, chunks, bad)


def compatible_row_width(survivors: int, m: int, n: int, min_m: int | None = None) -> int:
    """Row width for a rebuilt matrix holding ``survivors`` bits.

    Preference order: the largest width w <= m with n | w that divides the
    survivor count exactly (no discards) and leaves at least two rows. If no
    width divides the count, fall back to the largest chunk-compatible width
    that still leaves two rows, accepting discards.
    """
    lo = n if min_m is None else min_m
    if survivors < 2 * lo:
        raise DegenerateMatrix(
            f"{survivors} surviving bits cannot fill two rows of width >= {lo}"
        )
    candidates = [w for w in range(lo, m + 1) if w % n == 0 and survivors >= 2 * w]
    if not candidates:
        raise DegenerateMatrix(f"no chunk-compatible row width in [{lo}, {m}]")
    exact = [w for w in candidates if survivors % w == 0]
    return max(exact) if exact else max(candidates)


def rebuild_after_reconciliation(
    kept_rows: Sequence[tuple[Sequence[int], RowClass]],
    m: int,
    n: int,
    rng: Rng,
    min_m: int | None = None,
    max_redraws: int = 32,
) -> tuple[ArrangedSet, int]:
    """Re-arrange surviving bits into a fresh matrix for a second pass.

    ``kept_rows`` pairs each verified row's surviving bits with its class;
    classes carry over bit-by-bit so the new rows stay homogeneous. Survivor
    positions are numbered in input order, which both parties can reproduce
    from the announced verdicts.
    """
    bits: list[int] = []
    common_positions: list[int] = []
    for row_bits, cls in kept_rows:
        base = len(bits)
        bits.extend(int(b) for b in row_bits)
        if cls is RowClass.COMMON:
            common_positions.extend(range(base, base + len(row_bits)))
    new_m = compatible_row_width(len(bits), m, n, min_m)
    arranged = arrange_until_distinct(
        bits, common_positions, new_m, n, rng, max_redraws, require_both_classes=False
    )
    return arranged, new_m
