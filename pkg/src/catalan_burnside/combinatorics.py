"""Parking functions, permutations, histograms and the counting functions
used by both Burnside chains.

Words are plain tuples of 1-based integers. Exact quantities are
``fractions.Fraction`` or ``int``; nothing in this module touches floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as _itertools_permutations
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInputError, ResourceLimitError

Word = tuple[int, ...]
Histogram = tuple[int, ...]
SetPartition = frozenset  # frozenset[frozenset[int]]

PF_ENUMERATION_CAP = 8
IPF_ENUMERATION_CAP = 16


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def parse_word(text: str) -> Word:
    """Parse ``"4,1,3,4,1"`` (brackets optional) into a word."""
    try:
        return tuple(int(tok) for tok in text.strip().strip("()[]").replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise InvalidInputError(f"not a comma-separated integer word: {text!r}") from exc


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(v) for v in word)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# Words and parking functions
# ---------------------------------------------------------------------------

def _check_word(w: Sequence[int], k: int | None = None) -> Word:
    w = tuple(int(v) for v in w)
    if not w:
        raise InvalidInputError("empty word")
    if min(w) < 1:
        raise InvalidInputError(f"word entries must be >= 1, got {w}")
    if k is not None and max(w) > k:
        raise InvalidInputError(f"word entries must lie in [1, {k}], got {w}")
    return w


def is_parking_function(w: Sequence[int]) -> bool:
    """Return True iff the sorted entries satisfy ``x_(i) <= i`` for all i.

    Entries larger than ``len(w)`` make the answer False.

    >>> is_parking_function((4, 1, 3, 4, 1))
    True
    >>> is_parking_function((2, 2))
    False
    """
    w = _check_word(w)
    return all(v <= i for i, v in enumerate(sorted(w), start=1))


def is_parking_function_by_counts(w: Sequence[int]) -> bool:
    """Counting form of the parking criterion: ``#{r : w_r <= i} >= i`` for all i."""
    w = _check_word(w)
    n = len(w)
    return all(sum(1 for v in w if v <= i) >= i for i in range(1, n + 1))


def check_parking_function(x: Sequence[int]) -> Word:
    """Validate and return ``x`` as a tuple, raising on non-parking input."""
    x = _check_word(x)
    if not is_parking_function(x):
        raise InvalidInputError(f"not a parking function: {x}")
    return x


def weakly_increasing_rearrangement(x: Sequence[int]) -> Word:
    return tuple(sorted(x))


def histogram(w: Sequence[int], k: int | None = None) -> Histogram:
    """Count vector ``(i_1, ..., i_k)`` with ``i_a = #{r : w_r = a}``.

    ``k`` defaults to ``len(w)``.
    """
    w = _check_word(w)
    k = len(w) if k is None else k
    if max(w) > k:
        raise InvalidInputError(f"entry {max(w)} outside [1, {k}]")
    counts = [0] * k
    for v in w:
        counts[v - 1] += 1
    return tuple(counts)


def is_parking_histogram(counts: Sequence[int]) -> bool:
    """Membership in the set of histograms of parking functions."""
    n = len(counts)
    if sum(counts) != n or min(counts, default=0) < 0:
        return False
    running = 0
    for m, c in enumerate(counts, start=1):
        running += c
        if running < m:
            return False
    return True


def histogram_to_increasing(counts: Sequence[int]) -> Word:
    return tuple(a for a, c in enumerate(counts, start=1) for _ in range(c))


def value_partition(x: Sequence[int]) -> SetPartition:
    """The set partition of coordinate indices by value (level sets)."""
    blocks: dict[int, list[int]] = {}
    for r, v in enumerate(x, start=1):
        blocks.setdefault(v, []).append(r)
    return frozenset(frozenset(b) for b in blocks.values())


def level_sets(x: Sequence[int]) -> dict[int, list[int]]:
    """Map each occurring value to its sorted list of 1-based positions."""
    out: dict[int, list[int]] = {}
    for r, v in enumerate(x, start=1):
        out.setdefault(v, []).append(r)
    return out


# ---------------------------------------------------------------------------
# Density matrices and contingency tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityMatrix:
    """Nonnegative integer matrix ``m[a][b]`` (0-based storage, values a+1, b+1)."""

    cells: tuple[tuple[int, ...], ...]

    @property
    def row_margins(self) -> Histogram:
        return tuple(sum(row) for row in self.cells)

    @property
    def col_margins(self) -> Histogram:
        return tuple(sum(col) for col in zip(*self.cells))

    @property
    def total(self) -> int:
        return sum(self.row_margins)

    def __getitem__(self, ab: tuple[int, int]) -> int:
        """1-based lookup ``dm[a, b]``."""
        a, b = ab
        return self.cells[a - 1][b - 1]

    def nonzero(self) -> Iterator[int]:
        for row in self.cells:
            for m in row:
                if m:
                    yield m

    def transpose(self) -> "DensityMatrix":
        return DensityMatrix(tuple(zip(*self.cells)))


def density_counts(x: Sequence[int], y: Sequence[int]) -> dict[tuple[int, int], int]:
    """Sparse density: ``{(a, b): #{r : x_r = a, y_r = b}}`` over nonzero cells."""
    if len(x) != len(y):
        raise InvalidInputError(f"length mismatch: {len(x)} != {len(y)}")
    out: dict[tuple[int, int], int] = {}
    for pair in zip(x, y):
        out[pair] = out.get(pair, 0) + 1
    return out


def density(x: Sequence[int], y: Sequence[int], k: int | None = None) -> DensityMatrix:
    """The k-by-k density matrix of two words (``k`` defaults to their length)."""
    x = _check_word(x)
    y = _check_word(y)
    if len(x) != len(y):
        raise InvalidInputError(f"length mismatch: {len(x)} != {len(y)}")
    k = len(x) if k is None else k
    if max(max(x), max(y)) > k:
        raise InvalidInputError(f"entries must lie in [1, {k}]")
    cells = [[0] * k for _ in range(k)]
    for a, b in zip(x, y):
        cells[a - 1][b - 1] += 1
    return DensityMatrix(tuple(tuple(row) for row in cells))


def intersection_sets(x: Sequence[int], y: Sequence[int]) -> dict[tuple[int, int], frozenset]:
    """Nonempty index sets ``{r : x_r = a, y_r = b}`` keyed by ``(a, b)``."""
    out: dict[tuple[int, int], set[int]] = {}
    for r, pair in enumerate(zip(x, y), start=1):
        out.setdefault(pair, set()).add(r)
    return {key: frozenset(v) for key, v in out.items()}


def _contingency_rows(rows: Sequence[int], cols: list[int]) -> Iterator[list[tuple[int, ...]]]:
    if not rows:
        if not any(cols):
            yield []
        return
    first, rest = rows[0], rows[1:]
    remaining_after = sum(rest)

    def fill(j: int, left: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if j == len(cols):
            if left == 0:
                yield tuple(acc)
            return
        # columns j+1.. must be able to absorb what is left of this row
        tail_cap = sum(cols[j + 1:])
        lo = max(0, left - tail_cap)
        hi = min(left, cols[j])
        for m in range(lo, hi + 1):
            acc.append(m)
            yield from fill(j + 1, left - m, acc)
            acc.pop()

    for row in fill(0, first, []):
        new_cols = [c - m for c, m in zip(cols, row)]
        if sum(new_cols) != remaining_after:
            continue
        for tail in _contingency_rows(rest, new_cols):
            yield [row] + tail


def iter_contingency_tables(i: Sequence[int], j: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every nonnegative integer matrix with row sums ``i`` and column sums ``j``.

    Works on the support (nonzero margins) and re-embeds into the full
    ``len(i)`` by ``len(j)`` shape.
    """
    if sum(i) != sum(j):
        raise InvalidInputError(f"margin sums differ: {sum(i)} != {sum(j)}")
    if min(i, default=0) < 0 or min(j, default=0) < 0:
        raise InvalidInputError("margins must be nonnegative")
    row_idx = [a for a, c in enumerate(i) if c]
    col_idx = [b for b, c in enumerate(j) if c]
    for compact in _contingency_rows([i[a] for a in row_idx], [j[b] for b in col_idx]):
        full = [[0] * len(j) for _ in range(len(i))]
        for ra, row in zip(row_idx, compact):
            for cb, m in zip(col_idx, row):
                full[ra][cb] = m
        yield tuple(tuple(r) for r in full)


def enumerate_contingency_tables(i: Sequence[int], j: Sequence[int]) -> list[DensityMatrix]:
    return [DensityMatrix(t) for t in iter_contingency_tables(i, j)]


# ---------------------------------------------------------------------------
# Set partitions and Young subgroups
# ---------------------------------------------------------------------------

def make_partition(blocks: Iterable[Iterable[int]], n: int | None = None) -> SetPartition:
    """Validate ``blocks`` as a set partition (of ``[n]`` if ``n`` is given)."""
    part = frozenset(frozenset(b) for b in blocks)
    if frozenset() in part:
        raise InvalidInputError("partition blocks must be nonempty")
    seen: set[int] = set()
    for b in part:
        if seen & b:
            raise InvalidInputError("partition blocks overlap")
        seen |= b
    if n is not None and seen != set(range(1, n + 1)):
        raise InvalidInputError(f"blocks do not cover [1, {n}]")
    return part


def partition_meet(p: Iterable[Iterable[int]], q: Iterable[Iterable[int]]) -> SetPartition:
    """All nonempty pairwise intersections of blocks of ``p`` and ``q``."""
    p = make_partition(p)
    q = make_partition(q)
    if frozenset().union(*p) != frozenset().union(*q):
        raise InvalidInputError("partitions cover different ground sets")
    return frozenset(a & b for a in p for b in q if a & b)


def young_subgroup_order(p: Iterable[Iterable[int]]) -> int:
    return math.prod(math.factorial(len(b)) for b in make_partition(p))


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------

class Permutation:
    """A bijection of ``[n]`` stored by its one-line image table.

    ``p(i)`` is the image of ``i``; ``p * q`` means "apply q, then p".
    Acting on a word moves the entry in position ``i`` to position ``p(i)``.
    """

    __slots__ = ("images", "_cycles")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(v) for v in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise InvalidInputError(f"not a permutation in one-line notation: {images}")
        self.images = images
        self._cycles: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                images[a - 1] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(parse_word(text))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise InvalidInputError("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(inv)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({format_word(self.images)})"

    def __str__(self) -> str:
        return format_word(self.images)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycle decomposition, fixed points included, each cycle led by its minimum."""
        if self._cycles is None:
            seen = [False] * (self.n + 1)
            out = []
            for start in range(1, self.n + 1):
                if seen[start]:
                    continue
                cyc = []
                j = start
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j)
                    j = self.images[j - 1]
                out.append(tuple(cyc))
            self._cycles = tuple(out)
        return self._cycles

    def cycle_count(self) -> int:
        return len(self.cycles())

    def act(self, word: Sequence[int]) -> Word:
        """``(p . x)_r = x_{p^{-1}(r)}``."""
        if len(word) != self.n:
            raise InvalidInputError("word length does not match permutation degree")
        out = [0] * self.n
        for i, v in enumerate(word):
            out[self.images[i] - 1] = v
        return tuple(out)

    def fixes(self, word: Sequence[int]) -> bool:
        return all(word[self.images[i] - 1] == word[i] for i in range(self.n))

    def preserves(self, block: Iterable[int]) -> bool:
        block = set(block)
        return all(self(i) in block for i in block)

    def cycle_count_within(self, block: Iterable[int]) -> int:
        """Number of cycles of the restriction to an invariant ``block``."""
        block = set(block)
        if not self.preserves(block):
            raise InvalidInputError("block is not invariant under the permutation")
        return sum(1 for cyc in self.cycles() if cyc[0] in block)


def cycle_count(sigma: Permutation) -> int:
    return sigma.cycle_count()


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in _itertools_permutations(range(1, n + 1)):
        yield Permutation(images)


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def rising_factorial(z: Fraction | int, m: int) -> Fraction:
    """``z (z+1) ... (z+m-1)``; the empty product for ``m = 0`` is 1."""
    if m < 0:
        raise InvalidInputError("rising factorial needs m >= 0")
    z = Fraction(z)
    out = Fraction(1)
    for j in range(m):
        out *= z + j
    return out


@lru_cache(maxsize=None)
def stirling_first_unsigned(n: int, k: int) -> int:
    """Number of permutations of ``[n]`` with exactly ``k`` cycles."""
    if n < 0 or k < 0:
        raise InvalidInputError("Stirling numbers need n, k >= 0")
    if k > n:
        return 0
    if n == 0:
        return 1
    if k == 0:
        return 0
    return stirling_first_unsigned(n - 1, k - 1) + (n - 1) * stirling_first_unsigned(n - 1, k)


def catalan(n: int) -> int:
    if n < 0:
        raise InvalidInputError("catalan needs n >= 0")
    return math.comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_pf(n: int, *, allow_large: bool = False) -> list[Word]:
    """All parking functions of length ``n`` in lexicographic order.

    Refuses ``n > 8`` unless ``allow_large`` is set.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if n > PF_ENUMERATION_CAP and not allow_large:
        raise ResourceLimitError(f"enumerate_pf capped at n={PF_ENUMERATION_CAP}; got {n}")
    out: list[Word] = []
    prefix: list[int] = []
    # below[i] = #{prefix entries <= i}
    below = [0] * (n + 2)

    def feasible(remaining: int) -> bool:
        return all(below[i] + remaining >= i for i in range(1, n + 1))

    def rec() -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        remaining = n - len(prefix) - 1
        for v in range(1, n + 1):
            for i in range(v, n + 1):
                below[i] += 1
            if feasible(remaining):
                prefix.append(v)
                rec()
                prefix.pop()
            for i in range(v, n + 1):
                below[i] -= 1

    rec()
    return out


def enumerate_ipf(n: int) -> list[Word]:
    """All weakly increasing parking functions of length ``n``, lexicographic."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if n > IPF_ENUMERATION_CAP:
        raise ResourceLimitError(f"enumerate_ipf capped at n={IPF_ENUMERATION_CAP}; got {n}")
    out: list[Word] = []
    prefix: list[int] = []

    def rec(lo: int) -> None:
        pos = len(prefix) + 1
        if pos > n:
            out.append(tuple(prefix))
            return
        for v in range(lo, pos + 1):
            prefix.append(v)
            rec(v)
            prefix.pop()

    rec(1)
    return out


def enumerate_words(n: int, k: int) -> Iterator[Word]:
    """All of ``[k]^n`` in lexicographic order."""
    from itertools import product

    return (tuple(w) for w in product(range(1, k + 1), repeat=n))


# ---------------------------------------------------------------------------
# Cyclic shifts and the parking representative
# ---------------------------------------------------------------------------

def cyclic_shift(w: Sequence[int], c: int, k: int) -> Word:
    """Add ``c`` to every entry modulo ``k``, values kept in ``[1, k]``."""
    return tuple((v - 1 + c) % k + 1 for v in w)


def _empty_spot(w: Sequence[int], k: int) -> int:
    """0-based spot left free when cars with preferences ``w`` park on a circle of ``k`` spots."""
    nxt = list(range(k))

    def find(j: int) -> int:
        root = j
        while nxt[root] != root:
            root = nxt[root]
        while nxt[j] != root:
            nxt[j], j = root, nxt[j]
        return root

    for v in w:
        spot = find(v - 1)
        nxt[spot] = (spot + 1) % k
    free = find(0)
    return free


def pollak_representative(w: Sequence[int]) -> tuple[Word, int]:
    """Return ``(x, c)`` where ``x = w + c (mod n+1)`` is the unique parking function
    among the ``n + 1`` cyclic shifts of ``w`` in ``[n+1]^n``.

    Circular parking leaves exactly one spot free; shifting that spot to
    ``n + 1`` makes every car park without wrapping.
    """
    w = _check_word(w)
    n = len(w)
    k = n + 1
    if max(w) > k:
        raise InvalidInputError(f"entries must lie in [1, {k}]")
    c = (n - _empty_spot(w, k)) % k
    x = cyclic_shift(w, c, k)
    assert is_parking_function(x), (w, c, x)
    return x, c


def pollak_by_search(w: Sequence[int]) -> tuple[Word, int]:
    """Reference version of :func:`pollak_representative`: tries every shift.

    Raises AssertionError unless exactly one shift parks.
    """
    w = _check_word(w)
    k = len(w) + 1
    hits = [(cyclic_shift(w, c, k), c) for c in range(k) if is_parking_function(cyclic_shift(w, c, k))]
    assert len(hits) == 1, (w, hits)
    return hits[0]
