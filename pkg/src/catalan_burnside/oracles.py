"""Brute-force reference computations.

Everything here enumerates the symmetric group or the state space directly
and shares no formula with the closed forms it is used to check. Only
usable for small n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .combinatorics import Permutation, Word, all_permutations, enumerate_pf, enumerate_words


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> tuple[Permutation, ...]:
    return tuple(all_permutations(n))


def stabilizer(x: Sequence[int]) -> list[Permutation]:
    return [g for g in symmetric_group(len(x)) if g.act(x) == tuple(x)]


@lru_cache(maxsize=None)
def _fixed_counts(n: int, space: str, k: int) -> dict[Permutation, int]:
    states = enumerate_pf(n) if space == "pf" else list(enumerate_words(n, k))
    return {g: sum(1 for s in states if g.act(s) == s) for g in symmetric_group(n)}


def fixed_set_size(g: Permutation, space: str = "pf", k: int | None = None) -> int:
    """``|X_g|`` by enumeration; ``space`` is ``"pf"`` or ``"words"`` (``[k]^n``)."""
    k = g.n + 1 if k is None else k
    return _fixed_counts(g.n, space, k)[g]


def burnside_kernel_by_definition(
    x: Sequence[int], y: Sequence[int], space: str = "pf", k: int | None = None
) -> Fraction:
    """``sum over g fixing x and y of 1 / (|G_x| |X_g|)``."""
    x, y = tuple(x), tuple(y)
    gx = stabilizer(x)
    total = Fraction(0)
    for g in gx:
        if g.act(y) == y:
            total += Fraction(1, len(gx) * fixed_set_size(g, space, k))
    return total


def sum_over_group(n: int, z: Fraction) -> Fraction:
    """``sum over tau in S_n of z ** cycles(tau)``."""
    return sum((Fraction(z) ** g.cycle_count() for g in symmetric_group(n)), Fraction(0))


def count_tables_brute(i: Sequence[int], j: Sequence[int]) -> int:
    """Count matrices with the given margins by trying every entry in ``[0, total]``."""
    total = sum(i)
    rows, cols = len(i), len(j)
    count = 0
    for cells in product(range(total + 1), repeat=rows * cols):
        ok = all(sum(cells[a * cols:(a + 1) * cols]) == i[a] for a in range(rows)) and all(
            sum(cells[a * cols + b] for a in range(rows)) == j[b] for b in range(cols)
        )
        count += ok
    return count


def young_order_brute(blocks: Iterable[Iterable[int]], n: int) -> int:
    blocks = [set(b) for b in blocks]
    return sum(1 for g in symmetric_group(n) if all(g.preserves(b) for b in blocks))


def parking_by_shift_search(n: int) -> dict[Word, list[int]]:
    """For every word in ``[n+1]^n``, the list of shifts that give a parking function."""
    from .combinatorics import cyclic_shift, is_parking_function

    k = n + 1
    return {
        w: [c for c in range(k) if is_parking_function(cyclic_shift(w, c, k))]
        for w in enumerate_words(n, k)
    }
