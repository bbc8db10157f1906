"""The Bose-Einstein Burnside chain: S_n permuting coordinates of ``[k]^n``.

With ``k = n + 1`` the parking-function chain is the quotient of this chain
by global cyclic shifts; see :func:`quotient_kernel`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .burnside import coordinate_kernel, sample_stabilizer, stabilizer_order
from .combinatorics import Permutation, Word, cyclic_shift, pollak_representative
from .errors import InvalidInputError


def _check_be_word(x: Sequence[int], k: int) -> Word:
    x = tuple(int(v) for v in x)
    if not x or min(x) < 1 or max(x) > k:
        raise InvalidInputError(f"word must be nonempty with entries in [1, {k}]: {x}")
    return x


def be_fixed_count(sigma: Permutation, k: int) -> int:
    """``k ** cycles(sigma)``: words constant on each cycle."""
    return k ** sigma.cycle_count()


def be_step(x: Sequence[int], rng: np.random.Generator, k: int | None = None) -> Word:
    """One Bose-Einstein step: uniform stabilizer element, then one uniform letter per cycle."""
    k = len(x) + 1 if k is None else k
    x = _check_be_word(x, k)
    sigma = sample_stabilizer(x, rng)
    cycles = sigma.cycles()
    letters = rng.integers(1, k + 1, size=len(cycles))
    y = [0] * len(x)
    for cyc, v in zip(cycles, letters):
        for i in cyc:
            y[i - 1] = int(v)
    return tuple(y)


def be_kernel(x: Sequence[int], y: Sequence[int], k: int | None = None) -> Fraction:
    k = len(x) + 1 if k is None else k
    x = _check_be_word(x, k)
    y = _check_be_word(y, k)
    if len(x) != len(y):
        raise InvalidInputError(f"length mismatch: {len(x)} != {len(y)}")
    return coordinate_kernel(x, y, k)


def be_orbit_count(n: int, k: int) -> int:
    """Number of S_n-orbits on ``[k]^n`` (weak compositions of n into k parts)."""
    if n < 1 or k < 1:
        raise InvalidInputError("need n >= 1 and k >= 1")
    return math.comb(n + k - 1, k - 1)


def be_stationary(y: Sequence[int], k: int | None = None) -> Fraction:
    k = len(y) + 1 if k is None else k
    y = _check_be_word(y, k)
    n = len(y)
    return Fraction(stabilizer_order(y), math.factorial(n) * be_orbit_count(n, k))


def shift(x: Sequence[int], c: int, k: int | None = None) -> Word:
    """Global shift ``x + c`` in ``Z_k`` (values kept in ``[1, k]``)."""
    k = len(x) + 1 if k is None else k
    x = _check_be_word(x, k)
    if not 0 <= c < k:
        raise InvalidInputError(f"shift must lie in [0, {k})")
    return cyclic_shift(x, c, k)


def shift_orbit(x: Sequence[int], k: int | None = None) -> list[Word]:
    k = len(x) + 1 if k is None else k
    return [shift(x, c, k) for c in range(k)]


def quotient_kernel(x: Sequence[int], y: Sequence[int]) -> Fraction:
    """Mass the chain started at ``x`` puts on the shift orbit of ``y`` in one step (``k = n + 1``)."""
    k = len(x) + 1
    return sum((be_kernel(x, u, k) for u in shift_orbit(y, k)), Fraction(0))


def parking_image(x: Sequence[int]) -> Word:
    """The parking function in the shift orbit of ``x``."""
    return pollak_representative(x)[0]
