"""The Burnside process for S_n permuting the coordinates of parking functions.

One step from ``x``: draw ``sigma`` uniformly from the stabilizer of ``x``
(a Young subgroup, so one independent shuffle per level set), then draw
``y`` uniformly from the parking functions fixed by ``sigma`` (one uniform
value in ``[n+1]`` per cycle, then the cyclic-shift parking representative).

Exact transition probabilities are computed in closed form from the
density matrix of ``(x, y)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import rng as rng_mod
from .combinatorics import (
    Permutation,
    Word,
    catalan,
    check_parking_function,
    density_counts,
    enumerate_ipf,
    enumerate_pf,
    histogram,
    iter_contingency_tables,
    level_sets,
    pollak_representative,
    rising_factorial,
    weakly_increasing_rearrangement,
)
from .errors import InvalidInputError

# ---------------------------------------------------------------------------
# Group-theoretic counts
# ---------------------------------------------------------------------------


def stabilizer_order(x: Sequence[int]) -> int:
    """Order of the coordinate stabilizer: product of factorials of the histogram."""
    return math.prod(math.factorial(c) for c in histogram(x, max(len(x), max(x))))


def fixed_pf_count(sigma: Permutation, n: int) -> int:
    """Number of parking functions of length ``n`` fixed by ``sigma``: ``(n+1)^(cycles-1)``."""
    if sigma.n != n:
        raise InvalidInputError(f"permutation has degree {sigma.n}, expected {n}")
    return (n + 1) ** (sigma.cycle_count() - 1)


# ---------------------------------------------------------------------------
# Sampling, one chain at a time
# ---------------------------------------------------------------------------


def sample_stabilizer(x: Sequence[int], rng: np.random.Generator) -> Permutation:
    """Uniform element of the stabilizer of ``x``."""
    images = list(range(1, len(x) + 1))
    for positions in level_sets(x).values():
        if len(positions) > 1:
            for src, dst in zip(positions, rng.permutation(positions)):
                images[src - 1] = int(dst)
    return Permutation(images)


def sample_fixed_pf(sigma: Permutation, n: int, rng: np.random.Generator) -> Word:
    """Uniform parking function fixed by ``sigma``.

    A word that is constant on cycles of ``sigma`` is drawn uniformly from
    ``[n+1]^n``; its unique parking shift is still constant on cycles, and
    every fixed parking function arises from exactly ``n + 1`` such words.
    """
    if sigma.n != n:
        raise InvalidInputError(f"permutation has degree {sigma.n}, expected {n}")
    cycles = sigma.cycles()
    values = rng.integers(1, n + 2, size=len(cycles))
    word = [0] * n
    for cyc, v in zip(cycles, values):
        for i in cyc:
            word[i - 1] = int(v)
    return pollak_representative(word)[0]


def burnside_step(x: Sequence[int], rng: np.random.Generator) -> Word:
    sigma = sample_stabilizer(x, rng)
    return sample_fixed_pf(sigma, len(x), rng)


@dataclass
class ChainState:
    """A single running chain. Not safe to share between threads."""

    current: Word
    rng: np.random.Generator
    step_count: int = 0
    trajectory: list[Word] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.current = check_parking_function(self.current)

    def step(self) -> Word:
        self.current = burnside_step(self.current, self.rng)
        self.step_count += 1
        if self.trajectory is not None:
            self.trajectory.append(self.current)
        return self.current

    def run(self, t: int) -> Word:
        for _ in range(t):
            self.step()
        return self.current


def run_chain(x0: Sequence[int], t: int, rng, record: bool = False):
    """Apply ``t`` Burnside steps to ``x0``.

    Returns the final state, or ``(final, trajectory)`` when ``record`` is
    set; the trajectory includes ``x0``.
    """
    if t < 0:
        raise InvalidInputError("t must be >= 0")
    state = ChainState(tuple(x0), rng_mod.make_rng(rng))
    if record:
        state.trajectory = [state.current]
    state.run(t)
    if record:
        return state.current, state.trajectory
    return state.current


# ---------------------------------------------------------------------------
# Sampling, many replicas at once
# ---------------------------------------------------------------------------


def _cycle_leaders(sigma: np.ndarray) -> np.ndarray:
    """Per position, the smallest index on its cycle (0-based, row-wise)."""
    n = sigma.shape[1]
    lab = np.broadcast_to(np.arange(n), sigma.shape).copy()
    f = sigma
    rounds = math.ceil(math.log2(n)) if n > 1 else 0
    for _ in range(rounds):
        lab = np.minimum(lab, np.take_along_axis(lab, f, axis=1))
        f = np.take_along_axis(f, f, axis=1)
    return lab


def _park_shift(values: np.ndarray, k: int) -> np.ndarray:
    """Row-wise parking representative of 0-based words in ``Z_k``; returns 1-based words."""
    reps, n = values.shape
    flat = (np.arange(reps)[:, None] * k + values).ravel()
    counts = np.bincount(flat, minlength=reps * k).reshape(reps, k)
    excess = np.cumsum(counts - 1, axis=1)
    shift = n - np.argmin(excess, axis=1)
    return (values + shift[:, None]) % k + 1


def step_batch(states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One Burnside step for every row of ``states`` (shape ``(replicas, n)``, 1-based)."""
    reps, n = states.shape
    # stabilizer: a random bijection inside each level set
    src = np.argsort(states, axis=1, kind="stable")
    dst = np.argsort(states + rng.random(states.shape), axis=1)
    sigma = np.empty_like(src)
    np.put_along_axis(sigma, src, dst, axis=1)
    # fixed set: one uniform value in Z_{n+1} per cycle, then shift to park
    leaders = _cycle_leaders(sigma)
    draws = rng.integers(0, n + 1, size=states.shape)
    return _park_shift(np.take_along_axis(draws, leaders, axis=1), n + 1)


def _run_block(x0: np.ndarray, t: int, count: int, gen: np.random.Generator) -> np.ndarray:
    states = np.tile(x0, (count, 1))
    for _ in range(t):
        states = step_batch(states, gen)
    return states


def run_replicas(
    x0: Sequence[int],
    t: int,
    replicas: int,
    seed: int,
    jobs: int = 1,
) -> np.ndarray:
    """Final states of ``replicas`` independent chains started at ``x0``.

    Output row order is replica order and does not depend on ``jobs``.
    """
    x0 = np.asarray(check_parking_function(x0), dtype=np.int64)
    if t < 0 or replicas < 1:
        raise InvalidInputError("need t >= 0 and replicas >= 1")
    plan = rng_mod.batches(replicas)

    def work(item):
        b, count = item
        return _run_block(x0, t, count, rng_mod.stream(seed, b))

    if jobs > 1 and len(plan) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(work, plan))
    else:
        blocks = [work(item) for item in plan]
    return np.concatenate(blocks, axis=0)


# ---------------------------------------------------------------------------
# Exact kernels
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cell_weight(m: int, k: int) -> Fraction:
    return rising_factorial(Fraction(1, k), m)


def coordinate_kernel(x: Sequence[int], y: Sequence[int], k: int) -> Fraction:
    """Burnside kernel for S_n acting on ``[k]^n`` by permuting coordinates.

    ``(1/|G_x|) * prod over (a, b) of rising(1/k, m_ab)`` with ``m`` the
    density of ``(x, y)``.
    """
    dens = density_counts(x, y)
    out = Fraction(1, stabilizer_order(x))
    for m in dens.values():
        out *= _cell_weight(m, k)
    return out


def kernel(x: Sequence[int], y: Sequence[int]) -> Fraction:
    """Exact one-step probability ``K(x, y)`` on parking functions of length n."""
    if len(x) != len(y):
        raise InvalidInputError(f"length mismatch: {len(x)} != {len(y)}")
    x = check_parking_function(x)
    y = check_parking_function(y)
    n = len(x)
    return (n + 1) * coordinate_kernel(x, y, n + 1)


def stationary(x: Sequence[int]) -> Fraction:
    x = check_parking_function(x)
    n = len(x)
    return Fraction(stabilizer_order(x), math.factorial(n) * catalan(n))


@lru_cache(maxsize=None)
def _lumped_cell_weight(m: int, k: int) -> Fraction:
    return _cell_weight(m, k) / math.factorial(m)


def lumped_kernel(u: Sequence[int], v: Sequence[int]) -> Fraction:
    """Exact orbit-to-orbit probability between increasing parking functions.

    Sums a product weight over all contingency tables whose margins are the
    two histograms. ``u`` and ``v`` may be any members of their orbits.
    """
    if len(u) != len(v):
        raise InvalidInputError(f"length mismatch: {len(u)} != {len(v)}")
    u = check_parking_function(u)
    v = check_parking_function(v)
    n = len(u)
    k = n + 1
    total = Fraction(0)
    for table in iter_contingency_tables(histogram(u), histogram(v)):
        term = Fraction(1)
        for row in table:
            for m in row:
                if m:
                    term *= _lumped_cell_weight(m, k)
        total += term
    return k * total


# ---------------------------------------------------------------------------
# Whole-matrix forms (small n)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelTable:
    """``K = numerators / denominator`` over ``states`` (lexicographic PF_n)."""

    n: int
    states: tuple[Word, ...]
    numerators: np.ndarray  # int64, shape (N, N)
    denominator: int

    @property
    def index(self) -> dict[Word, int]:
        return {s: i for i, s in enumerate(self.states)}

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numerators[i, j]), self.denominator)


@lru_cache(maxsize=None)
def _rising_numerator(m: int, k: int) -> int:
    # k^m * rising(1/k, m)
    return math.prod(1 + j * k for j in range(m))


@lru_cache(maxsize=8)
def kernel_table(n: int) -> KernelTable:
    """The full kernel on PF_n as an integer matrix over ``n! (n+1)^(n-1)``.

    Entry ``(x, y)`` is ``prod rising_numerator(m_ab) * n! / |G_x|``.
    """
    states = tuple(enumerate_pf(n))
    k = n + 1
    denom = math.factorial(n) * k ** (n - 1)
    size = len(states)
    nums = np.empty((size, size), dtype=np.int64)
    cache: dict[tuple, int] = {}
    for i, x in enumerate(states):
        scale = math.factorial(n) // stabilizer_order(x)
        row = nums[i]
        for j, y in enumerate(states):
            key = tuple(sorted(density_counts(x, y).values()))
            val = cache.get(key)
            if val is None:
                val = math.prod(_rising_numerator(m, k) for m in key)
                cache[key] = val
            row[j] = val * scale
    return KernelTable(n, states, nums, denom)


def lumped_kernel_matrix(n: int) -> tuple[tuple[Word, ...], list[list[Fraction]]]:
    """``(IPF_n, Kbar)`` with ``Kbar[i][j] = lumped_kernel(states[i], states[j])``."""
    states = tuple(enumerate_ipf(n))
    return states, [[lumped_kernel(u, v) for v in states] for u in states]


def stationary_vector(n: int) -> tuple[tuple[Word, ...], list[Fraction]]:
    states = tuple(enumerate_pf(n))
    return states, [stationary(x) for x in states]


def orbit_of(x: Sequence[int]) -> Word:
    """Increasing representative of the orbit of ``x``."""
    return weakly_increasing_rearrangement(x)
