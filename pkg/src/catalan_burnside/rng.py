"""Seeded random streams.

Every draw in the package comes from ``numpy.random.Generator`` over
PCG64. A run is determined by a single 64-bit seed; batch ``b`` of a
replica run uses the stream ``SeedSequence([seed, b])`` so the output does
not depend on how batches are scheduled across workers.
"""

from __future__ import annotations

import secrets

import numpy as np

RNG_ID = "numpy-pcg64-seedsequence-v1"
BATCH_SIZE = 8192
SEED_MASK = (1 << 64) - 1


def fresh_seed() -> int:
    return secrets.randbits(64)


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = fresh_seed()
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed) & SEED_MASK)))


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for replica batch ``index`` under ``seed``."""
    ss = np.random.SeedSequence([int(seed) & SEED_MASK, int(index)])
    return np.random.Generator(np.random.PCG64(ss))


def batches(replicas: int, size: int = BATCH_SIZE) -> list[tuple[int, int]]:
    """Split ``replicas`` into ``(batch_index, count)`` pairs."""
    out = []
    start = 0
    b = 0
    while start < replicas:
        count = min(size, replicas - start)
        out.append((b, count))
        start += count
        b += 1
    return out
