"""Dyck paths, labeled Dyck paths and polygon triangulations.

Increasing parking functions correspond to Dyck paths by reading the
histogram as vertical-run lengths; parking functions correspond to labeled
Dyck paths by additionally recording which coordinates carry each value.
Triangulations of the ``(n+2)``-gon with vertices ``0..n+1`` come from the
first-return decomposition ``N w1 E w2`` of a Dyck path: the root triangle
sits on the edge ``(0, n+1)``, ``w2`` triangulates the polygon to its left
and ``w1`` the one to its right.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .burnside import run_replicas
from .combinatorics import (
    Permutation,
    Word,
    check_parking_function,
    histogram,
    weakly_increasing_rearrangement,
)
from .errors import InvalidInputError


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyckPath:
    steps: str

    def __post_init__(self) -> None:
        height = 0
        for s in self.steps:
            if s == "N":
                height += 1
            elif s == "E":
                height -= 1
            else:
                raise InvalidInputError(f"Dyck steps must be N or E, got {s!r}")
            if height < 0:
                raise InvalidInputError(f"prefix drops below the diagonal: {self.steps}")
        if height != 0 or not self.steps:
            raise InvalidInputError(f"unbalanced or empty Dyck path: {self.steps!r}")

    @property
    def n(self) -> int:
        return len(self.steps) // 2

    def runs(self) -> tuple[int, ...]:
        """Number of N-steps before each of the ``n`` E-steps."""
        out = []
        run = 0
        for s in self.steps:
            if s == "N":
                run += 1
            else:
                out.append(run)
                run = 0
        return tuple(out)

    def __str__(self) -> str:
        return self.steps


@dataclass(frozen=True)
class LabeledDyckPath:
    """A Dyck path with one label tuple per column (empty where the run is empty)."""

    path: DyckPath
    labels: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.path.n
        if tuple(len(r) for r in self.labels) != self.path.runs():
            raise InvalidInputError("run labels do not match the vertical runs of the path")
        flat = [v for run in self.labels for v in run]
        if sorted(flat) != list(range(1, n + 1)):
            raise InvalidInputError("labels must be a permutation of [n]")
        for run in self.labels:
            if any(a >= b for a, b in zip(run, run[1:])):
                raise InvalidInputError(f"labels must increase along a run: {run}")

    def __str__(self) -> str:
        runs = ";".join("[" + ",".join(map(str, r)) + "]" for r in self.labels if r)
        return f"{self.path} | {runs}"

    @classmethod
    def parse(cls, text: str) -> "LabeledDyckPath":
        try:
            path_text, runs_text = (part.strip() for part in text.split("|"))
        except ValueError as exc:
            raise InvalidInputError(f"expected 'PATH | [..];[..]', got {text!r}") from exc
        path = DyckPath(path_text)
        given = [tuple(json.loads(tok)) for tok in runs_text.split(";") if tok.strip()]
        it = iter(given)
        labels = tuple(next(it) if r else () for r in path.runs())
        return cls(path, labels)


@dataclass(frozen=True)
class Triangulation:
    n: int
    diagonals: frozenset  # frozenset[tuple[int, int]], each (i, j) with i < j

    def __post_init__(self) -> None:
        m = self.n + 2
        diags = sorted(self.diagonals)
        if len(diags) != self.n - 1:
            raise InvalidInputError(f"need {self.n - 1} diagonals, got {len(diags)}")
        for a, b in diags:
            if not (0 <= a < b < m) or b - a == 1 or (a == 0 and b == m - 1):
                raise InvalidInputError(f"({a}, {b}) is not a diagonal of the {m}-gon")
        for idx, (a, b) in enumerate(diags):
            for c, d in diags[idx + 1:]:
                if crosses((a, b), (c, d)):
                    raise InvalidInputError(f"diagonals ({a}, {b}) and ({c}, {d}) cross")

    def to_list(self) -> list[list[int]]:
        return [list(d) for d in sorted(self.diagonals)]

    def __str__(self) -> str:
        return json.dumps(self.to_list(), separators=(",", ":"))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Triangulation":
        pairs = [tuple(sorted(p)) for p in json.loads(text)]
        if n is None:
            n = len(pairs) + 1
        return cls(n, frozenset(pairs))


def crosses(d1: tuple[int, int], d2: tuple[int, int]) -> bool:
    a, b = sorted(d1)
    c, d = sorted(d2)
    return a < c < b < d or c < a < d < b


# ---------------------------------------------------------------------------
# Increasing parking functions <-> Dyck paths
# ---------------------------------------------------------------------------


def ipf_to_dyck(u: Sequence[int]) -> DyckPath:
    """``N^{i_1} E N^{i_2} E ... N^{i_n} E`` from the histogram of ``u``."""
    u = check_parking_function(u)
    if list(u) != sorted(u):
        raise InvalidInputError(f"not weakly increasing: {u}")
    return DyckPath("".join("N" * c + "E" for c in histogram(u)))


def dyck_to_ipf(d: DyckPath | str) -> Word:
    d = d if isinstance(d, DyckPath) else DyckPath(d)
    return tuple(a for a, c in enumerate(d.runs(), start=1) for _ in range(c))


# ---------------------------------------------------------------------------
# Parking functions <-> labeled Dyck paths
# ---------------------------------------------------------------------------


def pf_to_labeled_dyck(x: Sequence[int]) -> LabeledDyckPath:
    x = check_parking_function(x)
    n = len(x)
    labels: list[list[int]] = [[] for _ in range(n)]
    for r, v in enumerate(x, start=1):
        labels[v - 1].append(r)
    return LabeledDyckPath(ipf_to_dyck(weakly_increasing_rearrangement(x)), tuple(map(tuple, labels)))


def labeled_dyck_to_pf(ld: LabeledDyckPath) -> Word:
    x = [0] * ld.path.n
    for a, run in enumerate(ld.labels, start=1):
        for r in run:
            x[r - 1] = a
    return tuple(x)


def act_on_labeled_dyck(sigma: Permutation, ld: LabeledDyckPath) -> LabeledDyckPath:
    """Relabel ``i -> sigma(i)`` and re-sort each run; the path is unchanged."""
    if sigma.n != ld.path.n:
        raise InvalidInputError("permutation degree does not match path size")
    return LabeledDyckPath(ld.path, tuple(tuple(sorted(sigma(i) for i in run)) for run in ld.labels))


def outcome_map(x: Sequence[int]) -> Permutation:
    """Labels of the labeled Dyck path of ``x`` read from the bottom run upward."""
    ld = pf_to_labeled_dyck(x)
    return Permutation([v for run in ld.labels for v in run])


# ---------------------------------------------------------------------------
# Dyck paths <-> triangulations
# ---------------------------------------------------------------------------


def _first_returns(steps: str) -> list[int]:
    """``match[i]`` = index of the E closing the N at position ``i``."""
    match = [-1] * len(steps)
    stack = []
    for i, s in enumerate(steps):
        if s == "N":
            stack.append(i)
        else:
            match[stack.pop()] = i
    return match


def dyck_to_triangulation(d: DyckPath | str) -> Triangulation:
    """Triangulation of the ``(n+2)``-gon, linear time in ``n``."""
    d = d if isinstance(d, DyckPath) else DyckPath(d)
    steps = d.steps
    match = _first_returns(steps)
    diagonals = []
    # (segment start, segment end, polygon low vertex, polygon high vertex)
    todo = [(0, len(steps), 0, d.n + 1)]
    while todo:
        s, e, lo, hi = todo.pop()
        if s == e:
            continue
        close = match[s]
        inner = (close - s - 1) // 2
        apex = hi - inner - 1
        if apex - lo >= 2:
            diagonals.append((lo, apex))
        if hi - apex >= 2:
            diagonals.append((apex, hi))
        todo.append((s + 1, close, apex, hi))
        todo.append((close + 1, e, lo, apex))
    return Triangulation(d.n, frozenset(diagonals))


def triangulation_to_dyck(t: Triangulation) -> DyckPath:
    edges = set(t.diagonals)
    m = t.n + 2
    edges.update((i, i + 1) for i in range(m - 1))
    edges.add((0, m - 1))
    out: list[str] = []
    # iterative version of: path(lo, hi) = N path(apex, hi) E path(lo, apex)
    todo: list[tuple[int, int] | str] = [(0, m - 1)]
    while todo:
        item = todo.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        lo, hi = item
        if hi - lo < 2:
            continue
        apex = next(
            (k for k in range(lo + 1, hi) if (lo, k) in edges and (k, hi) in edges),
            None,
        )
        if apex is None:
            raise InvalidInputError("diagonals do not form a triangulation")
        todo.extend([(lo, apex), "E", (apex, hi)])
        out.append("N")
    return DyckPath("".join(out))


# ---------------------------------------------------------------------------
# Sampling pipeline
# ---------------------------------------------------------------------------


def sample_triangulations(
    n: int,
    t: int,
    replicas: int,
    seed: int,
    x0: Sequence[int] | None = None,
    jobs: int = 1,
) -> list[Triangulation]:
    """Run ``replicas`` chains for ``t`` steps and map each orbit to a triangulation."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    x0 = tuple(range(1, n + 1)) if x0 is None else tuple(x0)
    finals = np.sort(run_replicas(x0, t, replicas, seed, jobs=jobs), axis=1)
    cache: dict[Word, Triangulation] = {}
    out = []
    for row in finals:
        u = tuple(int(v) for v in row)
        tri = cache.get(u)
        if tri is None:
            tri = cache[u] = dyck_to_triangulation(ipf_to_dyck(u))
        out.append(tri)
    return out


def sample_triangulation(n: int, t: int, seed: int, x0: Sequence[int] | None = None) -> Triangulation:
    return sample_triangulations(n, t, 1, seed, x0)[0]
