"""Distance to stationarity: exact evolution, the proven upper bound, and
empirical orbit distributions from replica runs.

Exact quantities are ``Fraction``; the bound ``n (1 - 1/(n+1))^t`` is a
float, and comparisons round the exact distance up to the next float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import rng as rng_mod
from .burnside import kernel_table, lumped_kernel_matrix, run_replicas, stabilizer_order, step_batch
from .combinatorics import (
    Permutation,
    Word,
    all_permutations,
    catalan,
    check_parking_function,
    enumerate_ipf,
    enumerate_pf,
    format_rational,
    format_word,
)
from .errors import InvalidInputError, ResourceLimitError

EXACT_FULL_CAP = 5
EXACT_LUMPED_CAP = 8


@dataclass(frozen=True)
class DistributionVector:
    """Probability masses over an enumerated state list.

    ``exact`` vectors hold ``Fraction`` masses summing to exactly 1;
    empirical ones hold floats.
    """

    space: tuple[Word, ...]
    masses: tuple
    exact: bool = True

    def __post_init__(self) -> None:
        if len(self.space) != len(self.masses):
            raise InvalidInputError("space and masses differ in length")
        if any(m < 0 for m in self.masses):
            raise InvalidInputError("masses must be nonnegative")
        total = sum(self.masses)
        if self.exact and total != 1:
            raise InvalidInputError(f"exact masses sum to {total}, not 1")
        if not self.exact and abs(total - 1.0) > 1e-12:
            raise InvalidInputError(f"masses sum to {total}, not 1")

    def __getitem__(self, state: Word):
        return self.masses[self.space.index(tuple(state))]

    @classmethod
    def point_mass(cls, space: Sequence[Word], state: Word) -> "DistributionVector":
        state = tuple(state)
        return cls(tuple(space), tuple(Fraction(int(s == state)) for s in space))

    @classmethod
    def uniform(cls, space: Sequence[Word]) -> "DistributionVector":
        return cls(tuple(space), tuple(Fraction(1, len(space)) for _ in space))

    def as_float(self) -> "DistributionVector":
        return DistributionVector(self.space, tuple(float(m) for m in self.masses), exact=False)


def total_variation(p: DistributionVector, q: DistributionVector):
    """Half the L1 distance; exact if both inputs are exact."""
    if p.space != q.space:
        raise InvalidInputError("distributions are over different state lists")
    tv = sum(abs(a - b) for a, b in zip(p.masses, q.masses)) / 2
    return tv if (p.exact and q.exact) else float(tv)


def round_up(q: Fraction) -> float:
    """Smallest float that is >= ``q``."""
    f = float(q)
    if Fraction(f) < q:
        f = math.nextafter(f, math.inf)
    return f


# ---------------------------------------------------------------------------
# Exact evolution over the full state space
# ---------------------------------------------------------------------------


def _check_full_cap(n: int) -> None:
    if n > EXACT_FULL_CAP:
        raise ResourceLimitError(f"exact full-space evolution capped at n={EXACT_FULL_CAP}; got {n}")


def stationary_distribution(n: int) -> DistributionVector:
    states = tuple(enumerate_pf(n))
    denom = math.factorial(n) * catalan(n)
    return DistributionVector(states, tuple(Fraction(stabilizer_order(x), denom) for x in states))


def _evolve_scaled(table, start: int, t_max: int) -> Iterable[np.ndarray]:
    """Yield integer rows ``v_t = D^t K^t(start, .)`` for ``t = 0..t_max``."""
    mat = table.numerators.astype(object)
    v = np.zeros(len(table.states), dtype=object)
    v[start] = 1
    yield v
    for _ in range(t_max):
        v = v.dot(mat)
        yield v


def exact_distribution_at_time(n: int, x0: Sequence[int], t: int) -> DistributionVector:
    """``K^t(x0, .)`` over lexicographic PF_n, exactly (``n <= 5``)."""
    _check_full_cap(n)
    x0 = check_parking_function(x0)
    if len(x0) != n or t < 0:
        raise InvalidInputError("x0 must have length n and t must be >= 0")
    table = kernel_table(n)
    start = table.states.index(x0)
    *_, v = _evolve_scaled(table, start, t)
    scale = table.denominator ** t
    return DistributionVector(table.states, tuple(Fraction(int(a), scale) for a in v))


def exact_tv_curve_from(n: int, x0: Sequence[int], t_max: int) -> list[Fraction]:
    """``||K^t(x0, .) - pi||`` for ``t = 0..t_max`` by direct evolution."""
    _check_full_cap(n)
    x0 = check_parking_function(x0)
    table = kernel_table(n)
    pi_num = [stabilizer_order(y) for y in table.states]
    pi_den = math.factorial(n) * catalan(n)
    out = []
    scale = 1
    for v in _evolve_scaled(table, table.states.index(x0), t_max):
        num = sum(abs(int(a) * pi_den - scale * b) for a, b in zip(v, pi_num))
        out.append(Fraction(num, 2 * scale * pi_den))
        scale *= table.denominator
    return out


# ---------------------------------------------------------------------------
# Exact worst-case distance via the group-element marginal
# ---------------------------------------------------------------------------
#
# The chain alternates x -> sigma -> y. For t >= 1,
#     K^t(x, .) = A(x, .) (B A)^(t-1) B,
# with A(x, g) = 1/|G_x| on the stabilizer and B(g, y) = 1/|X_g| on the
# fixed set. Everything is equivariant under the stabilizer H of the start
# x, so the sigma-marginal can be lumped over H-conjugacy classes of S_n
# and the y-marginal over H-orbits of PF_n (which are the fibres of the
# density matrix with x). Distances are unchanged by either lumping, since
# the exact distribution is constant on every class.


@dataclass
class _GroupData:
    n: int
    perms: tuple[Permutation, ...]
    pindex: dict
    states: tuple[Word, ...]
    fixed: list[list[int]]  # state indices fixed by each perm
    ba: np.ndarray  # object (P, P), scaled by n! (n+1)^(n-1)
    ba_denom: int
    b_denom: int
    pi_num: list[int]  # pi(y) * n! C_n


@lru_cache(maxsize=4)
def _group_data(n: int) -> _GroupData:
    perms = tuple(all_permutations(n))
    pindex = {g: i for i, g in enumerate(perms)}
    states = tuple(enumerate_pf(n))
    k = n + 1
    fixed = [[j for j, y in enumerate(states) if g.fixes(y)] for g in perms]
    stab: list[list[int]] = [[] for _ in states]
    for gi, ys in enumerate(fixed):
        for j in ys:
            stab[j].append(gi)
    ba_denom = math.factorial(n) * k ** (n - 1)
    ba = np.zeros((len(perms), len(perms)), dtype=object)
    for gi, ys in enumerate(fixed):
        # 1/|X_g| * 1/|G_y| scaled by ba_denom
        xg = len(ys)
        for j in ys:
            w = ba_denom // (xg * len(stab[j]))
            for hi in stab[j]:
                ba[gi, hi] += w
    pi_num = [stabilizer_order(y) for y in states]
    return _GroupData(n, perms, pindex, states, fixed, ba, ba_denom, k ** (n - 1), pi_num)


def _start_tv_curve(data: _GroupData, x: Word, t_max: int) -> list[Fraction]:
    n = data.n
    pi_den = math.factorial(n) * catalan(n)
    stab = [g for g in data.perms if g.fixes(x)]
    # H-orbits of states: fibres of the pairing with x
    cls_of: dict[tuple, int] = {}
    state_cls = []
    for y in data.states:
        key = tuple(sorted(zip(x, y)))
        state_cls.append(cls_of.setdefault(key, len(cls_of)))
    m = len(cls_of)
    cls_pi = [0] * m
    for j, c in enumerate(state_cls):
        cls_pi[c] += data.pi_num[j]
    # H-conjugacy classes of group elements
    inverses = [h.inverse() for h in stab]
    conj_of = [-1] * len(data.perms)
    reps = []
    for gi, g in enumerate(data.perms):
        if conj_of[gi] >= 0:
            continue
        cid = len(reps)
        reps.append(gi)
        for h, hinv in zip(stab, inverses):
            conj_of[data.pindex[h * g * hinv]] = cid
    q = len(reps)
    conj_idx = np.array(conj_of)
    lumped_ba = np.zeros((q, q), dtype=object)
    for a, gi in enumerate(reps):
        row = data.ba[gi]
        for hi in np.nonzero(row)[0]:
            lumped_ba[a, conj_idx[hi]] += row[hi]
    # B(g, class) scaled by (n+1)^(n-1)
    to_cls = np.zeros((q, m), dtype=object)
    for a, gi in enumerate(reps):
        ys = data.fixed[gi]
        w = data.b_denom // len(ys)
        for j in ys:
            to_cls[a, state_cls[j]] += w
    # sigma-marginal at step 1, scaled by |H|
    w_vec = np.zeros(q, dtype=object)
    for h in stab:
        w_vec[conj_of[data.pindex[h]]] += 1

    out = []
    start_cls = state_cls[data.states.index(x)]
    # t = 0: point mass
    num = sum(abs((pi_den if c == start_cls else 0) - cls_pi[c]) for c in range(m))
    out.append(Fraction(num, 2 * pi_den))
    scale = len(stab) * data.b_denom  # masses at t=1 carry this factor
    for t in range(1, t_max + 1):
        if t > 1:
            w_vec = w_vec.dot(lumped_ba)
            scale *= data.ba_denom
        masses = w_vec.dot(to_cls)
        num = sum(abs(int(masses[c]) * pi_den - scale * cls_pi[c]) for c in range(m))
        out.append(Fraction(num, 2 * scale * pi_den))
    return out


def worst_case_tv_curve(n: int, t_max: int) -> list[Fraction]:
    """``d(t) = max_x ||K^t(x, .) - pi||`` exactly, for ``t = 0..t_max`` (``n <= 5``).

    The distance from ``x`` depends only on the orbit of ``x``, so the
    maximum runs over increasing parking functions.
    """
    _check_full_cap(n)
    if t_max < 0:
        raise InvalidInputError("t_max must be >= 0")
    data = _group_data(n)
    worst = [Fraction(0)] * (t_max + 1)
    for x in enumerate_ipf(n):
        curve = _start_tv_curve(data, x, t_max)
        worst = [max(a, b) for a, b in zip(worst, curve)]
    return worst


def worst_case_tv(n: int, t: int) -> Fraction:
    return worst_case_tv_curve(n, t)[t]


# ---------------------------------------------------------------------------
# The proven bound
# ---------------------------------------------------------------------------


def theoretical_bound(n: int, t: int) -> float:
    """``n (1 - 1/(n+1))^t``."""
    if n < 1 or t < 0:
        raise InvalidInputError("need n >= 1 and t >= 0")
    return n * (n / (n + 1)) ** t


def mixing_time_bound(n: int, eps: float) -> int:
    """``ceil((n+1) log(n/eps))``, clipped below at 0."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if not 0 < eps < 1:
        raise InvalidInputError("eps must lie in (0, 1)")
    return max(0, math.ceil((n + 1) * math.log(n / eps)))


@dataclass
class TVCurve:
    n: int
    start: str
    rows: list[tuple[int, Fraction, float]] = field(default_factory=list)

    def to_csv(self, exact: bool = True) -> str:
        header = "t,tv,bound" + (",tv_exact" if exact else "")
        lines = [header]
        for t, tv, bound in self.rows:
            line = f"{t},{float(tv):.12f},{bound:.12f}"
            if exact:
                line += f",{format_rational(tv)}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    def violations(self) -> list[int]:
        return [t for t, tv, bound in self.rows if round_up(tv) > bound]


def tv_curve(n: int, t_max: int) -> TVCurve:
    curve = TVCurve(n, "worst")
    for t, tv in enumerate(worst_case_tv_curve(n, t_max)):
        curve.rows.append((t, tv, theoretical_bound(n, t)))
    return curve


# ---------------------------------------------------------------------------
# Orbit (lumped) distributions
# ---------------------------------------------------------------------------


def lump(dist: DistributionVector) -> DistributionVector:
    """Push a distribution on PF_n forward to increasing representatives."""
    n = len(dist.space[0])
    space = tuple(enumerate_ipf(n))
    idx = {u: i for i, u in enumerate(space)}
    zero = Fraction(0) if dist.exact else 0.0
    masses = [zero] * len(space)
    for x, p in zip(dist.space, dist.masses):
        masses[idx[tuple(sorted(x))]] += p
    return DistributionVector(space, tuple(masses), dist.exact)


@lru_cache(maxsize=4)
def _lumped_matrix(n: int):
    states, rows = lumped_kernel_matrix(n)
    return states, rows


def exact_orbit_distribution_at_time(n: int, u0: Sequence[int], t: int) -> DistributionVector:
    """Law of the increasing rearrangement after ``t`` steps from the orbit of ``u0`` (``n <= 8``)."""
    if n > EXACT_LUMPED_CAP:
        raise ResourceLimitError(f"exact lumped evolution capped at n={EXACT_LUMPED_CAP}; got {n}")
    return exact_orbit_curve(n, u0, t)[-1]


def exact_orbit_curve(n: int, u0: Sequence[int], t_max: int) -> list[DistributionVector]:
    if n > EXACT_LUMPED_CAP:
        raise ResourceLimitError(f"exact lumped evolution capped at n={EXACT_LUMPED_CAP}; got {n}")
    states, rows = _lumped_matrix(n)
    u0 = tuple(sorted(check_parking_function(u0)))
    v = [Fraction(int(s == u0)) for s in states]
    out = [DistributionVector(states, tuple(v))]
    for _ in range(t_max):
        v = [sum((v[i] * rows[i][j] for i in range(len(states)) if v[i]), Fraction(0)) for j in range(len(states))]
        out.append(DistributionVector(states, tuple(v)))
    return out


def empirical_orbit_distribution(
    n: int,
    t: int,
    replicas: int,
    seed: int,
    start: Sequence[int] | None = None,
    jobs: int = 1,
) -> DistributionVector:
    """Normalized counts of increasing rearrangements of ``replicas`` independent chains."""
    start = tuple(range(1, n + 1)) if start is None else tuple(start)
    space = tuple(enumerate_ipf(n))
    idx = {u: i for i, u in enumerate(space)}
    finals = np.sort(run_replicas(start, t, replicas, seed, jobs=jobs), axis=1)
    counts = np.zeros(len(space), dtype=np.int64)
    for row in finals:
        counts[idx[tuple(int(v) for v in row)]] += 1
    return DistributionVector(space, tuple(float(c) / replicas for c in counts), exact=False)


def tv_to_uniform(dist: DistributionVector) -> float:
    return float(total_variation(dist, DistributionVector.uniform(dist.space).as_float()))


def noise_budget(states: int, replicas: int) -> float:
    """Typical TV between an empirical law and its target: ``sqrt(states / replicas) / 2``."""
    return math.sqrt(states / replicas) / 2


def empirical_mixing_time(
    n: int,
    eps: float,
    replicas: int | None = None,
    seed: int | None = None,
    t_max: int | None = None,
) -> int | None:
    """First ``t`` at which the orbit law is within ``eps`` of uniform.

    With ``replicas=None`` the orbit laws are exact (lumped kernel, every
    increasing start, worst case taken). Otherwise ``replicas`` chains are
    run from ``(1, ..., 1)``. Returns None if ``t_max`` (default: twice the
    proven bound) is reached first.
    """
    if not 0 < eps < 1:
        raise InvalidInputError("eps must lie in (0, 1)")
    t_max = 2 * mixing_time_bound(n, eps) + 1 if t_max is None else t_max
    if n == 1:
        return 0
    if replicas is None:
        if n > EXACT_LUMPED_CAP:
            raise ResourceLimitError(f"exact lumped evolution capped at n={EXACT_LUMPED_CAP}; got {n}")
        space, rows = _lumped_matrix(n)
        c = len(space)
        target = Fraction(1, c)
        # row u of `power` is the orbit law at time t started from u
        power = [[Fraction(int(i == j)) for j in range(c)] for i in range(c)]
        for t in range(t_max + 1):
            if max(sum(abs(p - target) for p in row) / 2 for row in power) <= eps:
                return t
            power = [
                [sum((row[m] * rows[m][j] for m in range(c) if row[m]), Fraction(0)) for j in range(c)]
                for row in power
            ]
        return None
    seed = rng_mod.fresh_seed() if seed is None else seed
    start = (1,) * n
    space = tuple(enumerate_ipf(n))
    idx = {u: i for i, u in enumerate(space)}
    states = np.tile(np.asarray(start), (replicas, 1))
    gens = [(rng_mod.stream(seed, b), count) for b, count in rng_mod.batches(replicas)]
    for t in range(t_max + 1):
        counts = np.zeros(len(space))
        for row in np.sort(states, axis=1):
            counts[idx[tuple(int(v) for v in row)]] += 1
        if 0.5 * np.abs(counts / replicas - 1 / len(space)).sum() <= eps:
            return t
        pieces = []
        offset = 0
        for gen, count in gens:
            pieces.append(step_batch(states[offset:offset + count], gen))
            offset += count
        states = np.concatenate(pieces, axis=0)
    return None


def metadata(**fields) -> dict:
    from . import __version__

    out = {"rng_id": rng_mod.RNG_ID, "version": __version__}
    out.update(fields)
    if isinstance(out.get("start_state"), tuple):
        out["start_state"] = format_word(out["start_state"])
    return out
