"""Named identity suites, each checked exhaustively up to a size ``n_max``.

Used by the ``verify`` subcommand; every check compares a closed form with
an independent enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import oracles
from .bijections import (
    act_on_labeled_dyck,
    dyck_to_ipf,
    dyck_to_triangulation,
    ipf_to_dyck,
    labeled_dyck_to_pf,
    pf_to_labeled_dyck,
    triangulation_to_dyck,
)
from .bose_einstein import be_kernel, be_orbit_count, be_stationary, parking_image, quotient_kernel, shift
from .burnside import kernel, lumped_kernel, stationary
from .combinatorics import (
    catalan,
    enumerate_ipf,
    enumerate_pf,
    enumerate_words,
    pollak_representative,
)


@dataclass
class CheckResult:
    suite: str
    n: int
    identity: str
    passed: bool

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.suite:<12} n={self.n}  {self.identity}"


def _counts(n: int) -> Iterator[CheckResult]:
    yield CheckResult("counts", n, "#parking functions = (n+1)^(n-1)", len(enumerate_pf(n)) == (n + 1) ** (n - 1))
    yield CheckResult("counts", n, "#increasing parking functions = Catalan(n)", len(enumerate_ipf(n)) == catalan(n))


def _pollak(n: int) -> Iterator[CheckResult]:
    shifts = oracles.parking_by_shift_search(n)
    unique = all(len(cs) == 1 for cs in shifts.values())
    agree = all(pollak_representative(w)[1] == cs[0] for w, cs in shifts.items() if len(cs) == 1)
    yield CheckResult("pollak", n, "each cyclic-shift orbit of [n+1]^n holds one parking function", unique)
    yield CheckResult("pollak", n, "circular-parking shift agrees with exhaustive search", agree)


def _kernel(n: int) -> Iterator[CheckResult]:
    states = enumerate_pf(n)
    rows = {x: {y: kernel(x, y) for y in states} for x in states}
    yield CheckResult(
        "kernel", n, "closed-form kernel = stabilizer/fixed-set sum",
        all(rows[x][y] == oracles.burnside_kernel_by_definition(x, y) for x in states for y in states),
    )
    yield CheckResult("kernel", n, "rows sum to 1", all(sum(r.values()) == 1 for r in rows.values()))
    pi = {x: stationary(x) for x in states}
    yield CheckResult(
        "kernel", n, "detailed balance pi(x)K(x,y) = pi(y)K(y,x)",
        all(pi[x] * rows[x][y] == pi[y] * rows[y][x] for x in states for y in states),
    )
    yield CheckResult(
        "kernel", n, "pi K = pi",
        all(sum(pi[x] * rows[x][y] for x in states) == pi[y] for y in states),
    )


def _lumped(n: int) -> Iterator[CheckResult]:
    ipf = enumerate_ipf(n)
    states = enumerate_pf(n)
    orbit = {u: [z for z in states if tuple(sorted(z)) == u] for u in ipf}
    ok = True
    for x in states:
        u = tuple(sorted(x))
        for v in ipf:
            if lumped_kernel(u, v) != sum((kernel(x, z) for z in orbit[v]), Fraction(0)):
                ok = False
    yield CheckResult("lumped", n, "orbit kernel = sum of kernel over target orbit, any representative", ok)
    uniform = Fraction(1, catalan(n))
    yield CheckResult(
        "lumped", n, "uniform is stationary for the orbit kernel",
        all(sum(uniform * lumped_kernel(u, v) for u in ipf) == uniform for v in ipf),
    )


def _be_transfer(n: int) -> Iterator[CheckResult]:
    k = n + 1
    states = enumerate_pf(n)
    words = list(enumerate_words(n, k))
    yield CheckResult(
        "be-transfer", n, "K = (n+1) K_BE on parking functions",
        all(kernel(x, y) == k * be_kernel(x, y, k) for x in states for y in states),
    )
    yield CheckResult(
        "be-transfer", n, "K_BE invariant under global shifts",
        all(
            be_kernel(shift(x, c, k), y, k) == be_kernel(x, shift(y, c, k), k) == be_kernel(x, y, k)
            for x in words for y in words for c in range(k)
        ),
    )
    yield CheckResult(
        "be-transfer", n, "shift-orbit sum of K_BE = K on parking images",
        all(quotient_kernel(x, y) == kernel(parking_image(x), parking_image(y)) for x in words for y in words),
    )
    yield CheckResult(
        "be-transfer", n, "k pi_BE(y) = pi(parking image of y)",
        all(k * be_stationary(y, k) == stationary(parking_image(y)) for y in words),
    )
    yield CheckResult("be-transfer", n, "#orbits of [n+1]^n = (n+1) Catalan(n)", be_orbit_count(n, k) == k * catalan(n))


def _bijections(n: int) -> Iterator[CheckResult]:
    ipf = enumerate_ipf(n)
    yield CheckResult(
        "bijections", n, "increasing parking functions <-> Dyck paths round trip",
        all(dyck_to_ipf(ipf_to_dyck(u)) == u for u in ipf),
    )
    states = enumerate_pf(n)
    yield CheckResult(
        "bijections", n, "parking functions <-> labeled Dyck paths round trip",
        all(labeled_dyck_to_pf(pf_to_labeled_dyck(x)) == x for x in states),
    )
    group = oracles.symmetric_group(n)
    yield CheckResult(
        "bijections", n, "F(sigma x) = sigma . F(x)",
        all(pf_to_labeled_dyck(g.act(x)) == act_on_labeled_dyck(g, pf_to_labeled_dyck(x)) for g in group for x in states),
    )
    tris = [dyck_to_triangulation(ipf_to_dyck(u)) for u in ipf]
    yield CheckResult("bijections", n, "Dyck -> triangulation injective", len(set(tris)) == catalan(n))
    yield CheckResult(
        "bijections", n, "triangulation -> Dyck inverts",
        all(dyck_to_ipf(triangulation_to_dyck(t)) == u for t, u in zip(tris, ipf)),
    )


SUITES: dict[str, Callable[[int], Iterator[CheckResult]]] = {
    "counts": _counts,
    "pollak": _pollak,
    "kernel": _kernel,
    "lumped": _lumped,
    "be-transfer": _be_transfer,
    "bijections": _bijections,
}


def run_suite(name: str, n_max: int) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    if any(s not in SUITES for s in names):
        raise KeyError(name)
    return [res for s in names for n in range(1, n_max + 1) for res in SUITES[s](n)]

