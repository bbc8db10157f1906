from collections import Counter

import numpy as np
import pytest

from catalan_burnside import oracles
from catalan_burnside.bijections import (
    DyckPath,
    LabeledDyckPath,
    Triangulation,
    act_on_labeled_dyck,
    crosses,
    dyck_to_ipf,
    dyck_to_triangulation,
    ipf_to_dyck,
    labeled_dyck_to_pf,
    outcome_map,
    pf_to_labeled_dyck,
    sample_triangulation,
    sample_triangulations,
    triangulation_to_dyck,
)
from catalan_burnside.combinatorics import Permutation, catalan, enumerate_ipf, enumerate_pf, pollak_representative
from catalan_burnside.diagnostics import noise_budget
from catalan_burnside.errors import InvalidInputError

EX_U = (1, 1, 3, 4, 4)
EX_X = (4, 1, 3, 4, 1)
SIGMA = Permutation.from_cycles([(1, 5, 3), (2, 4)], 5)


def random_pf(n, rng):
    return pollak_representative(tuple(int(v) for v in rng.integers(1, n + 2, size=n)))[0]


def test_ipf_dyck_examples():
    assert str(ipf_to_dyck(EX_U)) == "NNEENENNEE"
    assert dyck_to_ipf("NNEENENNEE") == EX_U
    for n in range(1, 6):
        assert str(ipf_to_dyck((1,) * n)) == "N" * n + "E" * n
        assert str(ipf_to_dyck(tuple(range(1, n + 1)))) == "NE" * n
        assert dyck_to_ipf("N" * n + "E" * n) == (1,) * n
        assert dyck_to_ipf("NE" * n) == tuple(range(1, n + 1))


def test_ipf_dyck_round_trip():
    for n in range(1, 9):
        paths = set()
        for u in enumerate_ipf(n):
            d = ipf_to_dyck(u)
            assert dyck_to_ipf(d) == u
            paths.add(d)
        assert len(paths) == catalan(n)


@pytest.mark.parametrize("bad", ["", "EN", "NNE", "NXEE", "NEEN"])
def test_invalid_dyck(bad):
    with pytest.raises(InvalidInputError):
        DyckPath(bad)


def test_ipf_to_dyck_requires_sorted():
    with pytest.raises(InvalidInputError):
        ipf_to_dyck((2, 1))


def test_labeled_worked_example():
    ld = pf_to_labeled_dyck(EX_X)
    assert str(ld.path) == "NNEENENNEE"
    assert ld.labels == ((2, 5), (), (3,), (1, 4), ())
    assert str(ld) == "NNEENENNEE | [2,5];[3];[1,4]"
    assert LabeledDyckPath.parse(str(ld)) == ld
    assert labeled_dyck_to_pf(ld) == EX_X


def test_labeled_identity_word():
    for n in range(1, 7):
        ld = pf_to_labeled_dyck(tuple(range(1, n + 1)))
        assert str(ld.path) == "NE" * n
        assert ld.labels == tuple((i,) for i in range(1, n + 1))
        assert labeled_dyck_to_pf(ld) == tuple(range(1, n + 1))


def test_labeled_round_trip_exhaustive():
    for n in range(1, 6):
        seen = set()
        for x in enumerate_pf(n):
            ld = pf_to_labeled_dyck(x)
            assert labeled_dyck_to_pf(ld) == x
            seen.add(ld)
        assert len(seen) == (n + 1) ** (n - 1)


def test_labeled_round_trip_random_n8():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        x = random_pf(8, rng)
        ld = pf_to_labeled_dyck(x)
        assert pf_to_labeled_dyck(labeled_dyck_to_pf(ld)) == ld


def test_labeled_validation():
    path = DyckPath("NNEE")
    with pytest.raises(InvalidInputError):
        LabeledDyckPath(path, ((2, 1), ()))
    with pytest.raises(InvalidInputError):
        LabeledDyckPath(path, ((1,), (2,)))
    with pytest.raises(InvalidInputError):
        LabeledDyckPath(path, ((1, 1), ()))


def test_action_worked_example():
    ld = act_on_labeled_dyck(SIGMA, pf_to_labeled_dyck(EX_X))
    assert ld.labels == ((3, 4), (), (1,), (2, 5), ())
    assert labeled_dyck_to_pf(ld) == (3, 4, 1, 1, 4)
    assert SIGMA.act(EX_X) == (3, 4, 1, 1, 4)


def test_action_identity_and_path():
    for x in enumerate_pf(4):
        ld = pf_to_labeled_dyck(x)
        assert act_on_labeled_dyck(Permutation.identity(4), ld) == ld
        for g in oracles.symmetric_group(4):
            assert act_on_labeled_dyck(g, ld).path == ld.path


def test_equivariance_exhaustive():
    for n in range(1, 5):
        for g in oracles.symmetric_group(n):
            for x in enumerate_pf(n):
                assert pf_to_labeled_dyck(g.act(x)) == act_on_labeled_dyck(g, pf_to_labeled_dyck(x))


def test_equivariance_and_action_law_random_n8():
    rng = np.random.default_rng(1)
    for _ in range(10_000):
        g = Permutation(rng.permutation(8) + 1)
        h = Permutation(rng.permutation(8) + 1)
        x = random_pf(8, rng)
        ld = pf_to_labeled_dyck(x)
        assert pf_to_labeled_dyck(g.act(x)) == act_on_labeled_dyck(g, ld)
        assert act_on_labeled_dyck(g * h, ld) == act_on_labeled_dyck(g, act_on_labeled_dyck(h, ld))


def test_outcome_map():
    assert outcome_map(EX_X) == Permutation((2, 5, 3, 1, 4))
    for n in range(1, 6):
        assert outcome_map(tuple(range(1, n + 1))) == Permutation.identity(n)
        for x in enumerate_pf(n):
            assert sorted(outcome_map(x).images) == list(range(1, n + 1))


def test_triangulation_small():
    assert dyck_to_triangulation("NE").diagonals == frozenset()
    assert dyck_to_triangulation("NENE").diagonals == {(0, 2)}
    assert dyck_to_triangulation("NNEE").diagonals == {(1, 3)}
    assert str(triangulation_to_dyck(Triangulation(1, frozenset()))) == "NE"


def test_triangulation_bijective():
    for n in range(1, 7):
        images = set()
        for u in enumerate_ipf(n):
            d = ipf_to_dyck(u)
            t = dyck_to_triangulation(d)
            assert len(t.diagonals) == n - 1
            diags = sorted(t.diagonals)
            assert not any(crosses(a, b) for i, a in enumerate(diags) for b in diags[i + 1:])
            assert triangulation_to_dyck(t) == d
            images.add(t)
        assert len(images) == catalan(n)


def test_fan_round_trip():
    for n in range(2, 9):
        fan = Triangulation(n, frozenset((0, j) for j in range(2, n + 1)))
        assert dyck_to_triangulation(triangulation_to_dyck(fan)) == fan


def test_triangulation_serialization():
    t = dyck_to_triangulation("NNENEE")
    assert Triangulation.parse(str(t)) == t
    assert str(dyck_to_triangulation("NENE")) == "[[0,2]]"


@pytest.mark.parametrize(
    "n, diags",
    [(2, []), (2, [(0, 2), (1, 3)]), (3, [(0, 1), (0, 2)]), (2, [(0, 3)]), (3, [(0, 2), (1, 3)])],
)
def test_triangulation_validation(n, diags):
    with pytest.raises(InvalidInputError):
        Triangulation(n, frozenset(diags))


def test_sample_triangulation_trivial_and_deterministic():
    tri = Triangulation(1, frozenset())
    assert all(sample_triangulation(1, 5, seed=s) == tri for s in range(10))
    assert sample_triangulations(5, 20, 500, seed=3) == sample_triangulations(5, 20, 500, seed=3)


def test_sample_triangulation_uniform_n4():
    samples = sample_triangulations(4, 30, 100_000, seed=1)
    counts = Counter(samples)
    assert len(counts) == 14
    tv = 0.5 * sum(abs(c / 100_000 - 1 / 14) for c in counts.values())
    assert tv <= 0.02
    assert tv <= 4 * (1 - 1 / 5) ** 30 + 2 * noise_budget(14, 100_000)
