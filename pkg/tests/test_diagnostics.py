import math
from fractions import Fraction

import pytest

from catalan_burnside.burnside import kernel
from catalan_burnside.combinatorics import enumerate_ipf, enumerate_pf
from catalan_burnside.diagnostics import (
    DistributionVector,
    empirical_mixing_time,
    empirical_orbit_distribution,
    exact_distribution_at_time,
    exact_orbit_distribution_at_time,
    exact_tv_curve_from,
    lump,
    metadata,
    mixing_time_bound,
    noise_budget,
    round_up,
    stationary_distribution,
    theoretical_bound,
    total_variation,
    tv_curve,
    tv_to_uniform,
    worst_case_tv,
    worst_case_tv_curve,
)
from catalan_burnside.errors import InvalidInputError, ResourceLimitError


def test_total_variation_examples():
    space = tuple(enumerate_pf(2))
    p = DistributionVector.point_mass(space, (1, 1))
    assert total_variation(p, p) == 0
    assert total_variation(p, DistributionVector.point_mass(space, (1, 2))) == 1
    row = DistributionVector(space, tuple(kernel((1, 1), y) for y in space))
    assert total_variation(row, stationary_distribution(2)) == Fraction(1, 6)


def test_distribution_validation():
    with pytest.raises(InvalidInputError):
        DistributionVector(((1,), (2,)), (Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(InvalidInputError):
        DistributionVector(((1,), (2,)), (1.5, -0.5), exact=False)
    DistributionVector(((1,), (2,)), (0.3, 0.7), exact=False)


def test_exact_distribution():
    assert exact_distribution_at_time(3, (2, 1, 1), 0) == DistributionVector.point_mass(enumerate_pf(3), (2, 1, 1))
    d = exact_distribution_at_time(2, (1, 1), 1)
    assert d.masses == (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))
    for t in (0, 1, 7, 40, 100):
        assert sum(exact_distribution_at_time(3, (1, 2, 3), t).masses) == 1


def test_theoretical_bound():
    assert theoretical_bound(4, 0) == 4
    assert theoretical_bound(5, 38) == pytest.approx(5 * (5 / 6) ** 38)
    assert 4.8e-3 < theoretical_bound(5, 38) < 5.0e-3
    vals = [theoretical_bound(5, t) for t in range(100)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_mixing_time_bound():
    assert mixing_time_bound(5, 0.01) == 38 == math.ceil(6 * math.log(500))
    assert mixing_time_bound(1, 0.5) == 2
    assert mixing_time_bound(4, 0.01) == 30
    ratios = [mixing_time_bound(n, 0.01) / ((n + 1) * math.log(n)) for n in range(10, 1001, 10)]
    assert max(ratios) <= 1 + math.log(100) / math.log(10) + 0.01


def test_worst_case_tv_examples():
    assert worst_case_tv(2, 0) == Fraction(3, 4)
    assert worst_case_tv(2, 1) == Fraction(1, 6)
    assert all(v == 0 for v in worst_case_tv_curve(1, 50))


def test_worst_case_matches_direct_evolution():
    for n in (2, 3, 4):
        direct = [exact_tv_curve_from(n, x, 12) for x in enumerate_pf(n)]
        expected = [max(c[t] for c in direct) for t in range(13)]
        assert worst_case_tv_curve(n, 12) == expected


def test_bound_domination_small():
    for n in range(1, 5):
        curve = tv_curve(n, 200)
        assert curve.violations() == []
        assert all(round_up(tv) <= b for _, tv, b in curve.rows)


def test_round_up():
    q = Fraction(1, 3)
    assert round_up(q) >= q
    assert Fraction(round_up(q)) >= q
    assert round_up(Fraction(1, 2)) == 0.5


def test_worst_case_cap():
    with pytest.raises(ResourceLimitError):
        worst_case_tv(6, 1)


def test_tv_curve_csv():
    text = tv_curve(2, 3).to_csv()
    lines = text.splitlines()
    assert lines[0] == "t,tv,bound,tv_exact"
    assert lines[1] == "0,0.750000000000,2.000000000000,3/4"
    assert len(lines) == 5
    assert tv_curve(2, 1).to_csv(exact=False).splitlines()[0] == "t,tv,bound"


def test_projection_contraction():
    for n in range(1, 5):
        pi = stationary_distribution(n)
        pi_bar = lump(pi)
        assert pi_bar == DistributionVector.uniform(enumerate_ipf(n))
        for x in enumerate_pf(n)[:: max(1, (n + 1) ** (n - 1) // 6)]:
            for t in range(0, 51, 5):
                p = exact_distribution_at_time(n, x, t)
                assert total_variation(lump(p), pi_bar) <= total_variation(p, pi)


def test_lumped_evolution_matches_full():
    for n in range(1, 5):
        for x in enumerate_pf(n)[:: max(1, (n + 1) ** (n - 1) // 5)]:
            for t in (0, 1, 3, 8):
                full = lump(exact_distribution_at_time(n, x, t))
                assert exact_orbit_distribution_at_time(n, tuple(sorted(x)), t) == full


def test_empirical_orbit_distribution():
    d = empirical_orbit_distribution(1, 5, 100, seed=0)
    assert d.masses == (1.0,)
    assert tv_to_uniform(d) == 0
    assert empirical_orbit_distribution(4, 10, 5000, seed=3) == empirical_orbit_distribution(4, 10, 5000, seed=3)


def test_empirical_noise_scaling():
    small = [tv_to_uniform(empirical_orbit_distribution(4, 30, 4000, seed=s)) for s in range(6)]
    large = [tv_to_uniform(empirical_orbit_distribution(4, 30, 8000, seed=s)) for s in range(6)]
    assert sum(large) <= sum(small) * 1.1


def test_empirical_uniformity_n5():
    d = empirical_orbit_distribution(5, 38, 100_000, seed=2024)
    assert tv_to_uniform(d) <= 0.02
    assert tv_to_uniform(d) <= theoretical_bound(5, 38) + 2 * noise_budget(42, 100_000)


def test_empirical_mixing_time():
    assert empirical_mixing_time(1, 0.3) == 0
    for n in range(2, 6):
        t = empirical_mixing_time(n, 0.25)
        assert t is not None and t <= mixing_time_bound(n, 0.25)
        assert empirical_mixing_time(n, 0.1) >= t
    sampled = empirical_mixing_time(4, 0.25, replicas=20_000, seed=5)
    assert sampled is not None and sampled <= mixing_time_bound(4, 0.25)


def test_empirical_mixing_time_rejects_eps():
    with pytest.raises(InvalidInputError):
        empirical_mixing_time(3, 0)


def test_metadata():
    m = metadata(n=3, t=5, replicas=10, seed=1, start_state=(1, 2, 3))
    assert m["start_state"] == "1,2,3"
    assert {"rng_id", "version", "seed"} <= set(m)
