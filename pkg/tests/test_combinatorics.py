import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from roguewave.combinatorics import (
    MAX_CENSUS_N, census_rows, exhaustive_check, f, f_inverse, gap_G, k_star, lambda_grid, lemma_bound,
    level_set_count, level_set_count_gf, optimal_set, partition_count, partitions_brute, potential_V,
    potential_V_expanded, subset_norm, subset_state, subset_sums, threshold_C,
)
from roguewave.spectrum import GAUSSIAN, CoefficientProfile

PROFILE = CoefficientProfile(1.0)


def test_threshold_constant():
    ref = brentq(lambda r: np.sqrt(np.pi) * r * np.exp(r * r / 4) - 1, 0.1, 1.0, xtol=1e-15)
    assert threshold_C() == pytest.approx(ref, abs=1e-13)
    assert threshold_C() == pytest.approx(0.52642529804, abs=1e-10)
    assert f(threshold_C()) == pytest.approx(1.0, rel=1e-13)


def test_f_inverse():
    for y in (1e-5, 0.3, 1.0, 7.0, 1e6):
        assert f(f_inverse(y)) == pytest.approx(y, rel=1e-12)
    with pytest.raises(ValueError):
        f_inverse(0.0)


def test_partition_frozen():
    assert [partition_count(m) for m in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert partition_count(100) == 190569292
    assert partition_count(1000) == 24061467864032622473692149727991
    with pytest.raises(ValueError):
        partition_count(10_001)


def test_partition_brute_force():
    assert all(partition_count(m) == partitions_brute(m) for m in range(41))


def test_k_star_and_sentinel():
    C = threshold_C()
    assert k_star(PROFILE, 0.9 * C) == -1
    assert k_star(PROFILE, 1.1 * C) == 0
    assert k_star(PROFILE, 1.01 * C * np.e ** 3) == 3
    assert optimal_set(PROFILE, 0.9 * C, 4).members == ()


def test_potential_forms_agree():
    P = (-2, 0, 1, 5)
    assert potential_V(P, PROFILE, 3.3) == pytest.approx(potential_V_expanded(P, PROFILE, 3.3), rel=1e-13)
    assert potential_V((), PROFILE, 3.3) == 0.0


def test_subset_norm():
    assert subset_norm(range(-2, 3), 2) == 0
    assert subset_norm((-3, -2, -1, 0, 1, 2, 3), 2) == 0  # +-(k*+1) are free
    assert subset_norm((-1, 0, 1), 2) == 0  # dropping +-k* costs ||2| - 2| = 0
    assert subset_norm((0, 5), 2, n=6) == 1 + 1 + 3  # missing +-1, extra 5
    assert subset_norm((0, 3), -1) == 1 + 4


def test_subset_sums():
    assert list(subset_sums([1, 2, 4])) == list(range(8))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["exponential", GAUSSIAN]), st.floats(0.1, 2.0), st.integers(1, 4),
       st.floats(0.0, 1.0))
def test_optimal_set_is_argmax(kind, b, n, u):
    p = CoefficientProfile(b, kind)
    C = threshold_C()
    lo, hi = np.log(C / p.c_of(0)), np.log(C / p.c_of(n + 2))
    lam = float(np.exp(lo + u * (hi - lo)))
    window = range(-n, n + 1)
    best = max(potential_V(P, p, lam) for r in range(2 * n + 2) for P in itertools.combinations(window, r))
    assert optimal_set(p, lam, n).v_value == pytest.approx(best, abs=1e-9)


def test_gap_bound_small_scan():
    for kind in ("exponential", GAUSSIAN):
        p = CoefficientProfile(0.3, kind)
        for n in (1, 3, 5):
            for lam in lambda_grid(p, n, 6, seed=n):
                rep = exhaustive_check(p, lam, n)
                assert rep.argmax_matches and rep.bound_holds and rep.worst_excess <= 1e-12


def test_gap_bound_fails_below_threshold():
    # lam_eps < C/c_0: P* is empty and P = {0} gains V > -b/2 ||{0}|| = -b/2
    lam = 0.9 * threshold_C()
    assert gap_G((0,), PROFILE, lam, 2) > -0.5 * PROFILE.b * subset_norm((0,), -1)
    assert not exhaustive_check(PROFILE, lam, 2).bound_holds


def test_subset_state():
    s = subset_state((0, 1), PROFILE, 10.0, 3)
    assert s.k_star == k_star(PROFILE, 10.0) == 2
    assert s.norm_value == subset_norm((0, 1), 2, 3)


def test_lambda_grid_covers_all_k_star():
    n = 5
    grid = lambda_grid(PROFILE, n, 200, seed=1)
    assert {k_star(PROFILE, l) for l in grid} == set(range(0, n + 2))


@pytest.mark.parametrize("n", [0, 1, 4, 7])
def test_census_matches_generating_function(n):
    for ks in range(-1, n + 2):
        assert level_set_count(n, ks) == level_set_count_gf(n, ks)
        assert sum(level_set_count(n, ks).values()) == 2 ** (2 * n + 1)


def test_census_by_enumeration():
    n, ks = 3, 1
    counts = {}
    for r in range(2 * n + 2):
        for P in itertools.combinations(range(-n, n + 1), r):
            m = subset_norm(P, ks, n)
            counts[m] = counts.get(m, 0) + 1
    assert counts == level_set_count(n, ks)


def test_census_size_limit():
    with pytest.raises(ValueError):
        level_set_count(MAX_CENSUS_N + 1, 0)


def test_zero_level_multiplicity():
    # indices with weight zero in ||.|| (|j| = k* and |j| = k*+1) can be toggled freely
    n = 6
    assert level_set_count(n, 0)[0] == 8
    assert all(level_set_count(n, ks)[0] == 16 for ks in range(1, n))
    assert level_set_count(n, n)[0] == 4
    assert lemma_bound(0) == 4


def test_census_bound_with_zero_level_factor():
    # every level respects 4 p(m) 4^{sqrt(8m)+1}, the extra 4 covering the free toggles
    for n in range(0, 11):
        for ks in range(0, n + 2):
            for m, c, bound, _ in census_rows(n, ks):
                assert c <= 4 * bound
                if m > 0:
                    assert c <= bound
