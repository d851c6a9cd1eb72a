"""Which modes carry the upper bound?

For lam_eps > 0 the subset potential V(P) = sum_{j in P} log f(lam_eps c_j)
is maximized by a symmetric block P* = [-k*, k*].  The exhaustive check
scores all 2^{2n+1} subsets; the census counts subsets by their distance
from P*.
"""
from roguewave.combinatorics import (
    census_rows, exhaustive_check, k_star, lambda_grid, optimal_set, partition_count, threshold_C,
)
from roguewave.spectrum import CoefficientProfile

print(f"threshold C = f^-1(1) = {threshold_C():.11f}")
profile = CoefficientProfile(0.3)
n = 6
for lam in lambda_grid(profile, n, size=5, seed=1):
    rep = exhaustive_check(profile, lam, n)
    print(f"lam_eps = {lam:8.3f}: k* = {k_star(profile, lam)}, P* = {optimal_set(profile, lam, n).members}, "
          f"brute force agrees: {rep.argmax_matches}, gap bound violations: {rep.violations}")

print("\nlevel sets for n = 8, k* = 3 (count vs p(m) 4^{sqrt(8m)+1}):")
for m, c, bound, ratio in census_rows(8, 3)[:8]:
    print(f"  m = {m:2d}: {c:5d} subsets, bound {bound:10.1f}, ratio {ratio:.3f}")
# The m = 0 level holds 16 subsets (free toggles of +-k* and +-(k*+1)) against a bound of 4.

print("\np(100) =", partition_count(100))
