"""Subset optimization behind the cumulant upper bound.

For a window [-n, n] and lam_eps > 0 the potential of a subset P is
V(P) = sum_{j in P} log f(lam_eps c_j) with f(r) = sqrt(pi) r e^{r^2/4}.
It is maximized by P* = {j : c_j > C/lam_eps} = [-k*, k*] where C = f^{-1}(1).
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import count

import numpy as np
from scipy.optimize import bisect

MAX_CENSUS_N = 14


def log_f(r):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return 0.5 * np.log(np.pi) + np.log(r) + 0.25 * r * r


def f(r):
    return np.exp(log_f(r))


def f_inverse(y, xtol=1e-14):
    """Solve f(r) = y for r > 0 by bisection on log f."""
    if not y > 0:
        raise ValueError("f maps onto (0, inf)")
    target = np.log(y)
    lo, hi = 1e-300, 1.0
    while log_f(hi) < target:
        hi *= 2.0
    return bisect(lambda r: float(log_f(r)) - target, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


@lru_cache(maxsize=None)
def threshold_C():
    return f_inverse(1.0)


def k_star(profile, lambda_eps):
    """Largest k with c_k > C/lambda_eps, or -1 when even c_0 fails."""
    cut = threshold_C() / lambda_eps
    if not profile.c_of(0) > cut:
        return -1
    k = 0
    while profile.c_of(k + 1) > cut:
        k += 1
    return k


def _window(n):
    return np.arange(-n, n + 1)


@dataclass(frozen=True)
class SubsetState:
    members: tuple
    n: int
    k_star: int
    v_value: float
    norm_value: int


def potential_V(P, profile, lambda_eps):
    """sum_{j in P} log f(lambda_eps c_j); zero for the empty set."""
    P = np.asarray(sorted(P), dtype=int)
    if P.size == 0:
        return 0.0
    return float(np.sum(log_f(lambda_eps * profile.c_of(P))))


def potential_V_expanded(P, profile, lambda_eps):
    """Same potential written out term by term."""
    P = np.asarray(sorted(P), dtype=int)
    c = profile.c_of(P)
    return float(0.5 * P.size * np.log(np.pi) + P.size * np.log(lambda_eps)
                 + np.sum(np.log(c)) + 0.25 * lambda_eps ** 2 * np.sum(c * c))


def subset_norm(P, k_star_value, n=None):
    """sum over (P ^ P*) minus {+-(k*+1)} of ||j| - k*|.

    With the empty-set sentinel k* = -1 the hat set is P itself.
    """
    P = set(int(j) for j in P)
    if k_star_value < 0:
        return int(sum(abs(j) + 1 for j in P))
    lim = k_star_value if n is None else min(k_star_value, n)
    star = set(range(-lim, lim + 1))
    hat = (P ^ star) - {k_star_value + 1, -(k_star_value + 1)}
    return int(sum(abs(abs(j) - k_star_value) for j in hat))


def optimal_set(profile, lambda_eps, n):
    if not lambda_eps > 0:
        raise ValueError("lambda_eps must be positive")
    ks = k_star(profile, lambda_eps)
    lim = min(ks, n)
    members = tuple(range(-lim, lim + 1)) if ks >= 0 else ()
    return SubsetState(members, n, ks, potential_V(members, profile, lambda_eps), 0)


def subset_state(P, profile, lambda_eps, n):
    ks = k_star(profile, lambda_eps)
    members = tuple(sorted(int(j) for j in P))
    return SubsetState(members, n, ks, potential_V(members, profile, lambda_eps), subset_norm(members, ks, n))


def gap_G(P, profile, lambda_eps, n):
    """V(P) - V(P*) inside the window [-n, n]."""
    return potential_V(P, profile, lambda_eps) - optimal_set(profile, lambda_eps, n).v_value


def norm_weights(n, ks):
    """Per-index contribution to ||P|| when the index lies in P ^ P*."""
    j = _window(n)
    if ks < 0:
        return np.abs(j) + 1
    w = np.abs(np.abs(j) - ks)
    w[np.abs(j) == ks + 1] = 0
    return w


def subset_sums(weights, dtype=None):
    """Value of sum_{i in S} w_i for every subset S, indexed by bitmask."""
    weights = np.asarray(weights)
    out = np.zeros(1, dtype=dtype or weights.dtype)
    for w in weights:
        out = np.concatenate((out, out + w))
    return out


def masks_to_members(mask, n):
    j = _window(n)
    return tuple(int(j[i]) for i in range(j.size) if (mask >> i) & 1)


@dataclass(frozen=True)
class ExhaustiveReport:
    n: int
    lambda_eps: float
    k_star: int
    argmax_matches: bool
    ties: int
    worst_excess: float
    worst_members: tuple
    violations: int

    @property
    def bound_holds(self):
        return self.violations == 0


def exhaustive_check(profile, lambda_eps, n, decay=None, tol=1e-12):
    """Compare optimal_set with a brute-force argmax and test G <= -(decay/2)||P||.

    Every one of the 2^{2n+1} subsets is scored.  ``decay`` defaults to the
    profile's b.  worst_excess is max over P of G(P) + (decay/2)||P||; the
    bound holds when it is <= 0.
    """
    decay = profile.b if decay is None else decay
    j = _window(n)
    lf = log_f(lambda_eps * profile.c_of(j))
    opt = optimal_set(profile, lambda_eps, n)
    in_star = np.isin(j, opt.members)
    star_mask = int(np.sum(1 << np.nonzero(in_star)[0]))
    # score Q = P ^ P* instead of P: G(P) = sum over Q of +-log f, which
    # avoids cancelling two huge V values when lambda_eps is large
    G_q = subset_sums(np.where(in_star, -lf, lf))
    norms_q = subset_sums(norm_weights(n, opt.k_star).astype(np.int32))
    best_q = int(np.argmax(G_q))
    ties = int(np.count_nonzero(G_q >= -tol)) - 1
    excess = G_q + 0.5 * decay * norms_q
    worst = int(np.argmax(excess))
    return ExhaustiveReport(n, float(lambda_eps), opt.k_star,
                            masks_to_members(best_q ^ star_mask, n) == opt.members, ties,
                            float(excess[worst]), masks_to_members(worst ^ star_mask, n),
                            int(np.count_nonzero(excess > tol)))


def lambda_grid(profile, n, size=24, seed=0):
    """Random lambda_eps values, log-uniform between C/c_0 and C/c_{n+2}.

    Covers every k* from 0 to n+1.
    """
    C = threshold_C()
    lo, hi = np.log(C / profile.c_of(0)), np.log(C / profile.c_of(n + 2))
    rng = np.random.default_rng(seed)
    return np.exp(np.sort(rng.uniform(lo, hi, size)))


class PartitionTable:
    """p(0..m_max) by Euler's pentagonal-number recurrence."""

    def __init__(self, m_max):
        p = [1] + [0] * m_max
        for m in range(1, m_max + 1):
            total = 0
            for i in count(1):
                g1 = i * (3 * i - 1) // 2
                if g1 > m:
                    break
                sign = 1 if i % 2 else -1
                total += sign * p[m - g1]
                g2 = i * (3 * i + 1) // 2
                if g2 <= m:
                    total += sign * p[m - g2]
            p[m] = total
        self.values = p

    def __getitem__(self, m):
        return self.values[m]


@lru_cache(maxsize=8)
def _table(m_max):
    return PartitionTable(m_max)


def partition_count(m):
    if m < 0 or m > 10_000:
        raise ValueError("partition_count covers 0 <= m <= 1e4")
    size = 64
    while size < m:
        size *= 2
    return _table(size)[m]


def partitions_brute(m, largest=None):
    """Count partitions of m by direct recursion over the largest part."""
    largest = m if largest is None else largest
    if m == 0:
        return 1
    return sum(partitions_brute(m - part, part) for part in range(min(m, largest), 0, -1))


def lemma_bound(m):
    """p(m) 4^{sqrt(8m)+1}."""
    return partition_count(m) * 4.0 ** (np.sqrt(8.0 * m) + 1.0)


def level_set_count(n, k_star_value):
    """Exhaustive census m -> #{P in [-n, n] : ||P|| = m}.

    P -> P ^ P* is a bijection of the subsets of the window, so scoring the
    symmetric differences directly visits every P exactly once.
    """
    if n > MAX_CENSUS_N:
        raise ValueError(f"census over 2^{2 * n + 1} subsets exceeds the n <= {MAX_CENSUS_N} budget")
    sums = subset_sums(norm_weights(n, k_star_value).astype(np.int16))
    counts = np.bincount(sums)
    return {m: int(c) for m, c in enumerate(counts) if c}


def level_set_count_gf(n, k_star_value):
    """Same census from the generating function prod_j (1 + x^{w_j})."""
    poly = np.array([1], dtype=object)
    for w in norm_weights(n, k_star_value):
        nxt = np.zeros(poly.size + int(w), dtype=object)
        nxt[:poly.size] += poly
        nxt[int(w):int(w) + poly.size] += poly
        poly = nxt
    return {m: int(c) for m, c in enumerate(poly) if c}


def census_rows(n, k_star_value):
    """(m, count, bound, count/bound) for every occupied level."""
    return [(m, c, lemma_bound(m), c / lemma_bound(m)) for m, c in sorted(level_set_count(n, k_star_value).items())]
