"""Vectorized golden-section search.

scipy's scalar minimizers handle one bracket at a time; Monte Carlo sup-norm
refinement needs thousands of independent brackets advanced in lockstep.
"""
import numpy as np

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_max(fun, lo, hi, xtol=1e-12, max_iter=200):
    """Maximize a unimodal function on each bracket [lo, hi].

    ``fun`` maps an array of abscissae to an array of values of the same
    shape, so many brackets can be refined at once.  Returns (x, f(x)).
    """
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = fun(c)
    fd = fun(d)
    for _ in range(max_iter):
        if np.all(b - a <= xtol):
            break
        left = fc >= fd
        # keep [a, d] where the left probe wins, else [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        # the surviving probe is reused, only one new evaluation per bracket
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        probe = np.where(left, c_next, d_next)
        fp = fun(probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = c_next, d_next
    x = 0.5 * (a + b)
    return x, fun(x)


def golden_min(fun, lo, hi, xtol=1e-12, max_iter=200):
    x, v = golden_max(lambda s: -fun(s), lo, hi, xtol=xtol, max_iter=max_iter)
    return x, -v
