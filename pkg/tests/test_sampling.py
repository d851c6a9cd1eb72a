import numpy as np
import pytest
from scipy import stats

from roguewave.parallel import ordered_map
from roguewave.sampling import (
    BLOCK, SeededStream, block_slices, gaussian_invariance_test, rayleigh_cdf, rayleigh_from_uniform,
    sample_block, sample_eta, sample_many, sample_theta,
)
from roguewave.spectrum import CoefficientProfile


def test_same_seed_same_draws():
    p = CoefficientProfile(1.0)
    a = sample_theta(SeededStream(5, 2), p)
    b = sample_theta(SeededStream(5, 2), p)
    assert np.array_equal(a.r, b.r) and np.array_equal(a.phi, b.phi)


def test_streams_differ():
    p = CoefficientProfile(1.0)
    a = sample_theta(SeededStream(5, 0), p)
    b = sample_theta(SeededStream(5, 1), p)
    c = sample_theta(SeededStream(6, 0), p)
    assert not np.array_equal(a.r, b.r) and not np.array_equal(a.r, c.r)


def test_blocks_are_independent_of_split():
    s = SeededStream(11)
    r, phi = sample_many(s, 3, 2 * BLOCK + 17)
    i, count = block_slices(2 * BLOCK + 17)[2]
    rb, pb = sample_block(s, 3, i, count)
    assert np.array_equal(r[2 * BLOCK:], rb) and np.array_equal(phi[2 * BLOCK:], pb)


def test_block_slices_cover():
    sl = block_slices(10_000)
    assert [c for _, c in sl] == [4096, 4096, 1808]
    assert block_slices(0) == []


def _sum_block(i, c):
    return sample_block(SeededStream(3), 2, i, c)[0].sum()


def test_worker_count_invariance():
    tasks = block_slices(3 * BLOCK)
    assert ordered_map(_sum_block, tasks, 1) == ordered_map(_sum_block, tasks, 2)


def test_rayleigh_inverse_cdf():
    u = np.linspace(0.01, 1.0, 50)
    assert np.allclose(rayleigh_cdf(rayleigh_from_uniform(u)), 1 - u)


def test_eta_is_standard_complex_gaussian():
    eta = sample_eta(SeededStream(1), 200_000)
    assert np.mean(np.abs(eta) ** 2) == pytest.approx(1.0, abs=0.01)
    assert stats.kstest(eta.real * np.sqrt(2), "norm").pvalue > 1e-3


def test_invariance_needs_samples():
    with pytest.raises(ValueError):
        gaussian_invariance_test(SeededStream(1), 1.0, 100)


def test_invariance_detects_broken_rotation():
    s = SeededStream(4)
    rep = gaussian_invariance_test(s, 0.0, 20_000)
    assert rep.passed
    eta = sample_eta(s, 20_000)
    bad = np.abs(eta) * np.exp(1j * np.abs(eta))  # phase fully determined by the modulus
    ang = np.mod(np.angle(bad), 2 * np.pi)
    assert abs(np.corrcoef(np.abs(bad), np.cos(ang))[0, 1]) > 0.05
