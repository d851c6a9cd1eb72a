"""Reproducible draws of the Gaussian initial-data ensemble.

Each mode carries eta_k = R_k e^{i phi_k} with R_k ~ Rayleigh(1/sqrt 2) and
phi_k ~ U[0, 2pi), so eta_k is a standard complex Gaussian.

Streams are Philox counter-based generators keyed by (master_seed,
stream_index).  Large draws are cut into fixed-size blocks, each on its own
counter range, so a Monte Carlo total never depends on how blocks are shared
between workers.
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .spectrum import TWO_PI, ThetaPoint

BLOCK = 4096
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeededStream:
    master_seed: int
    stream_index: int = 0

    def generator(self, block=0):
        key = (int(self.stream_index) << 64) | (int(self.master_seed) & _MASK64)
        # the top counter word separates blocks; the low words count draws within one
        counter = np.array([0, 0, 0, int(block)], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))

    def substream(self, index):
        return SeededStream(self.master_seed, index)


def rayleigh_from_uniform(u):
    """Inverse CDF of Rayleigh(1/sqrt 2); u in (0, 1]."""
    return np.sqrt(-np.log(u))


def rayleigh_cdf(r):
    return -np.expm1(-np.square(r))


def _draw(gen, shape):
    r = rayleigh_from_uniform(1.0 - gen.random(shape))
    phi = TWO_PI * gen.random(shape)
    return r, phi


def sample_theta(stream, profile):
    r, phi = _draw(stream.generator(), 2 * profile.N + 1)
    return ThetaPoint(r, phi, profile)


def block_slices(n_samples, block=BLOCK):
    """(block_index, count) pairs covering n_samples."""
    return [(i, min(block, n_samples - s)) for i, s in enumerate(range(0, n_samples, block))]


def sample_block(stream, n_modes, block_index, count):
    """Moduli and phases, shape (count, n_modes), from one counter block."""
    return _draw(stream.generator(block_index), (count, n_modes))


def sample_many(stream, n_modes, n_samples):
    parts = [sample_block(stream, n_modes, i, c) for i, c in block_slices(n_samples)]
    if not parts:
        return np.empty((0, n_modes)), np.empty((0, n_modes))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def sample_eta(stream, n_samples):
    r, phi = sample_many(stream, 1, n_samples)
    return r[:, 0] * np.exp(1j * phi[:, 0])


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # keep pytest from collecting it

    a: float
    n_samples: int
    ks_modulus: float
    ks_phase: float
    p_modulus: float
    p_phase: float
    ks_critical: float
    corr_cos: float
    corr_sin: float
    corr_limit: float = 0.01

    @property
    def passed(self):
        return (self.ks_modulus < self.ks_critical and self.ks_phase < self.ks_critical
                and abs(self.corr_cos) < self.corr_limit and abs(self.corr_sin) < self.corr_limit)


def gaussian_invariance_test(stream, a, n_samples):
    """Check that eta e^{i a |eta|^2} is again standard complex Gaussian.

    KS tests of the modulus against Rayleigh(1/sqrt 2) and of the phase
    against U[0, 2pi), plus correlations between the modulus and cos/sin of
    the phase.  The 1% KS critical value is approximated by 1.63/sqrt(n).
    """
    if n_samples < 10_000:
        raise ValueError("invariance test needs at least 1e4 samples")
    eta = sample_eta(stream, n_samples)
    rotated = eta * np.exp(1j * a * np.abs(eta) ** 2)
    mod = np.abs(rotated)
    ang = np.mod(np.angle(rotated), TWO_PI)
    ks_m = stats.kstest(mod, rayleigh_cdf)
    ks_p = stats.kstest(ang, stats.uniform(loc=0.0, scale=TWO_PI).cdf)
    return TestReport(
        a=float(a),
        n_samples=int(n_samples),
        ks_modulus=float(ks_m.statistic),
        ks_phase=float(ks_p.statistic),
        p_modulus=float(ks_m.pvalue),
        p_phase=float(ks_p.pvalue),
        ks_critical=1.63 / np.sqrt(n_samples),
        corr_cos=float(np.corrcoef(mod, np.cos(ang))[0, 1]),
        corr_sin=float(np.corrcoef(mod, np.sin(ang))[0, 1]),
    )
