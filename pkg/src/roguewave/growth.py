"""Minimax growth of the normalized minimizer datum under the linear flow.

u(t, x) = sum_{|k|<=n} (c_k^2 / sum_j c_j^2) e^{ikx - ik^2 t} peaks at height 1
at t = 0.  m = min_t max_x |u(t, x)| measures how far dispersion can flatten
it, i.e. how much a rogue wave can grow from a typical profile.
"""
from dataclasses import dataclass

import numpy as np

from ._optimize import golden_min
from .parallel import ordered_map
from .spectrum import EXPONENTIAL, TWO_PI, CoefficientProfile, FourierField, sup_norm

FIGURE_TIMES = (2.2735, 2.9019, 6.1694, TWO_PI)


@dataclass(frozen=True)
class GrowthConfig:
    n: int = 100
    b: float = 0.07
    N_t: int = 10_000
    N_x: int = 10_000
    t_range: tuple = (0.0, TWO_PI)
    x_range: tuple = (-np.pi, np.pi)
    kind: str = EXPONENTIAL

    def __post_init__(self):
        if self.N_t < 2 * self.n + 1 or self.N_x < 2 * self.n + 1:
            raise ValueError("N_t and N_x must be at least 2n + 1")

    @property
    def weights(self):
        k = np.arange(-self.n, self.n + 1)
        c2 = CoefficientProfile(self.b, self.kind, N=self.n).c_of(k) ** 2
        return c2 / c2.sum()

    @property
    def times(self):
        return np.linspace(self.t_range[0], self.t_range[1], self.N_t)

    @property
    def xs(self):
        """Periodic grid of N_x points starting at x_range[0]."""
        x0, x1 = self.x_range
        return x0 + (x1 - x0) * np.arange(self.N_x) / self.N_x

    def field(self, t):
        k = np.arange(-self.n, self.n + 1)
        return FourierField(self.weights * np.exp(-1j * k * k * t), t, 0.0)


@dataclass(frozen=True)
class GrowthResult:
    m: float
    t_min: float
    x_argmax: float
    m_refined: float
    t_refined: float


def slice_profiles(config, times):
    """|u(t, x)| on the x-grid, one row per time."""
    k = np.arange(-config.n, config.n + 1)
    J = config.N_x
    shift = np.exp(1j * k * config.x_range[0])
    modes = config.weights * shift * np.exp(-1j * np.outer(np.atleast_1d(times), k * k))
    buf = np.zeros((modes.shape[0], J), dtype=complex)
    np.add.at(buf, (slice(None), k % J), modes)
    return np.abs(np.fft.ifft(buf, axis=1)) * J


def slice_maxima(config, times=None, chunk=None):
    """Per-slice max over the x-grid, and the grid x where it occurs."""
    times = config.times if times is None else np.asarray(times)
    chunk = chunk or max(1, (1 << 22) // config.N_x)
    vals = np.empty(times.size)
    where = np.empty(times.size, dtype=int)
    for s in range(0, times.size, chunk):
        prof = slice_profiles(config, times[s:s + chunk])
        where[s:s + chunk] = np.argmax(prof, axis=1)
        vals[s:s + chunk] = prof[np.arange(prof.shape[0]), where[s:s + chunk]]
    return vals, config.xs[where]


def _continuous_max(config, t):
    return sup_norm(config.field(float(t))).value


def minimax_growth(config):
    """Raw-grid (m, t_min, x_argmax) plus a refined value in continuous t and x."""
    times = config.times
    vals, xs = slice_maxima(config, times)
    i = int(np.argmin(vals))
    dt = times[1] - times[0] if times.size > 1 else 0.0
    lo, hi = max(times[i] - dt, times[0]), min(times[i] + dt, times[-1])
    if hi > lo:
        f = np.vectorize(lambda t: _continuous_max(config, t))
        t_ref, m_ref = golden_min(f, np.array([lo]), np.array([hi]), xtol=1e-9)
        t_ref, m_ref = float(t_ref[0]), float(m_ref[0])
    else:
        t_ref, m_ref = float(times[i]), _continuous_max(config, times[i])
    return GrowthResult(float(vals[i]), float(times[i]), float(xs[i]), m_ref, t_ref)


def _growth_row(b, n, N, kind):
    cfg = GrowthConfig(n=n, b=b, N_t=N, N_x=N, kind=kind)
    vals, _ = slice_maxima(cfg)
    i = int(np.argmin(vals))
    return float(b), float(vals[i]), float(cfg.times[i])


def growth_curve(b_values, n=100, N=2500, kind=EXPONENTIAL, workers=1):
    """Rows (b, m, t_min) on the raw N x N grid, one per b."""
    return ordered_map(_growth_row, [(float(b), n, N, kind) for b in b_values], workers)


def snapshots(config, times=FIGURE_TIMES):
    """(x-grid, list of |u(t, x)| rows) for each requested time."""
    t0, t1 = config.t_range
    times = np.asarray(times, dtype=float)
    if np.any(times < t0) or np.any(times > t1):
        raise ValueError("snapshot times must lie inside t_range")
    return config.xs, slice_profiles(config, times)
