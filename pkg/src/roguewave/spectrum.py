"""Coefficient profiles, Fourier-side fields and the norms used throughout.

A field is stored as its mode vector u_k for k = -N..N and lives on the
circle [0, 2pi).  Physical samples sit at x_j = 2 pi j / J.
"""
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

import numpy as np

from ._optimize import golden_max

TWO_PI = 2.0 * np.pi
N_CAP = 4096

EXPONENTIAL = "exponential"
GAUSSIAN = "gaussian"


class ConfigurationError(ValueError):
    """Raised when numerical settings cannot produce a faithful result."""


def _tail_ratio(a, b, kind, N):
    """Relative mass sum_{|k|>N} c_k^2 / sum_k c_k^2."""
    if kind == EXPONENTIAL:
        q = np.exp(-2.0 * b)
        total = (1.0 + q) / (1.0 - q)
        tail = 2.0 * q ** (N + 1) / (1.0 - q)
        return tail / total
    k = np.arange(0, N + 200)
    c2 = np.exp(-2.0 * b * k.astype(float) ** 2)
    total = c2[0] + 2.0 * c2[1:].sum()
    return 2.0 * c2[N + 1:].sum() / total


@dataclass(frozen=True)
class CoefficientProfile:
    """c_k = a exp(-b|k|) or a exp(-b k^2), truncated to |k| <= N.

    When N is omitted it is the smallest value whose relative tail mass in
    c_k^2 falls below ``tail_tol`` (capped at 4096).
    """

    b: float
    kind: str = EXPONENTIAL
    a: float = 1.0
    N: int = None
    tail_tol: float = 1e-14

    def __post_init__(self):
        if not self.b > 0 or not self.a > 0:
            raise ConfigurationError("a and b must be positive")
        if self.kind not in (EXPONENTIAL, GAUSSIAN):
            raise ConfigurationError(f"unknown coefficient kind {self.kind!r}")
        if self.N is None:
            object.__setattr__(self, "N", self._auto_truncation())
        elif self.N < 0:
            raise ConfigurationError("truncation N must be nonnegative")

    def _auto_truncation(self):
        if self.kind == EXPONENTIAL:
            q = np.exp(-2.0 * self.b)
            # tail ratio 2 q^(N+1) / (1 + q) <= tol, solved then nudged
            est = np.log(self.tail_tol * (1.0 + q) / 2.0) / np.log(q) - 1.0
            n = max(int(np.ceil(est)) - 2, 0)
        else:
            n = 0
        while n < N_CAP and _tail_ratio(self.a, self.b, self.kind, n) > self.tail_tol:
            n += 1
        return min(n, N_CAP)

    @property
    def k(self):
        return np.arange(-self.N, self.N + 1)

    def c_of(self, k):
        """Coefficients at arbitrary integer k, ignoring truncation."""
        k = np.abs(np.asarray(k, dtype=float))
        if self.kind == EXPONENTIAL:
            return self.a * np.exp(-self.b * k)
        return self.a * np.exp(-self.b * k * k)

    @property
    def c(self):
        return self.c_of(self.k)

    @property
    def c2_sum(self):
        """sum_{|k|<=N} c_k^2."""
        return float(np.sum(self.c ** 2))

    @property
    def tail_ratio(self):
        return _tail_ratio(self.a, self.b, self.kind, self.N)

    def with_N(self, N):
        return CoefficientProfile(self.b, self.kind, self.a, N, self.tail_tol)


def coefficient(profile, k):
    if abs(k) > profile.N:
        raise IndexError(f"mode {k} outside truncation |k| <= {profile.N}")
    return float(profile.c_of(k))


@dataclass(frozen=True)
class FourierField:
    """Mode vector u_k, k = -N..N, at a given time and nonlinearity scale."""

    modes: np.ndarray
    time_stamp: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.modes, dtype=complex)
        if m.ndim != 1 or m.size % 2 != 1:
            raise ValueError("modes must be a 1-d vector of odd length 2N+1")
        m.setflags(write=False)
        object.__setattr__(self, "modes", m)

    @property
    def N(self):
        return (self.modes.size - 1) // 2

    @property
    def k(self):
        return np.arange(-self.N, self.N + 1)

    def __call__(self, x):
        """Direct synthesis at arbitrary points."""
        x = np.asarray(x, dtype=float)
        return np.exp(1j * np.multiply.outer(x, self.k)) @ self.modes

    def padded(self, N):
        """Same field with zero modes appended out to |k| <= N."""
        if N < self.N:
            raise ValueError("cannot pad to a smaller truncation")
        out = np.zeros(2 * N + 1, dtype=complex)
        out[N - self.N:N + self.N + 1] = self.modes
        return FourierField(out, self.time_stamp, self.epsilon)


@dataclass(frozen=True)
class ThetaPoint:
    """Moduli r_k and phases phi_k for |k| <= N of a profile."""

    r: np.ndarray
    phi: np.ndarray
    profile: CoefficientProfile = dc_field(repr=False)

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        phi = np.mod(np.array(self.phi, dtype=float), TWO_PI)
        size = 2 * self.profile.N + 1
        if r.shape != (size,) or phi.shape != (size,):
            raise ValueError(f"theta needs {size} moduli and phases")
        if np.any(r < 0):
            raise ValueError("moduli must be nonnegative")
        r.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    @property
    def amplitudes(self):
        """c_k r_k."""
        return self.profile.c * self.r

    def datum(self):
        """Initial field u_0 = sum c_k r_k e^{i(kx + phi_k)}."""
        return FourierField(self.amplitudes * np.exp(1j * self.phi), 0.0, 0.0)


def evaluate_on_grid(field, grid_points, oversample=1):
    """Samples of the field at x_j = 2 pi j / J with J = grid_points * oversample."""
    J = int(grid_points) * int(oversample)
    if J < 2 * field.N + 1:
        raise ConfigurationError(f"grid of {J} points undersamples 2N+1 = {2 * field.N + 1} modes")
    buf = np.zeros(J, dtype=complex)
    buf[field.k % J] = field.modes
    return np.fft.ifft(buf) * J


@dataclass(frozen=True)
class SupNormPolicy:
    oversample: int = 8
    min_grid: int = 4096
    xtol: float = 1e-12

    def grid_size(self, N):
        return max(self.oversample * (2 * N + 1), self.min_grid)


class SupNorm(NamedTuple):
    value: float
    argmax: float


def sup_norm_batch(modes, k, policy=None, chunk=None):
    """Sup over x of |sum_k u_k e^{ikx}| for each row of ``modes``.

    Dense FFT grid first, then golden-section refinement of |u|^2 inside the
    grid cell on either side of the coarse argmax.  Returns (values, argmax).
    """
    policy = policy or SupNormPolicy()
    modes = np.atleast_2d(np.asarray(modes, dtype=complex))
    k = np.asarray(k)
    N = int(np.max(np.abs(k))) if k.size else 0
    J = policy.grid_size(N)
    h = TWO_PI / J
    if chunk is None:
        chunk = max(1, (1 << 22) // J)
    values = np.empty(modes.shape[0])
    where = np.empty(modes.shape[0])
    kk = k.astype(float)
    for s in range(0, modes.shape[0], chunk):
        block = modes[s:s + chunk]
        buf = np.zeros((block.shape[0], J), dtype=complex)
        buf[:, k % J] = block
        grid = np.abs(np.fft.ifft(buf, axis=1)) * J
        j = np.argmax(grid, axis=1)
        coarse = grid[np.arange(block.shape[0]), j]
        x0 = j * h

        def power(x):
            return np.abs(np.einsum("bk,bk->b", block, np.exp(1j * np.outer(x, kk)))) ** 2

        x, p = golden_max(power, x0 - h, x0 + h, xtol=policy.xtol)
        fine = np.sqrt(p)
        better = fine >= coarse
        values[s:s + chunk] = np.where(better, fine, coarse)
        where[s:s + chunk] = np.mod(np.where(better, x, x0), TWO_PI)
    return values, where


def sup_norm(field, refinement=None):
    v, x = sup_norm_batch(field.modes[None, :], field.k, refinement)
    return SupNorm(float(v[0]), float(x[0]))


def fl_norm(field, s, p):
    """(sum (1+|k|)^{ps} |u_k|^p)^{1/p}, p in {1, 2, inf}."""
    weights = (1.0 + np.abs(field.k)) ** s * np.abs(field.modes)
    if p == 1:
        return float(np.sum(weights))
    if p == 2:
        return float(np.sqrt(np.sum(weights ** 2)))
    if p == np.inf:
        return float(np.max(weights))
    raise ValueError("p must be 1, 2 or inf")


def mass(field):
    return float(np.sum(np.abs(field.modes) ** 2))


def field_difference(u, v):
    """u - v after padding both to a common truncation."""
    N = max(u.N, v.N)
    return FourierField(u.padded(N).modes - v.padded(N).modes, u.time_stamp, u.epsilon)
