"""Time evolution for i u_t + u_xx = mu eps^alpha |u|^2 u on the circle.

Three maps: the exact linear flow, the explicit resonant approximation
(only Omega = 0 cubic interactions kept), and a Strang split-step solver
for the full equation.
"""
from dataclasses import dataclass

import numpy as np

from .spectrum import FourierField, field_difference, fl_norm

LINEAR = "linear"
RESONANT = "resonant"
NLS = "nls"


class DivergenceError(RuntimeError):
    def __init__(self, step, message="non-finite field"):
        super().__init__(f"{message} at step {step}")
        self.step = step


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvolutionConfig:
    """Settings for the split-step solver.

    dt=None selects a step from the nonlinear phase budget
    dt * eps^alpha * sup|u|^2 <= phase_budget and then halves it until two
    successive runs agree to ``solver_tol`` in FL^{0,1}.
    """

    epsilon: float
    alpha: float = 2.0
    mu: int = 1
    dt: float = None
    scheme: str = "strang"
    solver_tol: float = 1e-8
    phase_budget: float = 1e-2
    max_halvings: int = 14
    grid_points: int = None

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.mu not in (1, -1):
            raise ValueError("mu must be +1 or -1")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.scheme != "strang":
            raise ValueError("only the Strang scheme is implemented")
        if not np.isfinite(self.coupling):
            raise ValueError("epsilon^alpha must be finite")

    @property
    def coupling(self):
        """mu * eps^alpha, zero when eps = 0."""
        if self.epsilon == 0:
            return 0.0
        return self.mu * self.epsilon ** self.alpha


@dataclass(frozen=True)
class ResonanceQuad:
    k1: int
    k2: int
    k3: int
    k: int
    omega: int

    @property
    def resonant(self):
        return self.omega == 0


def resonance_omega(quad):
    k1, k2, k3 = (int(q) for q in quad)
    k = k1 - k2 + k3
    return ResonanceQuad(k1, k2, k3, k, k1 * k1 - k2 * k2 + k3 * k3 - k * k)


def linear_flow(initial, t):
    k = initial.profile.k
    modes = initial.amplitudes * np.exp(1j * (initial.phi - k * k * t))
    return FourierField(modes, t, 0.0)


def resonant_flow(initial, t, epsilon, mu=1, alpha=2.0):
    """Resonant approximation; moduli are frozen and only phases rotate.

    Keeping the Omega = 0 terms gives i v_k' = g (2M - |v_k|^2) v_k with
    g = mu eps^alpha, hence the phase  -g t (2M - c_k^2 r_k^2) - k^2 t.
    M is taken from the initial datum since it is conserved.
    """
    k = initial.profile.k
    amp = initial.amplitudes
    g = 0.0 if epsilon == 0 else mu * epsilon ** alpha
    M = np.sum(amp ** 2)
    phase = initial.phi - g * t * (2.0 * M - amp ** 2) - k * k * t
    return FourierField(amp * np.exp(1j * phase), t, epsilon)


def batch_modes(profile, r, phi, t, flow=LINEAR, epsilon=0.0, mu=1, alpha=2.0):
    """Linear or resonant modes at time t for rows of moduli and phases."""
    k = profile.k
    amp = profile.c * r
    phase = phi - k * k * t
    if flow == RESONANT and epsilon > 0:
        M = np.sum(amp ** 2, axis=-1, keepdims=True)
        phase = phase - mu * epsilon ** alpha * t * (2.0 * M - amp ** 2)
    elif flow not in (LINEAR, RESONANT):
        raise ValueError(f"no closed-form modes for flow {flow!r}")
    return amp * np.exp(1j * phase)


def _grid_size(N, requested=None):
    if requested is not None:
        if requested < 2 * N + 1:
            raise ValueError("solver grid undersamples the initial datum")
        return int(requested)
    J = 64
    while J < 4 * (2 * N + 1):
        J *= 2
    return J


def _strang(uh, J, t_final, dt, g):
    """Evolve rows of FFT-ordered mode arrays uh (shape (B, J))."""
    kfft = np.fft.fftfreq(J, d=1.0 / J)
    n_full = int(np.floor(t_final / dt + 1e-12))
    rest = t_final - n_full * dt
    if rest < 1e-14 * max(1.0, t_final):
        rest = 0.0
    steps = [dt] * n_full + ([rest] if rest > 0 else [])
    if g == 0.0:
        return uh * np.exp(-1j * kfft ** 2 * t_final)
    lin = {h: np.exp(-1j * kfft ** 2 * h) for h in set(steps)}
    u = np.fft.ifft(uh, axis=1) * J
    pending = 0.0  # nonlinear half step carried over from the previous step
    for i, h in enumerate(steps):
        half = pending + 0.5 * h
        u = u * np.exp(-1j * g * half * np.abs(u) ** 2)
        u = np.fft.ifft(np.fft.fft(u, axis=1) * lin[h], axis=1)
        pending = 0.5 * h
        if not np.all(np.isfinite(u)):
            raise DivergenceError(i)
    u = u * np.exp(-1j * g * pending * np.abs(u) ** 2)
    return np.fft.fft(u, axis=1) / J


def _to_fft(thetas, J):
    K = thetas[0].profile.k
    out = np.zeros((len(thetas), J), dtype=complex)
    for i, th in enumerate(thetas):
        out[i, K % J] = th.amplitudes * np.exp(1j * th.phi)
    return out


def _from_fft(uh, J, t, eps):
    half = J // 2 - 1
    k = np.arange(-half, half + 1)
    return [FourierField(row[k % J], t, eps) for row in uh]


def auto_dt(thetas, config, t_final):
    g = abs(config.coupling)
    if g == 0.0 or t_final == 0:
        return max(t_final, 1.0)
    # ||u0||_{FL^{0,1}} bounds sup|u0|; it only seeds the step, halving does the rest
    bound = max(np.sum(th.amplitudes) for th in thetas) ** 2
    return min(config.phase_budget / (g * bound), t_final)


def nls_flow_batch(thetas, t_final, config):
    """Split-step solutions for several initial data sharing one step size."""
    if t_final < 0:
        raise ValueError("t_final must be nonnegative")
    thetas = list(thetas)
    N = thetas[0].profile.N
    J = _grid_size(N, config.grid_points)
    uh0 = _to_fft(thetas, J)
    g = config.coupling
    if config.dt is not None:
        return _from_fft(_strang(uh0, J, t_final, config.dt, g), J, t_final, config.epsilon)
    dt = auto_dt(thetas, config, t_final)
    prev = _strang(uh0, J, t_final, dt, g)
    if g == 0.0 or t_final == 0:
        return _from_fft(prev, J, t_final, config.epsilon)
    for _ in range(config.max_halvings):
        dt *= 0.5
        cur = _strang(uh0, J, t_final, dt, g)
        diff = np.max(np.sum(np.abs(cur - prev), axis=1))
        prev = cur
        if diff < config.solver_tol:
            return _from_fft(cur, J, t_final, config.epsilon)
    raise ConvergenceError(f"no dt convergence after {config.max_halvings} halvings (last change {diff:.3e})")


def nls_flow(initial, t_final, config):
    return nls_flow_batch([initial], t_final, config)[0]


def time_reversal_residual(initial, t_final, config):
    """Run forward, conjugate, run forward again, conjugate back.

    Conjugation maps solutions of the equation to solutions run backwards in
    time, so for a symmetric splitting this returns the datum up to round-off.
    Returns the FL^{0,1} distance to the initial datum.
    """
    N = initial.profile.N
    J = _grid_size(N, config.grid_points)
    dt = config.dt or auto_dt([initial], config, t_final)
    uh0 = _to_fft([initial], J)
    fwd = _strang(uh0, J, t_final, dt, config.coupling)
    back = _strang(np.conj(fwd[:, (-np.arange(J)) % J]), J, t_final, dt, config.coupling)
    back = np.conj(back[:, (-np.arange(J)) % J])
    return float(np.sum(np.abs(back - uh0)))


def lwp_time(field, epsilon):
    """Local existence time scale eps^-2 / ||u0||_{FL^{0,1}}^2."""
    n = fl_norm(field, 0, 1)
    return np.inf if epsilon == 0 or n == 0 else 1.0 / (epsilon ** 2 * n ** 2)


@dataclass(frozen=True)
class ErrorReport:
    t: float
    reference: str
    fl01_err: float
    fl21_err: float
    threshold: float
    delta: float

    @property
    def passed(self):
        # the linear comparison is measured in FL^{0,1}, the resonant one in FL^{2,1}
        err = self.fl01_err if self.reference == LINEAR else self.fl21_err
        return err < self.threshold

    def row(self):
        return (self.t, self.fl01_err, self.fl21_err, self.threshold, int(self.passed))


def reference_flow(initial, t, config, reference):
    if reference == LINEAR:
        return linear_flow(initial, t)
    if reference == RESONANT:
        return resonant_flow(initial, t, config.epsilon, config.mu, config.alpha)
    raise ValueError(f"unknown reference {reference!r}")


def _report(u, ref, t, eps, reference, delta):
    d = field_difference(u, ref)
    threshold = np.inf if eps == 0 else eps ** (-0.5 + delta)
    return ErrorReport(t, reference, fl_norm(d, 0, 1), fl_norm(d, 2, 1), threshold, delta)


def approximation_error(initial, t, config, reference, delta=0.5):
    """Distance between the split-step solution and a reference flow."""
    u = nls_flow(initial, t, config)
    return _report(u, reference_flow(initial, t, config, reference), t, config.epsilon, reference, delta)


def approximation_errors(thetas, t, config, references=(LINEAR, RESONANT), delta=0.5):
    """Batch version: one solver run, reports for each reference per datum."""
    fields = nls_flow_batch(thetas, t, config)
    return [{ref: _report(u, reference_flow(th, t, config, ref), t, config.epsilon, ref, delta)
             for ref in references} for th, u in zip(thetas, fields)]


def splitting_order(initial, t_final, config, dt):
    """Observed convergence order from runs at dt, dt/2 and dt/4 on one grid."""
    N = initial.profile.N
    J = _grid_size(N, config.grid_points)
    uh0 = _to_fft([initial], J)
    u1, u2, u4 = (_strang(uh0, J, t_final, dt / s, config.coupling)[0] for s in (1, 2, 4))
    return float(np.log2(np.sum(np.abs(u1 - u2)) / np.sum(np.abs(u2 - u4))))


def mass_drift(initial, t_final, config, steps):
    """Relative change of sum |u_k|^2 after ``steps`` equal split steps."""
    N = initial.profile.N
    J = _grid_size(N, config.grid_points)
    uh0 = _to_fft([initial], J)
    uh = _strang(uh0, J, t_final, t_final / steps, config.coupling)
    m0, m1 = np.sum(np.abs(uh0) ** 2), np.sum(np.abs(uh) ** 2)
    return float(abs(m1 - m0) / m0)
