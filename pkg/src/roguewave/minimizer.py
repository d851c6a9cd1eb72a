"""Most likely rogue-wave data and the neighborhood that carries their probability.

For a target height z the cheapest datum (in sum r_k^2) whose linear flow
reaches z at (t, x*) has r_k* = c_k z / sum c_j^2 and phases that line every
mode up at x*.  The neighborhood U(eps, m1, m2) boxes moduli for |k| <= m1
from above r_k* and phases for |k| <= m2 around the aligned values.
"""
from dataclasses import dataclass

import numpy as np

from .parallel import ordered_map
from .propagate import LINEAR, RESONANT, batch_modes, linear_flow, resonant_flow
from .sampling import block_slices, rayleigh_from_uniform, sample_block
from .spectrum import TWO_PI, ThetaPoint, sup_norm_batch


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class MinimizerFamily:
    z: float
    t: float = 0.0
    x_star: float = 0.0
    phi0_star: float = 0.0
    variant: str = LINEAR
    epsilon: float = 0.0

    def moduli(self, profile):
        return profile.c * self.z / profile.c2_sum

    def phase_correction(self, profile):
        """Extra phase removed in the resonant variant, eps^2 t (c_k r_k*)^2."""
        if self.variant == LINEAR:
            return np.zeros(2 * profile.N + 1)
        return self.epsilon ** 2 * self.t * (profile.c * self.moduli(profile)) ** 2

    def phases(self, profile, phi0_star=None, x_star=None):
        phi0 = self.phi0_star if phi0_star is None else phi0_star
        x = self.x_star if x_star is None else x_star
        k = profile.k
        return np.mod(phi0 - k * x + k * k * self.t - self.phase_correction(profile), TWO_PI)


def build_minimizer(family, profile):
    if not family.z > 0:
        raise DomainError("target height must be positive")
    return ThetaPoint(family.moduli(profile), family.phases(profile), profile)


def objective(theta):
    return float(np.sum(theta.r ** 2))


def relaxed_optimality_check(theta, family, profile):
    """sum r_k^2 - z^2/sum c^2 for a datum with sum c_k r_k >= z."""
    if np.dot(profile.c, theta.r) < family.z * (1 - 1e-12):
        raise DomainError("theta violates sum c_k r_k >= z")
    return objective(theta) - family.z ** 2 / profile.c2_sum


def evolve(theta, family):
    if family.variant == RESONANT:
        return resonant_flow(theta, family.t, family.epsilon)
    return linear_flow(theta, family.t)


@dataclass(frozen=True)
class NeighborhoodSpec:
    """Boxes of U(eps, m1, m2) around the minimizers of height z0 eps^-1/2."""

    epsilon: float
    z0: float
    alpha: float
    beta: float
    m1: int
    m2: int

    @property
    def z(self):
        return self.z0 / np.sqrt(self.epsilon)

    @property
    def box(self):
        """Width eps^beta of the modulus boxes."""
        return self.epsilon ** self.beta

    def family(self, t=0.0, variant=LINEAR, x_star=0.0, phi0_star=0.0):
        return MinimizerFamily(self.z, t, x_star, phi0_star, variant, self.epsilon)


def m1_radius(profile, epsilon, z0, beta):
    """Largest m with c_m >= (2 sum c^2 / z0) eps^{1/2+beta}, at least 0.

    For c_k = e^{-b|k|} this is floor(-(1/b) log((2 sum c^2/z0) eps^{1/2+beta})).
    """
    cut = (2.0 * profile.c2_sum / z0) * epsilon ** (0.5 + beta)
    m = 0
    while profile.c_of(m + 1) >= cut and m < 100_000:
        m += 1
    return m


def z0_for_m1(profile, epsilon, beta, m1=1):
    """Smallest z0 giving radius m1 at this epsilon (nudged inside by 1e-9)."""
    return 2.0 * profile.c2_sum * epsilon ** (0.5 + beta) / profile.c_of(m1) * (1 + 1e-9)


def m2_radius(epsilon, alpha):
    return int(np.ceil(epsilon ** (-alpha) - 1e-12))


def neighborhood_spec(profile, epsilon, z0, alpha=0.5, beta=0.4):
    if not 0 < beta < 0.5:
        raise DomainError("beta must lie in (0, 1/2)")
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    return NeighborhoodSpec(epsilon, z0, alpha, beta,
                            m1_radius(profile, epsilon, z0, beta), m2_radius(epsilon, alpha))


def m1_le_m2_threshold(profile, z0, alpha, beta, eps_min=1e-12, size=400):
    """Largest grid eps below which m1 <= m2 holds all the way down to eps_min."""
    grid = np.logspace(0, np.log10(eps_min), size)
    ok = [m1_radius(profile, e, z0, beta) <= m2_radius(e, alpha) for e in grid]
    bar = eps_min
    for e, good in zip(grid[::-1], ok[::-1]):
        if not good:
            break
        bar = e
    return float(bar)


def circular_distance(a, b):
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def _membership(r, phi, spec, family, profile):
    """Vectorized membership over rows of (r, phi)."""
    N = profile.N
    k = profile.k
    r_star = family.moduli(profile)
    corr = family.phase_correction(profile)
    phi0_star = phi[:, N] + corr[N]
    x_star = phi0_star - (phi[:, N + 1] + corr[N + 1]) + family.t
    mod_sel = np.abs(k) <= spec.m1
    rr = r[:, mod_sel]
    ok = np.all((rr >= r_star[mod_sel]) & (rr <= r_star[mod_sel] + spec.box), axis=1)
    ph_sel = (np.abs(k) <= spec.m2) & (k != 0) & (k != 1)
    kk = k[ph_sel]
    target = (phi0_star[:, None] - kk * x_star[:, None] + kk * kk * family.t - corr[ph_sel])
    ok &= np.all(circular_distance(phi[:, ph_sel], target) <= spec.epsilon, axis=1)
    return ok


def neighborhood_membership(theta, spec, family):
    profile = theta.profile
    return bool(_membership(theta.r[None, :], theta.phi[None, :], spec, family, profile)[0])


def log_box_probability(r_star, h):
    """log P(r* <= R <= r* + h) = log(e^{-r*^2} - e^{-(r*+h)^2})."""
    return -r_star ** 2 + np.log(-np.expm1(-(2.0 * r_star * h + h * h)))


def neighborhood_probability_exact(spec, family, profile):
    """log P(U) for uniform phases on [0, 2pi) and Rayleigh(1/sqrt 2) moduli.

    Each of the 2 m2 - 1 constrained phases lands in an arc of length 2 eps
    with probability eps/pi; each boxed modulus contributes its exact
    Rayleigh box probability.  Modes beyond the profile truncation are
    treated like any other (c_k from the closed form).
    """
    if spec.m1 < 1 or spec.m2 < 1:
        raise DomainError("closed form needs m1, m2 >= 1")
    if spec.epsilon > np.pi:
        raise DomainError("phase arcs exceed the circle")
    k = np.arange(-spec.m1, spec.m1 + 1)
    r_star = profile.c_of(k) * family.z / profile.c2_sum
    log_phase = (2 * spec.m2 - 1) * np.log(spec.epsilon / np.pi)
    return float(log_phase + np.sum(log_box_probability(r_star, spec.box)))


def error_decomposition(theta, spec, profile):
    """(E+, E-) of the sup-norm lower bound for members of the phase boxes.

    E+ = (1-2eps^2)(|a|_{l1,<=m2}^2 - |a|_{l1,<=m1}^2) + 2eps^2 |a|_{l2,<=m2}^2 + |a|_{l2,>m2}^2
    E- = -sum over j != k with |j| > m2 or |k| > m2 of a_j a_k,   a = c r.
    """
    e_plus, e_minus = error_decomposition_batch(theta.r[None, :], spec, profile)
    return float(e_plus[0]), float(e_minus[0])


def error_decomposition_batch(r, spec, profile):
    if spec.m1 > spec.m2:
        raise DomainError("error decomposition needs m1 <= m2")
    a = profile.c * np.atleast_2d(r)
    k = profile.k
    in2 = np.abs(k) <= spec.m2
    in1 = np.abs(k) <= spec.m1
    e2 = spec.epsilon ** 2
    l1_2 = a[:, in2].sum(axis=1)
    l1_1 = a[:, in1].sum(axis=1)
    l2_in = (a[:, in2] ** 2).sum(axis=1)
    l2_out = (a[:, ~in2] ** 2).sum(axis=1)
    e_plus = (1 - 2 * e2) * (l1_2 ** 2 - l1_1 ** 2) + 2 * e2 * l2_in + l2_out
    total = a.sum(axis=1)
    # all off-diagonal pairs minus the pairs with both indices inside
    off_all = total ** 2 - (a ** 2).sum(axis=1)
    off_in = l1_2 ** 2 - l2_in
    e_minus = -(off_all - off_in)
    return e_plus, e_minus


def lower_bound_value(theta, spec, profile):
    """(1-2eps^2)(sum_{|k|<=m1} c_k r_k)^2 + E+ + E-."""
    e_plus, e_minus = error_decomposition(theta, spec, profile)
    inner = np.dot(profile.c, theta.r * (np.abs(profile.k) <= spec.m1))
    return (1 - 2 * spec.epsilon ** 2) * inner ** 2 + e_plus + e_minus


def e_threshold(spec, profile, a):
    """f(eps) = (z - a)^2 - (1-2eps^2)(sum_{|k|<=m1} c_k^2 / sum c^2 * z)^2.

    E >= f(eps) guarantees sup|u| >= z - a for members of U.
    """
    share = np.sum(profile.c_of(np.arange(-spec.m1, spec.m1 + 1)) ** 2) / profile.c2_sum
    return (spec.z - a) ** 2 - (1 - 2 * spec.epsilon ** 2) * (share * spec.z) ** 2


def sample_conditioned(spec, family, profile, stream, block_index, count):
    """Draws of theta conditioned on U, by direct construction.

    Boxed moduli come from the Rayleigh law truncated to [r*, r* + eps^beta]
    (inverse CDF in a form that stays finite for large r*); boxed phases are
    uniform on their arcs around the aligned values anchored at the sampled
    phi_0, phi_1.  Everything else is drawn unconditioned.
    """
    gen = stream.generator(block_index)
    K = 2 * profile.N + 1
    k = profile.k
    r = rayleigh_from_uniform(1.0 - gen.random((count, K)))
    phi = TWO_PI * gen.random((count, K))
    u_box = gen.random((count, K))
    u_arc = gen.random((count, K))
    r_star = family.moduli(profile)
    h = spec.box
    sel = np.abs(k) <= spec.m1
    span = -np.expm1(-(2.0 * r_star * h + h * h))
    boxed = np.sqrt(r_star ** 2 - np.log1p(-u_box * span))
    r[:, sel] = np.minimum(boxed[:, sel], (r_star + h)[sel])
    corr = family.phase_correction(profile)
    N = profile.N
    phi0_star = phi[:, N] + corr[N]
    x_star = phi0_star - (phi[:, N + 1] + corr[N + 1]) + family.t
    ph = (np.abs(k) <= spec.m2) & (k != 0) & (k != 1)
    kk = k[ph]
    centre = phi0_star[:, None] - kk * x_star[:, None] + kk * kk * family.t - corr[ph]
    phi[:, ph] = np.mod(centre + spec.epsilon * (2.0 * u_arc[:, ph] - 1.0), TWO_PI)
    return r, phi


@dataclass(frozen=True)
class ContainmentReport:
    n_samples: int
    z: float
    a: float
    c: float
    sup_failures: int
    e_failures: int
    min_sup_margin: float
    min_e: float
    non_members: int

    def row(self):
        return (self.n_samples, self.z, self.a, self.c, self.sup_failures, self.e_failures,
                self.min_sup_margin, self.min_e, self.non_members)


def _containment_block(spec, family, profile, stream, block_index, count, a, c):
    r, phi = sample_conditioned(spec, family, profile, stream, block_index, count)
    members = _membership(r, phi, spec, family, profile)
    modes = batch_modes(profile, r, phi, family.t, family.variant, family.epsilon)
    sups = sup_norm_batch(modes, profile.k)[0]
    e_plus, e_minus = error_decomposition_batch(r, spec, profile)
    E = e_plus + e_minus
    margin = sups - (spec.z - a)
    return (int(np.count_nonzero(margin < 0)), int(np.count_nonzero(E < -c * spec.epsilon)),
            float(margin.min()), float(E.min()), int(np.count_nonzero(~members)))


def containment_experiment(spec, family, profile, n_samples, stream, a=None, c=1.0, workers=1):
    """Frequency of U-members whose sup falls below z - a, and of E < -c eps."""
    a = spec.epsilon if a is None else a
    tasks = [(spec, family, profile, stream, i, m, a, c) for i, m in block_slices(n_samples)]
    parts = ordered_map(_containment_block, tasks, workers)
    return ContainmentReport(
        n_samples=int(n_samples), z=float(spec.z), a=float(a), c=float(c),
        sup_failures=sum(p[0] for p in parts), e_failures=sum(p[1] for p in parts),
        min_sup_margin=min(p[2] for p in parts), min_e=min(p[3] for p in parts),
        non_members=sum(p[4] for p in parts))


def _membership_block(spec, family, profile, stream, block_index, count):
    r, phi = sample_block(stream, 2 * profile.N + 1, block_index, count)
    return int(np.count_nonzero(_membership(r, phi, spec, family, profile)))


def membership_frequency(spec, family, profile, n_samples, stream, workers=1):
    """Unconditioned Monte Carlo: (hits, n) for theta in U."""
    tasks = [(spec, family, profile, stream, i, m) for i, m in block_slices(n_samples)]
    return sum(ordered_map(_membership_block, tasks, workers)), int(n_samples)
