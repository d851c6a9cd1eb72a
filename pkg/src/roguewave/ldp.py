"""Tail probabilities of sup_x |u(t, x)| and the cumulant/rate-function side.

The pointwise tail is exact (|u(t, x)| is Rayleigh with variance sum c_k^2).
The sup tail is Monte Carlo and is bracketed above by the tail of
sum_k c_k R_k, which dominates the sup through the triangle inequality.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.special import log_ndtr, ndtri

from ._optimize import golden_max
from .parallel import ordered_map
from .propagate import LINEAR, NLS, RESONANT, EvolutionConfig, batch_modes, nls_flow_batch
from .sampling import block_slices, sample_block
from .spectrum import SupNormPolicy, ThetaPoint, sup_norm_batch

WILSON_Z = float(ndtri(0.975))


def pointwise_tail_exact(profile, z, log=False):
    """P(|u(t, x)| > z) = exp(-z^2 / sum c_k^2) at any fixed (t, x)."""
    val = -np.square(z) / profile.c2_sum
    return val if log else np.exp(val)


def wilson_interval(hits, n, zq=WILSON_Z):
    if n == 0:
        return 0.0, 1.0
    p = hits / n
    denom = 1.0 + zq * zq / n
    centre = (p + zq * zq / (2 * n)) / denom
    half = zq * np.sqrt(p * (1 - p) / n + zq * zq / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class TailEstimate:
    z_threshold: float
    probability: float
    ci_low: float
    ci_high: float
    n_samples: int
    hits: int
    master_seed: int = None
    stream_index: int = None

    @property
    def low_confidence(self):
        return self.hits == 0

    def row(self):
        return (self.z_threshold, self.probability, self.ci_low, self.ci_high, self.n_samples, self.hits)


def tail_from_samples(values, z, stream=None):
    """Exceedance estimate P(X > z) from one shared sample set."""
    values = np.asarray(values)
    n = values.size
    hits = int(np.count_nonzero(values > z))
    lo, hi = wilson_interval(hits, n)
    p = hits / n if n else 0.0
    if hits == 0:
        lo = 0.0
    return TailEstimate(float(z), p, min(lo, p), max(hi, p), n, hits,
                        None if stream is None else stream.master_seed,
                        None if stream is None else stream.stream_index)


def _sup_block(profile, t, flow, epsilon, stream, block_index, count, config, policy):
    r, phi = sample_block(stream, 2 * profile.N + 1, block_index, count)
    if flow in (LINEAR, RESONANT):
        mu, alpha = (1, 2.0) if config is None else (config.mu, config.alpha)
        modes = batch_modes(profile, r, phi, t, flow, epsilon, mu, alpha)
        return sup_norm_batch(modes, profile.k, policy)[0]
    if flow == NLS:
        cfg = config or EvolutionConfig(epsilon)
        fields = nls_flow_batch([ThetaPoint(r[i], phi[i], profile) for i in range(count)], t, cfg)
        return sup_norm_batch(np.array([f.modes for f in fields]), fields[0].k, policy)[0]
    raise ValueError(f"unknown flow {flow!r}")


def sup_samples(profile, t, flow, n_samples, stream, epsilon=0.0, config=None, workers=1, policy=None):
    """sup_x |u(t, x)| for n_samples sampled data, in sample order."""
    tasks = [(profile, t, flow, epsilon, stream, i, c, config, policy) for i, c in block_slices(n_samples)]
    parts = ordered_map(_sup_block, tasks, workers)
    return np.concatenate(parts) if parts else np.empty(0)


def sup_tail_mc(profile, t, z, flow, n_samples, stream, epsilon=0.0, config=None, workers=1):
    """Monte Carlo P(sup_x |u(t, x)| > z); an array of z shares one sample set."""
    vals = sup_samples(profile, t, flow, n_samples, stream, epsilon, config, workers)
    if np.ndim(z) == 0:
        return tail_from_samples(vals, z, stream)
    return [tail_from_samples(vals, zz, stream) for zz in z]


def _weighted_block(profile, stream, block_index, count):
    r, _ = sample_block(stream, 2 * profile.N + 1, block_index, count)
    return r @ profile.c


def weighted_sum_samples(profile, n_samples, stream, workers=1):
    tasks = [(profile, stream, i, c) for i, c in block_slices(n_samples)]
    parts = ordered_map(_weighted_block, tasks, workers)
    return np.concatenate(parts) if parts else np.empty(0)


def weighted_sum_tail_mc(profile, z, n_samples, stream, workers=1):
    """Monte Carlo P(sum c_k R_k > z).  Uses the same moduli as sup_tail_mc."""
    vals = weighted_sum_samples(profile, n_samples, stream, workers)
    if np.ndim(z) == 0:
        return tail_from_samples(vals, z, stream)
    return [tail_from_samples(vals, zz, stream) for zz in z]


def cumulant_epsilon(profile, lam, epsilon, term_tol=1e-16, chunk=256):
    """log E exp(eps^{-1/2} lam sum_k c_k R_k), summed over all k.

    Each mode contributes log E e^{s R} = log(1 + sqrt(pi) s e^{s^2/4} Phi(s/sqrt 2))
    with s = lam_eps c_k, lam_eps = eps^{-1/2} lam and R ~ Rayleigh(1/sqrt 2).
    Evaluated in log space; the series runs past the profile truncation
    until terms drop below ``term_tol``.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if lam == 0:
        return 0.0
    lam_eps = lam / np.sqrt(epsilon)
    total = 0.0
    start = 0
    while True:
        k = np.arange(start, start + chunk)
        s = lam_eps * profile.c_of(k)
        with np.errstate(divide="ignore"):
            expo = 0.5 * np.log(np.pi) + np.log(s) + 0.25 * s * s + log_ndtr(s / np.sqrt(2.0))
        terms = np.logaddexp(0.0, expo)
        weights = np.where(k == 0, 1.0, 2.0)
        total += float(np.sum(weights * terms))
        if terms[-1] < term_tol:
            return total
        start += chunk


def cumulant_limit(profile, lam):
    """lam^2/4 sum c_j^2."""
    return 0.25 * lam * lam * profile.c2_sum


def legendre(profile, z):
    """sup_lam (lam z - lam^2/4 sum c^2) = z^2 / sum c^2."""
    return np.square(z) / profile.c2_sum


def legendre_numeric(cumulant, z, lam_hi=1.0, xtol=1e-12):
    """sup over lam >= 0 of lam z - cumulant(lam) by golden section.

    The bracket is doubled until the objective turns down, then refined.
    """
    def obj(lam):
        return lam * z - np.vectorize(cumulant)(lam)

    lo = 0.0
    hi = lam_hi
    while obj(np.array([hi]))[0] >= obj(np.array([0.5 * hi]))[0] and hi < 1e12:
        hi *= 2.0
    lam, val = golden_max(obj, np.array([lo]), np.array([hi]), xtol=xtol)
    return float(max(val[0], obj(np.array([0.0]))[0]))


def schedule(kind="const", c=0.0, gamma=1.0):
    """Observation time t(eps): 'const' gives c, 'power' gives c eps^-gamma."""
    if kind == "const":
        return lambda eps: float(c)
    if kind == "power":
        return lambda eps: float(c) * eps ** (-gamma)
    raise ValueError(f"unknown schedule {kind!r}")


@dataclass(frozen=True)
class RateScan:
    epsilons: tuple
    values: tuple
    lower: tuple
    upper: tuple
    hits: tuple
    n_samples: int
    target: float
    statistic: str
    flagged: tuple = field(default=())

    @property
    def gaps(self):
        return tuple(v - self.target for v in self.values)

    def rows(self):
        return [(e, v, lo, hi, h, v - self.target) for e, v, lo, hi, h in
                zip(self.epsilons, self.values, self.lower, self.upper, self.hits)]


def rate_scan(profile, z0, t_of_eps, flow, epsilons, n_samples, stream, statistic="sup",
              config=None, workers=1):
    """eps log P(statistic > z0 eps^{-1/2}) for each eps.

    statistic: 'sup' (Monte Carlo over the chosen flow), 'pointwise' (exact)
    or 'weighted' (Monte Carlo of sum c_k R_k).  Every eps reuses the same
    stream, so rows are driven by common random numbers.
    """
    epsilons = tuple(float(e) for e in epsilons)
    if any(a <= b for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    vals, lows, highs, hits, flagged = [], [], [], [], []
    weighted = sups = None
    for eps in epsilons:
        z = z0 / np.sqrt(eps)
        if statistic == "pointwise":
            v = eps * pointwise_tail_exact(profile, z, log=True)
            vals.append(v)
            lows.append(v)
            highs.append(v)
            hits.append(-1)  # exact row, no sampling
            continue
        if statistic == "weighted":
            if weighted is None:
                weighted = weighted_sum_samples(profile, n_samples, stream, workers)
            est = tail_from_samples(weighted, z, stream)
        elif statistic == "sup":
            cfg = config
            if flow == NLS and cfg is None:
                cfg = EvolutionConfig(eps)
            # the linear flow does not see eps, so equal times share one sample set
            key = (t_of_eps(eps), None if flow == LINEAR else eps)
            if sups is None or sups[0] != key:
                sups = (key, sup_samples(profile, key[0], flow, n_samples, stream, eps, cfg, workers))
            est = tail_from_samples(sups[1], z, stream)
        else:
            raise ValueError(f"unknown statistic {statistic!r}")
        with np.errstate(divide="ignore"):
            vals.append(eps * np.log(est.probability))
            lows.append(eps * np.log(est.ci_low))
            highs.append(eps * np.log(est.ci_high))
        hits.append(est.hits)
        if est.hits == 0:
            flagged.append(eps)
    return RateScan(epsilons, tuple(vals), tuple(lows), tuple(highs), tuple(hits), int(n_samples),
                    -legendre(profile, z0), statistic, tuple(flagged))


def two_proportion_z(h1, n1, h2, n2):
    """z statistic for equality of two binomial proportions."""
    p = (h1 + h2) / (n1 + n2)
    se = np.sqrt(p * (1 - p) * (1 / n1 + 1 / n2))
    return 0.0 if se == 0 else (h1 / n1 - h2 / n2) / se
