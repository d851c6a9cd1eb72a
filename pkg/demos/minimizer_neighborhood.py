"""The cheapest datum that reaches height z, and the set around it.

r_k* = c_k z / sum c^2 with all phases lined up at (t, x*) reaches z exactly
at minimal cost z^2 / sum c^2.  The neighborhood U boxes moduli and phases
around it; its probability has a closed form, and every member keeps a sup
close to z.
"""
import numpy as np

from roguewave.minimizer import (
    MinimizerFamily, NeighborhoodSpec, build_minimizer, containment_experiment, membership_frequency,
    neighborhood_probability_exact, neighborhood_spec, objective,
)
from roguewave.propagate import linear_flow
from roguewave.sampling import SeededStream
from roguewave.spectrum import CoefficientProfile, sup_norm

profile = CoefficientProfile(1.0)
fam = MinimizerFamily(z=3.0, t=1.2, x_star=2.0, phi0_star=0.4)
theta = build_minimizer(fam, profile)
s = sup_norm(linear_flow(theta, fam.t))
print(f"sup = {s.value:.12f} at x = {s.argmax:.8f}; cost {objective(theta):.6f} = z^2/sum c^2 "
      f"{9 / profile.c2_sum:.6f}")

# A loose neighborhood where Monte Carlo sees plenty of members.
spec = NeighborhoodSpec(epsilon=0.8, z0=0.4, alpha=0.5, beta=0.4, m1=2, m2=2)
hits, n = membership_frequency(spec, spec.family(), profile, 100_000, SeededStream(1))
print(f"P(U): closed form {np.exp(neighborhood_probability_exact(spec, spec.family(), profile)):.5f}, "
      f"Monte Carlo {hits / n:.5f}")

# A tight one at eps = 0.1: too rare to hit, so sample it directly and check its sups.
spec = neighborhood_spec(profile, 0.1, 1.0)
rep = containment_experiment(spec, spec.family(), profile, 20_000, SeededStream(2))
print(f"eps = 0.1 (m1 = {spec.m1}, m2 = {spec.m2}): {rep.sup_failures} of {rep.n_samples} members fall "
      f"below z - eps; smallest margin {rep.min_sup_margin:.3f}")
