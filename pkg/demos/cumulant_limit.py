"""The cumulant generating function behind the upper bound, and its limit.

eps * log E exp(eps^{-1/2} lam sum c_k R_k) tends to lam^2/4 sum c^2; the
Legendre transform of that limit is the rate z^2 / sum c^2.
"""
from roguewave.ldp import cumulant_epsilon, cumulant_limit, legendre, legendre_numeric
from roguewave.spectrum import CoefficientProfile

profile = CoefficientProfile(1.0)
limit = cumulant_limit(profile, 1.0)
print(f"limit lam^2/4 sum c^2 at lam = 1: {limit:.6f}")
for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
    v = eps * cumulant_epsilon(profile, 1.0, eps)
    print(f"  eps = {eps:.0e}: {v:.6f}  (relative gap {(v - limit) / limit:+.4f})")

print("\nLegendre transform, numeric vs closed form:")
for z in (0.5, 1.0, 1.7):
    num = legendre_numeric(lambda lam: cumulant_limit(profile, lam), z)
    print(f"  z = {z}: {num:.12f}  {legendre(profile, z):.12f}")
