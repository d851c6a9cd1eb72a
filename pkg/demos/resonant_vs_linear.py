"""At critical times t ~ 1/eps the nonlinearity matters, but only through resonances.

Compare the split-step solution of i u_t + u_xx = eps^2 |u|^2 u with the
linear flow and with the resonant approximation, which keeps only the
Omega = 0 interactions and so just rotates phases.
"""
import numpy as np

from roguewave.propagate import LINEAR, RESONANT, EvolutionConfig, approximation_errors, lwp_time
from roguewave.sampling import SeededStream, sample_theta
from roguewave.spectrum import CoefficientProfile

profile = CoefficientProfile(1.0)
eps = 0.1
thetas = [sample_theta(SeededStream(7, i), profile) for i in range(8)]
print(f"local existence scale for the first datum: {lwp_time(thetas[0].datum(), eps):.1f}")

for t in (1.0, 5.0, 1 / eps):
    reps = approximation_errors(thetas, t, EvolutionConfig(eps), delta=0.5)
    lin = np.median([r[LINEAR].fl21_err for r in reps])
    res = np.median([r[RESONANT].fl21_err for r in reps])
    print(f"t = {t:5.1f}: median FL^(2,1) error, linear {lin:.3f}, resonant {res:.3f}")
