"""Rare-event lab for the weakly nonlinear cubic Schrodinger equation on the circle."""

__version__ = "0.1.0"

from .spectrum import (  # noqa: E402
    CoefficientProfile,
    ConfigurationError,
    FourierField,
    SupNormPolicy,
    ThetaPoint,
    coefficient,
    evaluate_on_grid,
    fl_norm,
    mass,
    sup_norm,
)
from .sampling import SeededStream, gaussian_invariance_test, sample_theta  # noqa: E402
from .propagate import (  # noqa: E402
    EvolutionConfig,
    approximation_error,
    linear_flow,
    nls_flow,
    resonance_omega,
    resonant_flow,
)
from .ldp import (  # noqa: E402
    cumulant_epsilon,
    legendre,
    pointwise_tail_exact,
    rate_scan,
    sup_tail_mc,
    weighted_sum_tail_mc,
)
from .combinatorics import (  # noqa: E402
    gap_G,
    level_set_count,
    optimal_set,
    partition_count,
    potential_V,
    subset_norm,
    threshold_C,
)
from .minimizer import (  # noqa: E402
    MinimizerFamily,
    build_minimizer,
    containment_experiment,
    error_decomposition,
    neighborhood_membership,
    neighborhood_probability_exact,
    neighborhood_spec,
)
from .growth import GrowthConfig, growth_curve, minimax_growth, snapshots  # noqa: E402
