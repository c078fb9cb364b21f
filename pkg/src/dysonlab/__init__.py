"""dysonlab: numerics for one-dimensional long-range spin chains.

Transfer-operator eigenpairs and pressure, exact finite-volume Gibbs
windows with long-range couplings, Dobrushin uniqueness coefficients,
Gaussian concentration checks, and left-right decoupling densities that
cross-validate the eigenfunction construction.
"""

from .errors import BudgetExceededError, ConvergenceError, RegimeError
from .model import (
    ISING,
    PairInteraction,
    PotentialSpec,
    RegularityReport,
    SpinAlphabet,
    beta_dobrushin,
    build_regularity_report,
    custom_pair_interaction,
    custom_pair_potential,
    dobrushin_bar_c,
    dyson_interaction,
    dyson_potential,
    extensibility_defect,
    good_future_sum,
    interaction_for,
    potential_value,
    potential_values,
    product_interaction,
    product_potential,
    site_oscillation,
    uac_sum,
    variation,
    walters_diagnostic,
)
from .tails import ALTERNATING, FREE, MINUS, PLUS, Tail, parse_tail, periodic
from .transfer import (
    CylinderFunction,
    TransferModel,
    birkhoff_sum,
    build_transfer_model,
    dominant_eigenpair,
    half_line_kernel,
    kernel_consistency_check,
    markov_equilibrium,
    quasi_normalization_defect,
    transfer_weights,
)

__version__ = "0.1.0"
