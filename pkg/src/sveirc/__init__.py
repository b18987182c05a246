"""SVEIR-C epidemic model with saturating fomite-mediated transmission.

Thresholds, stability certificates, endemic equilibria and numerical
persistence checks.
"""

from .dynamics import IntegratorConfig, Trace, check_invariant_region, estimate_tail_floor, integrate
from .equilibria import EquilibriumReport, endemic_residual, find_endemic
from .model import (
    DerivVec,
    ModelParams,
    StateVec,
    dose_response,
    dose_response_slope_at_zero,
    jacobian,
    validate_params,
    vector_field,
)
from .persistence import (
    PersistenceReport,
    boundary_escape_test,
    uniform_persistence_estimate,
    weak_repeller_test,
)
from .stability import (
    StabilityVerdict,
    certify_global_stability,
    jacobian_blocks_at_dfe,
    kamgang_sallet_upper_bound,
    routh_hurwitz_dfe,
)
from .thresholds import (
    ThresholdReport,
    basic_reproduction_number,
    control_reproduction_number,
    disease_free_equilibrium,
    global_threshold_jc,
    next_generation_spectral_radius,
    threshold_report,
)

__version__ = "0.1.0"
