"""Bounds and estimates for the fully entangled fraction of bipartite d x d states."""

from .bounds import (
    BoundReport,
    ExactnessCertificate,
    correlation_bound,
    exactness_certificate,
    fidelity_from_fef,
    pure_fef,
    reduced_bound,
    report,
    single_fraction,
    spectral_bound,
    thm1_bound,
)
from .errors import FEFError, ParseError, ValidationError
from .estimator import EstimateResult, brute_force_fef_d2, estimate_fef, haar_unitary, objective
from .states import (
    DensityMatrix,
    alpha_family_3x3,
    bloch_decompose,
    horodecki_3x3,
    isotropic,
    load_state,
    make_state,
    max_entangled,
    max_mixed,
    save_state,
    validate,
    weakly_mixed_3x3,
)
from .weyl import bell_basis, expand_in_basis, gellmann_generators, operator_basis, psi_plus

__version__ = "0.1.0"
