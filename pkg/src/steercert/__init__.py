"""Steering-based certification of states, measurements and randomness.

One trusted measuring party (Bob) and one untrusted (Alice) share a
bipartite state. The package builds the steering functional tied to a
Schmidt vector, computes its quantum maximum and local-hidden-state
bounds, certifies realizations that reach the maximum, constructs
extremal d^2-outcome POVMs and the residual checks that certify them,
and quantifies the local randomness this guarantees. A three-setting
qutrit Bell functional extends the certificate to a fully untrusted
Alice.
"""

__version__ = "0.1.0"

from .errors import (
    ContractError,
    DomainError,
    InvalidObservableError,
    NotExtremalError,
    SizeError,
    SteercertError,
)
from .linalg import (
    DEFAULT_TOL,
    DIM_CAP,
    Ket,
    check_density_matrix,
    dagger,
    expectation,
    haar_unitary,
    hermitian_eig,
    partial_trace,
    tensor,
)
from .measurements import (
    CorrelationTable,
    GeneralizedObservable,
    Povm,
    correlator,
    generalized_pauli,
    is_projective,
    observable_to_povm,
    omega,
    povm_to_observable,
    random_povm,
    table_from_realization,
    unitary_observable_povm,
)
from .states import (
    Realization,
    SchmidtVector,
    dress_realization,
    ideal_realization,
    maximally_entangled,
    random_schmidt_vector,
    schmidt_state,
)
from .steering import (
    LhsOptimum,
    SteeringFunctional,
    evaluate,
    functional_coefficients,
    lhs_bound_exact,
    lhs_bound_paper_upper,
    quantum_maximum,
    steering_operator,
    violation_gap,
)
from .selftest import (
    VERDICT_TOL,
    CertReport,
    certify,
    commutation_residual,
    extract_bob_unitary,
    stabilizer_residuals,
    ztilde_spectrum,
)
from .povm import (
    DEFAULT_PHASE_TABLES,
    PhaseTable,
    PovmValidationReport,
    covariant_povm,
    default_phase_table,
    is_extremal_rank_one,
    partial_povm,
    sidon_check,
    theorem3_residuals,
    validate_povm,
    wbasis_coefficients,
)
from .randomness import (
    RandomnessReport,
    eve_bruteforce_oracle,
    guessing_probability,
    min_entropy,
    outcome_distribution,
    randomness_report,
)
from .bell3 import (
    BELL3_BOUND,
    BellFunctional3,
    DressedAlice,
    ExtendedCheckReport,
    bell_value,
    dressed_alice,
    extended_certification_check,
    seesaw_details,
    seesaw_optimize,
)

__all__ = [
    "__version__",
    "SteercertError", "SizeError", "DomainError", "ContractError",
    "InvalidObservableError", "NotExtremalError",
    "DIM_CAP", "DEFAULT_TOL", "Ket", "dagger", "tensor", "partial_trace",
    "hermitian_eig", "haar_unitary", "expectation", "check_density_matrix",
    "omega", "generalized_pauli", "Povm", "GeneralizedObservable",
    "povm_to_observable", "observable_to_povm", "is_projective",
    "unitary_observable_povm", "CorrelationTable", "correlator",
    "table_from_realization", "random_povm",
    "SchmidtVector", "maximally_entangled", "schmidt_state", "Realization",
    "ideal_realization", "dress_realization", "random_schmidt_vector",
    "SteeringFunctional", "functional_coefficients", "quantum_maximum",
    "steering_operator", "evaluate", "LhsOptimum", "lhs_bound_exact",
    "lhs_bound_paper_upper", "violation_gap",
    "VERDICT_TOL", "CertReport", "certify", "stabilizer_residuals",
    "commutation_residual", "ztilde_spectrum", "extract_bob_unitary",
    "DEFAULT_PHASE_TABLES", "PhaseTable", "default_phase_table", "sidon_check",
    "covariant_povm", "partial_povm", "PovmValidationReport", "validate_povm",
    "is_extremal_rank_one", "wbasis_coefficients", "theorem3_residuals",
    "RandomnessReport", "outcome_distribution", "guessing_probability",
    "min_entropy", "eve_bruteforce_oracle", "randomness_report",
    "BELL3_BOUND", "BellFunctional3", "bell_value", "seesaw_optimize",
    "seesaw_details", "DressedAlice", "dressed_alice",
    "ExtendedCheckReport", "extended_certification_check",
]
