"""Minimum guesswork of quantum ensembles under balanced cost functions.

Computes the minimum expected cost of sequentially guessing which state of a
known ensemble was drawn.  For uniform-prior qubit ensembles the problem is
solved exactly through an equivalent quadratic assignment problem (exhaustive
enumeration, or in closed form for benevolent Bloch Gram matrices); in
arbitrary dimension a sufficient optimality condition certifies two-outcome
measurements.
"""

from .costs import (
    CostFunction,
    apply,
    balance_certificate,
    compose,
    cost_function,
    cost_gram,
    identity_cost,
    identity_numbering,
    invert,
)
from .engine import (
    GuessworkReport,
    NumberingMeasurement,
    condition_check,
    effective_operator,
    guesswork_value,
    min_guesswork_general,
    min_guesswork_qubit,
    optimal_two_outcome_measurement,
    permute_problem,
    simulate,
    tracenorm_argmax,
    zigzag_candidate,
)
from .ensembles import (
    Ensemble,
    EnsembleFamilySpec,
    antiprism_h_bound,
    constant_overlap_check,
    generate_mub,
    generate_polygon_antiprism,
    generate_random_uniform_prior,
    generate_sic,
    is_uniform_prior,
    validate,
)
from .errors import FactorialCapError, NumericalCheckError
from .operators import (
    SpectralParts,
    from_bloch,
    is_psd,
    pauli_vector,
    spectral_parts,
    trace_norm,
)
from .qap import (
    BenevolenceReport,
    QapInstance,
    benevolent_solve,
    bloch_gram,
    brute_force_solve,
    find_benevolent_permutation,
    is_benevolent,
    qap_objective,
    zigzag_numbering,
)

__version__ = "0.1.0"
