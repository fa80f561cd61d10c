"""Exact and high-precision construction of tridiagonal systems of q-Racah type."""

from .scalars import QQ, FieldScalar, PrecisionConfig, complex_field, q_bracket, scalar
from .poly import Polynomial, poly_roots, rational_roots, tau_eta
from .linalg import Matrix, Subspace, lagrange_idempotents
from .uqmodule import (
    RLCoefficients,
    StandardModule,
    evaluation_module,
    rl_coefficients,
    standard_module,
    tensor_product,
    verify_coproduct_powers,
    verify_rl_properties,
    verify_uq_relations,
)
from .drinfeld import (
    SplitSequence,
    alpha_for_root,
    drinfeld_linear,
    drinfeld_polynomial,
    module_for_polynomial,
    module_for_split_sequence,
    normalized_split,
    split_sequence,
)
from .tdsystem import (
    ParameterArray,
    QRacahParams,
    TDRealization,
    build_AAstar,
    condition_ii,
    construct_realization,
    derived_constants,
    eigen_sequences,
    fit_qracah,
    parameter_array_of,
    shape_check,
    verify_module_structure,
    verify_td_axioms,
    verify_tridiagonal_relations,
)

__version__ = "0.1.0"
