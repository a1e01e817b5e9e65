"""Entanglement robustness and fragility of N-qubit pure states under loss.

An entangled pure state is fragile with respect to a qubit when tracing
that qubit out leaves a separable residual, robust when the residual stays
entangled.  Because a single-qubit loss leaves a residual of rank at most
two, that question is exactly decidable, and fragile states carry a rigid
two-product-term structure.  The package provides:

* state containers and partial operations (``qloss.states``),
* exact separability decisions for the residual regimes plus negativity
  witnesses (``qloss.separability``),
* per-qubit fragility analysis, the two-term canonical form, the local
  operation onto the GHZ state, and the symmetric/regular-polygon
  characterization (``qloss.robustness``),
* the tilted Dicke family and the four-qubit mu family with their closed
  forms (``qloss.dicke_family``),
* a deterministic CLI with CSV + figure output (``qloss.cli``).
"""

from .dicke_family import (
    FamilyPoint,
    family_normalization,
    family_state,
    in_mu_domain,
    mu_state,
    negativity_after_loss,
    pair_negativity,
    pair_pt_determinant,
    predicted_two_loss_fragile,
    reduced_pair_state,
)
from .robustness import (
    CanonicalForm,
    FragilityReport,
    LocalOperation,
    SymmetricFragileForm,
    analyze_fragility,
    fragile_wrt_qubit,
    ghz_class_operation,
    regular_polygon_test,
    symmetric_fragile_form,
)
from .separability import (
    is_pure_product,
    is_separable_residual,
    max_bipartition_negativity,
    negativity,
    rank2_product_decomposition,
    single_cut_negativities,
)
from .states import (
    DensityOperator,
    MajoranaPoints,
    PureState,
    SymmetricState,
    SymmetryError,
    dicke_state,
    ghz_state,
    haar_random_state,
    majorana_to_symmetric,
    partial_trace,
    partial_transpose,
    pure_to_symmetric,
    schmidt_decompose,
    state_fidelity,
    symmetric_to_majorana,
    symmetric_to_pure,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # states
    "PureState",
    "DensityOperator",
    "SymmetricState",
    "MajoranaPoints",
    "SymmetryError",
    "dicke_state",
    "ghz_state",
    "haar_random_state",
    "partial_trace",
    "partial_transpose",
    "schmidt_decompose",
    "state_fidelity",
    "symmetric_to_pure",
    "pure_to_symmetric",
    "symmetric_to_majorana",
    "majorana_to_symmetric",
    # separability
    "negativity",
    "max_bipartition_negativity",
    "single_cut_negativities",
    "is_pure_product",
    "rank2_product_decomposition",
    "is_separable_residual",
    # robustness
    "CanonicalForm",
    "FragilityReport",
    "LocalOperation",
    "SymmetricFragileForm",
    "fragile_wrt_qubit",
    "analyze_fragility",
    "ghz_class_operation",
    "symmetric_fragile_form",
    "regular_polygon_test",
    # dicke family
    "FamilyPoint",
    "family_normalization",
    "family_state",
    "reduced_pair_state",
    "pair_pt_determinant",
    "pair_negativity",
    "mu_state",
    "in_mu_domain",
    "predicted_two_loss_fragile",
    "negativity_after_loss",
]
