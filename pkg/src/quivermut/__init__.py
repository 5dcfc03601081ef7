"""Quiver mutation for 2-Calabi-Yau tilted algebras, including mutation at cycles, loops and 2-cycles."""

from .quiver import (
    Arrow, MutationError, Potential, Quiver, QuiverError, QuiverWithPotential,
    canonical_form, canonical_labeling, cyclic_derivative, fz_mutate_matrix, fz_mutate_quiver,
    is_isomorphic, minimal_cycles, qp_from_json, qp_to_json, skew_matrix,
    sum_of_minimal_cycles_potential,
)
from .cycle_mutation import (
    CycleSpec, CycleSpecError, ExchangeMatrixS, UndecidableAnnotation, build_exchange_matrix,
    classify_bipartition, derive_cb_indices, find_fz_sequence, mutate_cycle, palu_mutate,
    verify_appendix_identities,
)

__version__ = "0.1.0"
