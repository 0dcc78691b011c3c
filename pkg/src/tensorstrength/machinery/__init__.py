"""One inductive layer of the shift / derivative / covariant argument on concrete presentations."""

from .covariant import (
    BoundReport,
    CovariantExpansion,
    MembershipResult,
    Pipeline,
    bound_N,
    covariant_decompose,
    covariant_expand,
    covariant_tensors,
    strength_from_membership,
)
from .derivative import (
    DEFAULT_BOX,
    DirectionalDerivative,
    box_vectors,
    decomposable_point,
    find_direction,
)
from .expansion import (
    PhiExpansion,
    base_coordinates,
    check_split,
    direct_coefficient,
    h_at,
    phi_expand,
    reconstruct_top,
)
from .presentation import (
    ClosedSetPresentation,
    SpecializationReport,
    coordinate_header,
    coordinate_names,
    delta_degree,
    flattening_matrices,
    rank_locus,
    rank_sampler,
    specialize_mod_p,
)

__all__ = [
    "BoundReport", "CovariantExpansion", "MembershipResult", "Pipeline", "bound_N",
    "covariant_decompose", "covariant_expand", "covariant_tensors", "strength_from_membership",
    "DEFAULT_BOX", "DirectionalDerivative", "box_vectors", "decomposable_point", "find_direction",
    "PhiExpansion", "base_coordinates", "check_split", "direct_coefficient", "h_at", "phi_expand",
    "reconstruct_top", "ClosedSetPresentation", "SpecializationReport", "coordinate_header",
    "coordinate_names", "delta_degree", "flattening_matrices", "rank_locus", "rank_sampler",
    "specialize_mod_p",
]
