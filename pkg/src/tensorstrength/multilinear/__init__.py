"""Symmetric, alternating and ordinary tensors with their functorial maps."""

from .ops import (
    BigradedElement,
    assemble,
    bigraded_split,
    contract,
    induced_map,
    inclusion_maps,
    products,
    wedge,
)
from .tensors import (
    FLAVORS,
    AltTensor,
    LinearMap,
    OrdTensor,
    SymTensor,
    basis,
    coordinates,
    from_coordinates,
    make_tensor,
    random_scalar,
    random_tensor,
    zero_tensor,
)

__all__ = [
    "BigradedElement", "assemble", "bigraded_split", "contract", "induced_map",
    "inclusion_maps", "products", "wedge", "FLAVORS", "AltTensor", "LinearMap", "OrdTensor",
    "SymTensor", "basis", "coordinates", "from_coordinates", "make_tensor", "random_scalar",
    "random_tensor", "zero_tensor",
]
