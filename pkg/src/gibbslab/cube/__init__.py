from .measure import (
    Alphabet,
    DenseMeasure,
    empirical,
    marginal,
    point_mass,
    product_measure,
    block_measure,
    two_level_mixture,
    two_halves_product,
)
from .partitions import CoordinatePartition, StatePartition
from .regularity import (
    RegularityVerdict,
    HomogeneityReport,
    is_regular_on,
    regular_with_respect_to,
    index,
    refine_irregular,
    decompose,
    check_homogeneous,
)
from .states import (
    state_deviation,
    is_state,
    is_symmetric,
    extract_states,
    tensor_square,
)

__all__ = [
    "Alphabet",
    "DenseMeasure",
    "empirical",
    "marginal",
    "point_mass",
    "product_measure",
    "block_measure",
    "two_level_mixture",
    "two_halves_product",
    "CoordinatePartition",
    "StatePartition",
    "RegularityVerdict",
    "HomogeneityReport",
    "is_regular_on",
    "regular_with_respect_to",
    "index",
    "refine_irregular",
    "decompose",
    "check_homogeneous",
    "state_deviation",
    "is_state",
    "is_symmetric",
    "extract_states",
    "tensor_square",
]
