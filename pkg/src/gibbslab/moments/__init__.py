from .sequences import (
    GraphClasses,
    MarginalSequence,
    empirical_sequence,
    ms3_residual,
    uniform_sequence,
)
from .functional import graph_bethe, count_q_valid_ratio, QValidCount
from .restricted import RestrictionWindow, restricted_partition
from .resample import Resampler, resample_local_class, high_girth_guarantee
from .firstmoment import conditional_first_moment
from .judicious import is_judicious
from .planted import planted_sample

__all__ = [
    "GraphClasses",
    "MarginalSequence",
    "empirical_sequence",
    "ms3_residual",
    "uniform_sequence",
    "graph_bethe",
    "count_q_valid_ratio",
    "QValidCount",
    "RestrictionWindow",
    "restricted_partition",
    "Resampler",
    "resample_local_class",
    "high_girth_guarantee",
    "conditional_first_moment",
    "is_judicious",
    "planted_sample",
]
