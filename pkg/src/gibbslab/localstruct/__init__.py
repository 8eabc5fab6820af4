from .template import Template, neighborhood, canonical_key, reroot, truncate
from .localdist import LocalDistribution, LocalEntry, local_distribution
from .limits import FamilySpec, limit_tree

__all__ = [
    "Template",
    "neighborhood",
    "canonical_key",
    "reroot",
    "truncate",
    "LocalDistribution",
    "LocalEntry",
    "local_distribution",
    "FamilySpec",
    "limit_tree",
]
