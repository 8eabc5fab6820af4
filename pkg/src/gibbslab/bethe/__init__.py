from .maxent import max_entropy_joint
from .treecalc import tree_root_marginal
from .assignment import MarginalAssignment, build_marginal_assignment
from .free_energy import bethe_free_energy
from .uniqueness import UniquenessVerdict, gibbs_uniqueness_check
from .nonrecon import nonreconstruction_estimate

__all__ = [
    "max_entropy_joint",
    "tree_root_marginal",
    "MarginalAssignment",
    "build_marginal_assignment",
    "bethe_free_energy",
    "UniquenessVerdict",
    "gibbs_uniqueness_check",
    "nonreconstruction_estimate",
]
