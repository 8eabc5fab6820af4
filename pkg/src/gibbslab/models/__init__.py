from .weights import WeightFunction
from .spec import ModelSpec, ValidationReport, validate
from .graph import FactorGraph, sample_graph, dist, girth, is_l_acyclic
from .gibbs import weight, log_weight, partition_function_exact, gibbs, PARTITION_BUDGET
from .tensorize import tensor_graph
from .builders import ising, potts, ksat, ising_cycle_graph, path_graph
from .probes import concentration_probe

__all__ = [
    "WeightFunction",
    "ModelSpec",
    "ValidationReport",
    "validate",
    "FactorGraph",
    "sample_graph",
    "dist",
    "girth",
    "is_l_acyclic",
    "weight",
    "log_weight",
    "partition_function_exact",
    "gibbs",
    "PARTITION_BUDGET",
    "tensor_graph",
    "ising",
    "potts",
    "ksat",
    "ising_cycle_graph",
    "path_graph",
    "concentration_probe",
]
