"""The pairing construction: G -> G tensor G over the pair alphabet."""
from __future__ import annotations

import numpy as np

from .graph import FactorGraph
from .spec import ModelSpec
from .weights import WeightFunction


def _tensor_table(table: np.ndarray) -> np.ndarray:
    """psi^(x)( (w_1,w'_1), ..., (w_h,w'_h) ) = psi(w...) * psi(w'...)."""
    h = table.ndim
    k = table.shape[0]
    outer = np.multiply.outer(table, table)  # axes: i_1..i_h, j_1..j_h
    order = [axis for pair in ((i, h + i) for i in range(h)) for axis in pair]
    return outer.transpose(order).reshape((k * k,) * h)


def tensor_graph(g: FactorGraph) -> FactorGraph:
    """The same matching over the squared model; Z(G tensor) = Z(G)^2 and the
    Gibbs measure is the product of two independent copies, coordinatewise
    paired."""
    model = g.model
    pair_alpha = model.alphabet.pair()
    wfs = {
        wid + "@tensor": WeightFunction(wid + "@tensor", pair_alpha, _tensor_table(wf.table))
        for wid, wf in model.weight_functions.items()
    }
    squared = ModelSpec(
        pair_alpha,
        model.var_types,
        model.fac_types,
        [wid + "@tensor" for wid in model.fac_weights],
        wfs,
    )
    return FactorGraph(squared, g.matching)
