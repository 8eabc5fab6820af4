"""Exact sum-product root marginals of tree templates.

Unmatched (truncated) constraint slots are summed out freely, i.e. the
boundary beyond the template is free.  Clamped variables contribute a point
indicator instead of their subtree message.
"""
from __future__ import annotations

import numpy as np

from ..errors import InvalidArgument


def _factor_message(template, wfs, alphabet, fac: int, parent_slot: int, clamp) -> np.ndarray:
    """Message from a constraint node to its parent variable slot."""
    wid = template.weights[fac]
    table = np.array(wfs[wid].table, dtype=float)
    # move the parent axis to the front, then contract the rest in order
    table = np.moveaxis(table, parent_slot, 0)
    others = [i for i in range(template.degrees[fac]) if i != parent_slot]
    for pos in range(len(others) - 1, -1, -1):
        slot = others[pos]
        entry = template.slots[fac][slot]
        if entry is None:
            vec = np.ones(alphabet.size)  # dangling slot: free sum
        else:
            vec = _variable_message(template, wfs, alphabet, entry[0], entry[1], clamp)
        table = table @ vec  # contracts the current last axis
    out = np.asarray(table, dtype=float)
    return out / out.sum()


def _variable_message(template, wfs, alphabet, var: int, parent_slot: int, clamp) -> np.ndarray:
    if var in clamp:
        vec = np.zeros(alphabet.size)
        vec[clamp[var]] = 1.0
        return vec
    vec = np.ones(alphabet.size)
    for i in range(template.degrees[var]):
        if i == parent_slot:
            continue
        entry = template.slots[var][i]
        if entry is None:
            continue
        vec = vec * _factor_message(template, wfs, alphabet, entry[0], entry[1], clamp)
    total = vec.sum()
    if total <= 0.0:
        raise InvalidArgument("zero message; clamped configuration has no weight")
    return vec / total


def tree_root_marginal(template, weight_functions, alphabet, clamp=None) -> np.ndarray:
    """Gibbs root marginal of a tree template, leaves free unless clamped.

    `clamp` maps template node indices to alphabet symbols.  Matches the
    brute-force marginal of the tree's Gibbs measure exactly (up to float
    roundoff) on complete templates.
    """
    if template.root_kind != "var":
        raise InvalidArgument("root marginal is defined for variable-rooted templates")
    if not template.is_tree:
        raise InvalidArgument("template is not a tree; marginals of cyclic templates are not defined here")
    clamp_idx = {}
    if clamp:
        for node, symbol in clamp.items():
            clamp_idx[int(node)] = alphabet.index(symbol)
    return _variable_message(template, weight_functions, alphabet, template.root, None, clamp_idx)
