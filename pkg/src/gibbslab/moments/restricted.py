"""Restricted partition functions over empirical windows.

Z_{ell, q, delta}(G) sums psi_G(sigma) over the assignments whose empirical
marginal sequence is within total-variation distance delta of q on every
class.  delta >= 1 covers everything; a class populated by G but absent
from q disqualifies every assignment (its distance is maximal).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..models.gibbs import PARTITION_BUDGET, _digit_columns, log_weight_vector
from .sequences import GraphClasses, MarginalSequence


@dataclass(frozen=True)
class RestrictionWindow:
    ell: int
    q: MarginalSequence
    delta: float

    def __post_init__(self):
        if self.delta < 0.0:
            raise ValueError("delta must be >= 0")


def window_mask(g, window: RestrictionWindow, classes: GraphClasses, *, budget: int = PARTITION_BUDGET) -> np.ndarray:
    """Boolean qualification of every assignment (lexicographic order)."""
    k, n = g.model.alphabet.size, g.model.n
    size = k**n
    q, delta = window.q, window.delta
    guard = delta + 1e-12
    if delta >= 1.0:
        return np.ones(size, dtype=bool)
    digits = _digit_columns(k, n)
    mask = np.ones(size, dtype=bool)

    for key, (members, _) in classes.var_classes.items():
        if key not in q.var_dists:
            return np.zeros(size, dtype=bool)
        target = q.var_dists[key]
        cols = digits[:, members]
        dist = np.zeros(size)
        for w in range(k):
            dist += np.abs((cols == w).sum(axis=1) / len(members) - target[w])
        mask &= 0.5 * dist <= guard
        if not mask.any():
            return mask

    for key, (members, t) in classes.fac_classes.items():
        if key not in q.fac_joints:
            return np.zeros(size, dtype=bool)
        d = t.root_degree
        target = q.fac_joints[key].ravel()
        counts = np.zeros((size, k**d))
        rows = np.arange(size)
        for a in members:
            code = np.zeros(size, dtype=np.int64)
            for x in classes.fac_canonical_neighbors[a]:
                code = code * k + digits[:, x]
            counts[rows, code] += 1.0
        dist = np.abs(counts / len(members) - target[None, :]).sum(axis=1)
        mask &= 0.5 * dist <= guard
        if not mask.any():
            return mask
    return mask


def restricted_partition(
    g,
    window: RestrictionWindow,
    *,
    classes: GraphClasses | None = None,
    budget: int = PARTITION_BUDGET,
) -> tuple:
    """(Z_{ell,q,delta}, ln Z_{ell,q,delta}) by exact filtered enumeration."""
    if classes is None:
        classes = GraphClasses(g, window.ell)
    logw = log_weight_vector(g, budget=budget)
    mask = window_mask(g, window, classes, budget=budget)
    if not mask.any():
        return 0.0, float("-inf")
    sel = logw[mask]
    peak = float(sel.max())
    logz = peak + float(np.log(np.exp(sel - peak).sum()))
    z = float(np.exp(sel).sum()) if peak < 700.0 else float(np.exp(logz))
    return z, logz
