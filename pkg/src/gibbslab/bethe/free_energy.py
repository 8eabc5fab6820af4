"""The Bethe free-energy functional over a limiting local distribution.

    B(theta, p) = E[(1 - d_T) H(p_T) | V]
                + (P[F] / P[V]) * E[H(p_T) + <ln psi_T>_{p_T} | F]
"""
from __future__ import annotations

import numpy as np

from ..errors import MissingKey
from ..localstruct.localdist import LocalDistribution
from ..simplex import entropy
from .assignment import MarginalAssignment


def mean_log_psi(joint: np.ndarray, log_table: np.ndarray, order: tuple) -> float:
    """<ln psi>_nu with the table axes permuted into canonical position order."""
    return float(np.sum(joint * np.transpose(log_table, axes=order)))


def bethe_free_energy(theta_ell: LocalDistribution, p: MarginalAssignment, *, weight_functions=None) -> float:
    wfs = weight_functions or theta_ell.meta.get("weight_functions")
    share_v = theta_ell.variable_share
    share_f = theta_ell.constraint_share

    var_term = 0.0
    for key, entry in theta_ell.variable_items():
        if key not in p.variable_marginals:
            raise MissingKey(f"variable class {key} not covered by the marginal assignment")
        d_t = entry.template.root_degree
        var_term += (entry.weight / share_v) * (1 - d_t) * entropy(p.variable(key))

    fac_term = 0.0
    for key, entry in theta_ell.constraint_items():
        joint = p.joint(key)  # raises MissingKey with the key
        tpl = entry.template
        log_table = wfs[tpl.weights[tpl.root]].log_table
        fac_term += (entry.weight / share_f) * (
            entropy(joint) + mean_log_psi(joint, log_table, tpl.canonical_root_order)
        )

    return var_term + (share_f / share_v) * fac_term
