"""Non-reconstruction: sensitivity of a variable to a Gibbs-typical boundary.

For each variable x the boundary is the set of variables at (variable-layer)
distance exactly ell; conditioning on their values makes the inside of the
ball independent of everything else.  The estimate is

    (1/n) sum_x  mean over boundary draws SIGMA ~ mu_G of
        tv( law of x given SIGMA on the boundary , p_{ell, class(x)} ),

with boundary draws sampled exactly from the dense Gibbs measure and the
conditional law computed by exact enumeration of the ball's interior.
"""
from __future__ import annotations

import numpy as np

from ..models.gibbs import PARTITION_BUDGET, gibbs
from ..localstruct.template import neighborhood
from ..rng import stream
from ..simplex import tv
from .assignment import MarginalAssignment


def _var_distance_layers(g, x: int, ell: int):
    """Variables at distance < ell (interior) and == ell (boundary) from x."""
    dist = {("var", x): 0}
    queue = [("var", x)]
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        kind, idx = node
        if dist[node] >= 2 * ell:
            continue
        nbrs = g.variable_neighbors[idx] if kind == "var" else g.factor_neighbors[idx]
        other = "fac" if kind == "var" else "var"
        for nbr, _ in nbrs:
            key = (other, nbr)
            if key not in dist:
                dist[key] = dist[node] + 1
                queue.append(key)
    interior = [i for (k, i), d in dist.items() if k == "var" and d < 2 * ell]
    boundary = [i for (k, i), d in dist.items() if k == "var" and d == 2 * ell]
    return interior, boundary


def _conditional_root_law(g, x, interior, boundary, boundary_values, alphabet):
    """Exact law of sigma_x given the boundary assignment, by enumeration."""
    k = alphabet.size
    inner = sorted(interior)
    pos = {v: i for i, v in enumerate(inner)}
    fixed = dict(zip(boundary, boundary_values))
    count = k ** len(inner)
    idx = np.arange(count)
    digits = np.stack([(idx // k ** (len(inner) - 1 - i)) % k for i in range(len(inner))], axis=1)

    logw = np.zeros(count)
    keep = set(inner) | set(boundary)
    for a, nbrs in enumerate(g.factor_neighbors):
        vars_a = [v for v, _ in nbrs]
        if not any(v in pos for v in vars_a):
            continue
        if any(v not in keep for v in vars_a):
            continue  # touches the outside; irrelevant given the boundary
        lt = g.model.psi(a).log_table.ravel()
        code = np.zeros(count, dtype=np.int64)
        for v in vars_a:
            col = digits[:, pos[v]] if v in pos else fixed[v]
            code = code * k + col
        logw += lt[code]
    w = np.exp(logw - logw.max())
    law = np.zeros(k)
    np.add.at(law, digits[:, pos[x]], w)
    return law / law.sum()


def nonreconstruction_estimate(
    g,
    p: MarginalAssignment,
    ell: int,
    samples: int,
    seed: int,
    *,
    budget: int = PARTITION_BUDGET,
) -> float:
    mu = gibbs(g, budget=budget)
    alphabet = g.model.alphabet
    draws = mu.sample_indices(stream(seed, "nonrecon"), samples)
    sigma_digits = mu.digits[draws]  # (samples, n) symbol indices

    total = 0.0
    for x in range(g.model.n):
        interior, boundary = _var_distance_layers(g, x, ell)
        key_template = neighborhood(g, ("var", x), ell)
        p_ref = p.variable(key_template.key, key_template)
        if not boundary:
            # ball swallows the component; conditioning pins nothing
            law = np.zeros(alphabet.size)
            for idx in range(mu.size):
                law[mu.digits[idx, x]] += mu.mass[idx]
            total += tv(law, p_ref)
            continue
        acc = 0.0
        seen: dict = {}
        for s in range(samples):
            values = tuple(int(sigma_digits[s, b]) for b in boundary)
            if values not in seen:
                seen[values] = _conditional_root_law(
                    g, x, interior, boundary, values, alphabet
                )
            acc += tv(seen[values], p_ref)
        total += acc / samples
    return total / g.model.n
