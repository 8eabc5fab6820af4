"""(G, ell)-marginal sequences: per-class distributions with the balance law.

A marginal sequence assigns a distribution on Omega to every populated
variable class and a joint on Omega^{d} to every populated constraint class
(axes in the class's canonical position order).  The balance condition MS3
says that for every variable class T, averaging the position-j marginals of
the constraint joints over all (class, position) pairs whose neighbor class
is T reproduces q_T; empirical sequences satisfy it exactly by double
counting of clones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import InvalidArgument, MissingKey
from ..localstruct.localdist import LocalDistribution, local_distribution
from ..localstruct.template import neighborhood
from ..simplex import uniform


class GraphClasses:
    """Depth-ell class structure of a concrete factor graph.

    Precomputes, for every variable, its class key, and for every factor,
    its class key plus the neighbor variables in canonical position order;
    this is the scaffolding every windowed or per-class computation uses.
    """

    def __init__(self, g, ell: int):
        self.g = g
        self.ell = ell
        model = g.model
        self.var_key = []
        self.var_classes: dict = {}
        for x in range(model.n):
            t = neighborhood(g, ("var", x), ell)
            self.var_key.append(t.key)
            self.var_classes.setdefault(t.key, ([], t))[0].append(x)
        self.fac_key = []
        self.fac_classes: dict = {}
        self.fac_canonical_neighbors = []  # per factor: variable ids in canonical order
        for a in range(model.m):
            t = neighborhood(g, ("fac", a), ell)
            self.fac_key.append(t.key)
            self.fac_classes.setdefault(t.key, ([], t))[0].append(a)
            nbrs = g.factor_neighbors[a]
            self.fac_canonical_neighbors.append(
                tuple(nbrs[slot][0] for slot in t.canonical_root_order)
            )

    @cached_property
    def neighbor_keys(self) -> dict:
        """Per constraint class, the variable-class key at each canonical position."""
        out = {}
        for key, (members, t) in self.fac_classes.items():
            a = members[0]
            out[key] = tuple(self.var_key[x] for x in self.fac_canonical_neighbors[a])
        return out

    @cached_property
    def lambda_dist(self) -> LocalDistribution:
        return local_distribution(self.g, self.ell)

    def class_sizes(self) -> tuple:
        n_t = {key: len(members) for key, (members, _) in self.var_classes.items()}
        m_t = {key: len(members) for key, (members, _) in self.fac_classes.items()}
        return n_t, m_t


@dataclass(frozen=True)
class MarginalSequence:
    ell: int
    var_dists: dict  # var class key -> distribution on Omega
    fac_joints: dict  # fac class key -> joint on Omega^d, canonical axes
    classes: GraphClasses = field(repr=False)

    def var(self, key: str) -> np.ndarray:
        if key not in self.var_dists:
            raise MissingKey(f"marginal sequence lacks variable class {key}")
        return self.var_dists[key]

    def joint(self, key: str) -> np.ndarray:
        if key not in self.fac_joints:
            raise MissingKey(f"marginal sequence lacks constraint class {key}")
        return self.fac_joints[key]

    def joint_marginal(self, key: str, pos: int) -> np.ndarray:
        j = self.joint(key)
        axes = tuple(i for i in range(j.ndim) if i != pos)
        return j.sum(axis=axes)


def empirical_sequence(g, sigma, ell: int, classes: GraphClasses | None = None) -> MarginalSequence:
    """The marginal sequence induced by a concrete assignment.

    `sigma` is a sequence of alphabet symbols, one per variable.
    """
    if classes is None:
        classes = GraphClasses(g, ell)
    alpha = g.model.alphabet
    k = alpha.size
    values = [alpha.index(s) for s in sigma]
    if len(values) != g.model.n:
        raise InvalidArgument("assignment length does not match the model")

    var_dists = {}
    for key, (members, _) in classes.var_classes.items():
        counts = np.zeros(k)
        for x in members:
            counts[values[x]] += 1.0
        var_dists[key] = counts / len(members)

    fac_joints = {}
    for key, (members, t) in classes.fac_classes.items():
        d = t.root_degree
        counts = np.zeros((k,) * d)
        for a in members:
            idx = tuple(values[x] for x in classes.fac_canonical_neighbors[a])
            counts[idx] += 1.0
        fac_joints[key] = counts / len(members)

    return MarginalSequence(ell, var_dists, fac_joints, classes)


def uniform_sequence(g, ell: int, classes: GraphClasses | None = None) -> MarginalSequence:
    """Uniform marginals with product (uniform) joints on every populated class."""
    if classes is None:
        classes = GraphClasses(g, ell)
    k = g.model.alphabet.size
    var_dists = {key: uniform(k) for key in classes.var_classes}
    fac_joints = {
        key: np.full((k,) * t.root_degree, k ** (-t.root_degree))
        for key, (_, t) in classes.fac_classes.items()
    }
    return MarginalSequence(ell, var_dists, fac_joints, classes)


def ms3_residual(seq: MarginalSequence) -> float:
    """Worst absolute entry of the MS3 balance sums (0 for empirical sequences)."""
    classes = seq.classes
    lam = classes.lambda_dist
    worst = 0.0
    for vkey in seq.var_dists:
        acc = np.zeros_like(seq.var_dists[vkey])
        for fkey in seq.fac_joints:
            weight = lam.entries[fkey].weight
            for pos, nkey in enumerate(classes.neighbor_keys[fkey]):
                if nkey == vkey:
                    acc = acc + weight * (seq.joint_marginal(fkey, pos) - seq.var_dists[vkey])
        worst = max(worst, float(np.abs(acc).max()))
    return worst
