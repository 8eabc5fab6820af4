"""Factor graphs as type-preserving clone matchings, and their multigraph view.

Cycle lengths are counted in variable nodes: a constraint binding the same
variable twice is a cycle of length 1, two constraints joining the same
pair of variables form a cycle of length 2, and the Ising cycle on n
variables has one cycle of length n.  (Equivalently: half the edge count of
the cycle in the bipartite clone-contracted multigraph.)
"""
from __future__ import annotations

import json
from functools import cached_property

import numpy as np

from ..errors import InvalidArgument
from ..rng import stream
from .spec import ModelSpec, validate


class FactorGraph:
    """A bijection from variable clones to constraint clones of a model."""

    def __init__(self, model: ModelSpec, matching):
        match = np.asarray(matching, dtype=np.intp)
        total = model.num_clones
        if match.shape != (total,):
            raise InvalidArgument(f"matching has {match.size} entries, expected {total}")
        if np.any(np.sort(match) != np.arange(total)):
            raise InvalidArgument("matching is not a bijection on clones")
        vt = model.var_clone_types_flat()
        ft = model.fac_clone_types_flat()
        for vc in range(total):
            if vt[vc] != ft[match[vc]]:
                raise InvalidArgument(
                    f"matching does not preserve types at variable clone {vc}"
                )
        match = match.copy()
        match.setflags(write=False)
        self.model = model
        self.matching = match  # var clone -> fac clone

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.matching)
        inv[self.matching] = np.arange(self.matching.size)
        inv.setflags(write=False)
        return inv  # fac clone -> var clone

    # -- adjacency ---------------------------------------------------------------
    def partner_of_var(self, x: int, i: int) -> tuple:
        fc = int(self.matching[self.model.var_clone(x, i)])
        a = int(self.model.fac_clone_owner[fc])
        return a, fc - int(self.model.fac_clone_offsets[a])

    def partner_of_fac(self, a: int, j: int) -> tuple:
        vc = int(self.inverse[self.model.fac_clone(a, j)])
        x = int(self.model.var_clone_owner[vc])
        return x, vc - int(self.model.var_clone_offsets[x])

    @cached_property
    def factor_neighbors(self) -> tuple:
        """Per constraint, the tuple of (variable, variable-slot) per slot."""
        out = []
        for a in range(self.model.m):
            out.append(tuple(self.partner_of_fac(a, j) for j in range(self.model.fac_degree(a))))
        return tuple(out)

    @cached_property
    def variable_neighbors(self) -> tuple:
        """Per variable, the tuple of (constraint, constraint-slot) per slot."""
        out = []
        for x in range(self.model.n):
            out.append(tuple(self.partner_of_var(x, i) for i in range(self.model.var_degree(x))))
        return tuple(out)

    def fingerprint(self) -> tuple:
        """Graph identity up to relabeling of like factors: the sorted tuple of
        (weight id, per-slot variables) per constraint."""
        return tuple(
            sorted(
                (self.model.fac_weights[a], tuple(x for x, _ in nbrs))
                for a, nbrs in enumerate(self.factor_neighbors)
            )
        )

    # -- serialization -------------------------------------------------------------
    def to_json(self) -> str:
        pairs = []
        for x in range(self.model.n):
            for i in range(self.model.var_degree(x)):
                a, j = self.partner_of_var(x, i)
                pairs.append([[x, i], [a, j]])
        return json.dumps(pairs)

    @staticmethod
    def from_json(model: ModelSpec, text: str) -> "FactorGraph":
        match = np.empty(model.num_clones, dtype=np.intp)
        for (x, i), (a, j) in json.loads(text):
            match[model.var_clone(x, i)] = model.fac_clone(a, j)
        return FactorGraph(model, match)

    def __repr__(self) -> str:
        return f"FactorGraph(n={self.model.n}, m={self.model.m})"


def sample_graph(model: ModelSpec, seed: int) -> FactorGraph:
    """Uniform type-preserving matching: an independent uniform bijection
    between the variable and constraint clones of each type.  Deterministic
    given the seed."""
    cache = model.__dict__
    if "_sampling_groups" not in cache:
        report = validate(model)
        if not report.valid:
            raise InvalidArgument(f"model invalid: {report}")
        groups: dict = {}
        for vc, t in enumerate(model.var_clone_types_flat()):
            groups.setdefault(t, ([], []))[0].append(vc)
        for fc, t in enumerate(model.fac_clone_types_flat()):
            groups.setdefault(t, ([], []))[1].append(fc)
        cache["_sampling_groups"] = [groups[t] for t in sorted(groups, key=repr)]
        cache["_sampling_names"] = [repr(t) for t in sorted(groups, key=repr)]
    match = np.empty(model.num_clones, dtype=np.intp)
    for name, (vcs, fcs) in zip(cache["_sampling_names"], cache["_sampling_groups"]):
        rng = stream(seed, "matching", name)
        perm = rng.permutation(len(fcs))
        for pos, vc in enumerate(vcs):
            match[vc] = fcs[perm[pos]]
    return FactorGraph(model, match)


def dist(g: FactorGraph, h: FactorGraph) -> int:
    """Number of variable clones whose match differs."""
    if g.model is not h.model and g.model.to_json() != h.model.to_json():
        raise InvalidArgument("graphs live on different models")
    return int(np.count_nonzero(g.matching != h.matching))


def _bipartite_adjacency(g: FactorGraph):
    """Nodes 0..n-1 are variables, n..n+m-1 constraints; parallel edges kept."""
    n, m = g.model.n, g.model.m
    adj: list = [[] for _ in range(n + m)]
    eid = 0
    for a, nbrs in enumerate(g.factor_neighbors):
        for x, _ in nbrs:
            adj[x].append((n + a, eid))
            adj[n + a].append((x, eid))
            eid += 1
    return adj


def girth(g: FactorGraph) -> float:
    """Shortest cycle length in variable nodes; inf when acyclic."""
    adj = _bipartite_adjacency(g)
    best = float("inf")
    for src in range(len(adj)):
        dist_ = {src: 0}
        via = {src: -1}
        queue = [src]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v, eid in adj[u]:
                if eid == via[u]:
                    continue  # the discovery edge itself; parallel edges have new ids
                if v not in dist_:
                    dist_[v] = dist_[u] + 1
                    via[v] = eid
                    queue.append(v)
                else:
                    best = min(best, dist_[u] + dist_[v] + 1)
    return best / 2.0 if best != float("inf") else float("inf")


def is_l_acyclic(g: FactorGraph, l: int) -> bool:
    """True when the graph has no cycle of (variable-count) length <= l."""
    return girth(g) > l
