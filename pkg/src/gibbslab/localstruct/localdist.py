"""Empirical local-neighborhood distributions lambda_{G, ell}."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidArgument
from .template import Template, neighborhood


@dataclass(frozen=True)
class LocalEntry:
    weight: float
    template: Template  # a representative of the class

    @property
    def root_kind(self) -> str:
        return self.template.root_kind

    @property
    def is_tree(self) -> bool:
        return self.template.is_tree


@dataclass(frozen=True)
class LocalDistribution:
    """Key -> weight over depth-`depth` neighborhood classes.

    Variable nodes contribute their depth-`depth` class, constraint nodes
    their depth-(`depth`+1)-flavored class (one extra bipartite hop), both
    normalized by |V| + |F|.  `mode` records how it was built ("empirical"
    from a graph, "limit-exact" from a family enumeration).
    """

    depth: int
    entries: dict  # key -> LocalEntry
    mode: str = "empirical"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        total = sum(e.weight for e in self.entries.values())
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgument(f"local distribution weights sum to {total}")

    @property
    def variable_share(self) -> float:
        return sum(e.weight for e in self.entries.values() if e.root_kind == "var")

    @property
    def constraint_share(self) -> float:
        return sum(e.weight for e in self.entries.values() if e.root_kind == "fac")

    def variable_items(self) -> list:
        return [(k, e) for k, e in self.entries.items() if e.root_kind == "var"]

    def constraint_items(self) -> list:
        return [(k, e) for k, e in self.entries.items() if e.root_kind == "fac"]

    def weight_given_kind(self, key: str) -> float:
        """Conditional weight of a class given its root kind."""
        entry = self.entries[key]
        share = self.variable_share if entry.root_kind == "var" else self.constraint_share
        return entry.weight / share

    def tv_to(self, other: "LocalDistribution") -> float:
        """Total-variation distance between the two class distributions."""
        keys = set(self.entries) | set(other.entries)
        total = 0.0
        for k in keys:
            a = self.entries[k].weight if k in self.entries else 0.0
            b = other.entries[k].weight if k in other.entries else 0.0
            total += abs(a - b)
        return 0.5 * total

    def all_trees(self) -> bool:
        return all(e.is_tree for e in self.entries.values())


def local_distribution(g, depth: int) -> LocalDistribution:
    """The empirical neighborhood-class distribution of a factor graph."""
    n, m = g.model.n, g.model.m
    weight = 1.0 / (n + m)
    entries: dict = {}
    for x in range(n):
        t = neighborhood(g, ("var", x), depth)
        cur = entries.get(t.key)
        entries[t.key] = LocalEntry((cur.weight if cur else 0.0) + weight, t)
    for a in range(m):
        t = neighborhood(g, ("fac", a), depth)
        cur = entries.get(t.key)
        entries[t.key] = LocalEntry((cur.weight if cur else 0.0) + weight, t)
    return LocalDistribution(depth, entries, mode="empirical", meta={"n": n, "m": m})
