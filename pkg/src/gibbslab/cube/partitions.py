"""Partitions of the coordinate set [n] and of the cube Omega^n."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument


def _validate_classes(classes, universe_size: int, what: str):
    seen = set()
    total = 0
    for cls in classes:
        if len(cls) == 0:
            raise InvalidArgument(f"{what} has an empty class")
        total += len(cls)
        seen.update(cls)
    if total != len(seen):
        raise InvalidArgument(f"{what} classes are not disjoint")
    if seen != set(range(universe_size)):
        raise InvalidArgument(f"{what} classes do not cover the universe")


@dataclass(frozen=True)
class CoordinatePartition:
    """Disjoint nonempty classes V_1..V_k covering the coordinates [n]."""

    n: int
    classes: tuple  # tuple of sorted coordinate tuples

    def __post_init__(self):
        _validate_classes(self.classes, self.n, "coordinate partition")

    @staticmethod
    def of(n: int, classes) -> "CoordinatePartition":
        return CoordinatePartition(n, tuple(tuple(sorted(set(c))) for c in classes))

    @staticmethod
    def trivial(n: int) -> "CoordinatePartition":
        return CoordinatePartition.of(n, [range(n)])

    @staticmethod
    def singletons(n: int) -> "CoordinatePartition":
        return CoordinatePartition.of(n, [[x] for x in range(n)])

    @property
    def size(self) -> int:
        return len(self.classes)

    def refines(self, other: "CoordinatePartition") -> bool:
        bigger = [set(c) for c in other.classes]
        return all(any(set(c) <= b for b in bigger) for c in self.classes)

    def split(self, splits: dict) -> "CoordinatePartition":
        """Split class j into (S_j, V_j \\ S_j) for each entry j -> S_j."""
        out = []
        for j, cls in enumerate(self.classes):
            if j in splits:
                s = set(splits[j])
                if not s or not s < set(cls):
                    raise InvalidArgument("split set must be a proper nonempty subset")
                out.append(sorted(s))
                out.append(sorted(set(cls) - s))
            else:
                out.append(cls)
        return CoordinatePartition.of(self.n, out)

    def common_refinement(self, other: "CoordinatePartition") -> "CoordinatePartition":
        out = []
        for a in self.classes:
            for b in other.classes:
                inter = set(a) & set(b)
                if inter:
                    out.append(sorted(inter))
        return CoordinatePartition.of(self.n, out)


@dataclass(frozen=True)
class StatePartition:
    """Disjoint classes S_1..S_m of assignment indices covering Omega^n."""

    cube_size: int
    classes: tuple  # tuple of sorted index tuples

    def __post_init__(self):
        _validate_classes(self.classes, self.cube_size, "state partition")

    @staticmethod
    def of(cube_size: int, classes) -> "StatePartition":
        return StatePartition(cube_size, tuple(tuple(sorted(set(c))) for c in classes))

    @property
    def size(self) -> int:
        return len(self.classes)

    def masses(self, mu) -> np.ndarray:
        return np.array([mu.mass_of(c) for c in self.classes])
