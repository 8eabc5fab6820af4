"""Strictly positive weight functions psi: Omega^h -> (0, inf)."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from ..cube.measure import Alphabet
from ..errors import InvalidArgument

#: default cap on weight-function arity
MAX_ARITY = 6


class WeightFunction:
    """A weight table over Omega^h with a stable identifier.

    The identifier is the unit of equality for canonical template keys, so
    two weight functions with different tables must carry different ids.
    """

    def __init__(self, wid: str, alphabet: Alphabet, table, *, max_arity: int = MAX_ARITY):
        arr = np.asarray(table, dtype=float)
        if arr.ndim < 1 or arr.ndim > max_arity:
            raise InvalidArgument(f"arity {arr.ndim} outside [1, {max_arity}]")
        if any(s != alphabet.size for s in arr.shape):
            raise InvalidArgument("table shape does not match the alphabet")
        if not np.all(arr > 0.0):
            raise InvalidArgument("weight tables must be strictly positive (no hard constraints)")
        arr = arr.copy()
        arr.setflags(write=False)
        self.wid = str(wid)
        self.alphabet = alphabet
        self.table = arr

    @property
    def arity(self) -> int:
        return self.table.ndim

    @cached_property
    def log_table(self) -> np.ndarray:
        out = np.log(self.table)
        out.setflags(write=False)
        return out

    def symmetric_under(self, axis_a: int, axis_b: int) -> bool:
        return bool(np.array_equal(self.table, np.swapaxes(self.table, axis_a, axis_b)))

    def __call__(self, *symbols):
        idx = tuple(self.alphabet.index(s) for s in symbols)
        return float(self.table[idx])

    def __repr__(self) -> str:
        return f"WeightFunction({self.wid!r}, arity={self.arity})"

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightFunction) and self.wid == other.wid

    def __hash__(self) -> int:
        return hash(self.wid)
