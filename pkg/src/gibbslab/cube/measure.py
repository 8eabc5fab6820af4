"""Explicit probability measures on finite cubes Omega^n.

A DenseMeasure stores one probability per assignment sigma in Omega^n, in
lexicographic assignment order with coordinate 0 most significant:

    index(sigma) = sum_x sigma_x * k^(n-1-x),   k = |Omega|.

The same order is used by the factor-graph side (models.gibbs), so Gibbs
measures can be fed to every operation here without conversion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import BudgetExceeded, InvalidArgument
from ..simplex import NORMALIZATION_TOL

#: default cap on the number of stored probabilities (|Omega|^n)
DENSE_BUDGET = 1 << 22


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite value set Omega.

    The symbol order is fixed and shared by every serialization and by the
    assignment indexing, so two alphabets with the same symbols in a
    different order are distinct.
    """

    symbols: tuple

    def __post_init__(self):
        if len(self.symbols) == 0:
            raise InvalidArgument("alphabet is empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise InvalidArgument("alphabet symbols are not distinct")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol) -> int:
        return self.symbols.index(symbol)

    def pair(self) -> "Alphabet":
        """The pair alphabet Omega x Omega, ordered lexicographically."""
        return Alphabet(tuple((a, b) for a in self.symbols for b in self.symbols))


BINARY = Alphabet((0, 1))
SPINS = Alphabet((1, -1))


def _check_budget(k: int, n: int, budget: int) -> int:
    size = k**n
    if size > budget:
        raise BudgetExceeded(
            f"|Omega|^n = {k}^{n} = {size} exceeds the dense budget {budget}",
            required=size,
            allowed=budget,
        )
    return size


class DenseMeasure:
    """A probability vector over Omega^n.

    Entries are renormalized on construction; drift beyond
    ``NORMALIZATION_TOL`` (1e-12) is rejected instead of silently fixed.
    Instances are immutable: the mass array is write-locked.
    """

    def __init__(self, alphabet: Alphabet, n: int, mass, *, budget: int = DENSE_BUDGET):
        if n < 1:
            raise InvalidArgument("n must be >= 1")
        size = _check_budget(alphabet.size, n, budget)
        arr = np.array(mass, dtype=float).ravel()
        if arr.shape != (size,):
            raise InvalidArgument(f"mass has {arr.size} entries, expected {size}")
        if np.any(arr < 0.0):
            raise InvalidArgument("mass has negative entries")
        total = float(arr.sum())
        if not np.isfinite(total) or total <= 0.0:
            raise InvalidArgument("mass is not normalizable")
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidArgument(f"mass sums to {total}, beyond tolerance {NORMALIZATION_TOL}")
        arr = arr / total
        arr.setflags(write=False)
        self.alphabet = alphabet
        self.n = int(n)
        self.mass = arr

    # -- indexing ------------------------------------------------------------
    @property
    def k(self) -> int:
        return self.alphabet.size

    @property
    def size(self) -> int:
        return self.mass.size

    @cached_property
    def digits(self) -> np.ndarray:
        """(k^n, n) array: digits[idx, x] = sigma_x of the idx-th assignment."""
        k, n = self.k, self.n
        idx = np.arange(k**n)
        cols = [(idx // k ** (n - 1 - x)) % k for x in range(n)]
        d = np.stack(cols, axis=1).astype(np.uint8)
        d.setflags(write=False)
        return d

    def assignment(self, idx: int) -> tuple:
        return tuple(self.alphabet.symbols[v] for v in self.digits[idx])

    def index_of(self, sigma: Sequence) -> int:
        if len(sigma) != self.n:
            raise InvalidArgument(f"assignment has length {len(sigma)}, expected {self.n}")
        idx = 0
        for v in sigma:
            idx = idx * self.k + self.alphabet.index(v)
        return idx

    def as_array(self) -> np.ndarray:
        """View of the mass as a (k, ..., k) tensor, one axis per coordinate."""
        return self.mass.reshape((self.k,) * self.n)

    # -- conditioning ----------------------------------------------------------
    def mass_of(self, indices) -> float:
        return float(self.mass[np.asarray(indices, dtype=np.intp)].sum())

    def conditioned(self, indices) -> "DenseMeasure":
        """The conditional measure mu[.|S] for S given as assignment indices."""
        sel = np.asarray(indices, dtype=np.intp)
        total = float(self.mass[sel].sum())
        if total <= 0.0:
            raise InvalidArgument("conditioning event has zero mass")
        out = np.zeros_like(self.mass)
        out[sel] = self.mass[sel] / total
        return DenseMeasure(self.alphabet, self.n, out)

    def sample_indices(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.choice(self.size, size=count, p=self.mass)

    # -- serialization ---------------------------------------------------------
    def to_json(self) -> str:
        return json.dumps(
            {
                "alphabet": list(self.alphabet.symbols),
                "n": self.n,
                "mass": self.mass.tolist(),
            }
        )

    @staticmethod
    def from_json(text: str) -> "DenseMeasure":
        obj = json.loads(text)
        alpha = Alphabet(tuple(_canonical_symbol(s) for s in obj["alphabet"]))
        return DenseMeasure(alpha, int(obj["n"]), obj["mass"])

    def __repr__(self) -> str:
        return f"DenseMeasure(|Omega|={self.k}, n={self.n})"


def _canonical_symbol(s):
    return tuple(s) if isinstance(s, list) else s


# -- core operations ------------------------------------------------------------


def marginal(mu: DenseMeasure, coords: Iterable[int]) -> DenseMeasure:
    """The marginal of mu on a nonempty coordinate set, mu restricted to S.

    Result coordinates follow the increasing original order of `coords`.
    """
    coords = sorted(set(int(c) for c in coords))
    if not coords:
        raise InvalidArgument("coords is empty")
    if coords[0] < 0 or coords[-1] >= mu.n:
        raise InvalidArgument(f"coords out of range [0, {mu.n})")
    drop = tuple(i for i in range(mu.n) if i not in coords)
    arr = mu.as_array().sum(axis=drop) if drop else mu.as_array()
    return DenseMeasure(mu.alphabet, len(coords), arr.ravel())


def empirical(alphabet: Alphabet, sigma: Sequence, subset: Iterable[int]) -> np.ndarray:
    """Frequency vector sigma[.|S]: fraction of coordinates in S at each symbol."""
    sel = sorted(set(int(x) for x in subset))
    if not sel:
        raise InvalidArgument("subset is empty")
    if sel[0] < 0 or sel[-1] >= len(sigma):
        raise InvalidArgument("subset out of range")
    counts = np.zeros(alphabet.size)
    for x in sel:
        counts[alphabet.index(sigma[x])] += 1.0
    return counts / len(sel)


# -- canonical measure families ---------------------------------------------------


def product_measure(alphabet: Alphabet, marginals, n: int | None = None) -> DenseMeasure:
    """Product measure with the given per-coordinate marginals.

    `marginals` is either one distribution (used for all n coordinates) or a
    list of per-coordinate distributions.
    """
    margs = np.asarray(marginals, dtype=float)
    if margs.ndim == 1:
        if n is None:
            raise InvalidArgument("n is required with a single shared marginal")
        margs = np.tile(margs, (n, 1))
    n = margs.shape[0]
    _check_budget(alphabet.size, n, DENSE_BUDGET)
    out = np.array([1.0])
    for row in margs:
        out = np.multiply.outer(out, row).ravel()
    return DenseMeasure(alphabet, n, out)


def point_mass(alphabet: Alphabet, sigma: Sequence) -> DenseMeasure:
    n = len(sigma)
    mass = np.zeros(alphabet.size**n)
    idx = 0
    for v in sigma:
        idx = idx * alphabet.size + alphabet.index(v)
    mass[idx] = 1.0
    return DenseMeasure(alphabet, n, mass)


def bernoulli(p_one: float) -> np.ndarray:
    """Distribution on the binary alphabet with P(1) = p_one."""
    return np.array([1.0 - p_one, p_one])


def block_measure(n: int, block: int, p_one: float = 0.5) -> DenseMeasure:
    """Binary coordinates in blocks of size `block`; each block is constant
    with the shared value ~ Be(p_one), and blocks are independent."""
    if n % block != 0:
        raise InvalidArgument("block must divide n")
    mu = np.zeros(2**n)
    blocks = n // block
    for pattern in range(2**blocks):
        weight = 1.0
        idx = 0
        for b in range(blocks):
            bit = (pattern >> (blocks - 1 - b)) & 1
            weight *= p_one if bit else 1.0 - p_one
            for _ in range(block):
                idx = idx * 2 + bit
        mu[idx] += weight
    return DenseMeasure(BINARY, n, mu)


def two_level_mixture(n: int, p_low: float = 1.0 / 3.0, p_high: float = 2.0 / 3.0) -> DenseMeasure:
    """Even mixture of two Bernoulli product measures on the binary cube."""
    lo = product_measure(BINARY, bernoulli(p_low), n)
    hi = product_measure(BINARY, bernoulli(p_high), n)
    return DenseMeasure(BINARY, n, 0.5 * lo.mass + 0.5 * hi.mass)


def two_halves_product(n: int, p_first: float = 0.5, p_second: float = 1.0 / 3.0) -> DenseMeasure:
    """Product measure: Be(p_first) on the first half, Be(p_second) on the rest."""
    if n % 2 != 0:
        raise InvalidArgument("n must be even")
    rows = [bernoulli(p_first)] * (n // 2) + [bernoulli(p_second)] * (n // 2)
    return product_measure(BINARY, np.array(rows))
