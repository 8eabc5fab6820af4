"""(eps, k)-states, symmetry, state extraction, and tensorisation.

The deviation of a set S under mu is the average over ordered k-tuples of
coordinates of the total-variation NORM between the conditional joint law
of the tuple and the product of the conditional one-point marginals,

    (1/n^k) sum_{x_1..x_k} || mu_{:{x_1..x_k}}[.|S] - prod_i mu_{:x_i}[.|S] || .

Repeated coordinates are collapsed to their distinct set before comparing
(the joint of (x, x) is the one-point law, compared against itself), which
makes the deviation of any product measure exactly zero.  S is an
(eps, k)-state when the deviation is below eps.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded, InvalidArgument, InvalidState
from .measure import DenseMeasure

#: cap on n^k for the exact tuple average
TUPLE_BUDGET = 1 << 20
#: cap on |Omega|^(2n) for tensor squares
TENSOR_BUDGET = 1 << 22

_CELL_GUARD = 1e-12


def _surjection_count(k: int, d: int) -> int:
    # ordered k-tuples covering a fixed d-element set
    return sum((-1) ** i * math.comb(d, i) * (d - i) ** k for i in range(d))


def _conditional_mass(mu: DenseMeasure, indices) -> np.ndarray:
    sel = np.asarray(sorted(set(int(i) for i in indices)), dtype=np.intp)
    total = float(mu.mass[sel].sum())
    if total <= 0.0:
        raise InvalidArgument("conditioning set has zero mass")
    out = np.zeros_like(mu.mass)
    out[sel] = mu.mass[sel] / total
    return out


def _joint_on(mu: DenseMeasure, cond_mass: np.ndarray, coords: tuple) -> np.ndarray:
    k = mu.k
    code = np.zeros(mu.size, dtype=np.int64)
    for x in coords:
        code = code * k + mu.digits[:, x]
    return np.bincount(code, weights=cond_mass, minlength=k ** len(coords)).reshape((k,) * len(coords))


def state_deviation(mu: DenseMeasure, indices, k: int) -> float:
    """Exact (eps, k)-state deviation of the event S given by assignment indices."""
    if k < 2:
        raise InvalidArgument("k must be >= 2")
    if mu.n**k > TUPLE_BUDGET:
        raise BudgetExceeded(
            f"n^k = {mu.n}^{k} exceeds the tuple budget {TUPLE_BUDGET}",
            required=mu.n**k,
            allowed=TUPLE_BUDGET,
        )
    cond = _conditional_mass(mu, indices)
    marginals = [_joint_on(mu, cond, (x,)) for x in range(mu.n)]

    total = 0.0
    for d in range(2, k + 1):
        weight = _surjection_count(k, d)
        for combo in itertools.combinations(range(mu.n), d):
            joint = _joint_on(mu, cond, combo)
            ref = marginals[combo[0]]
            for x in combo[1:]:
                ref = np.multiply.outer(ref, marginals[x])
            total += weight * float(np.abs(joint - ref).sum())
    return total / mu.n**k


def is_state(mu: DenseMeasure, indices, eps: float, k: int) -> bool:
    """Whether S is an (eps, k)-state of mu (exact n^k tuple average)."""
    return state_deviation(mu, indices, k) < eps


def is_symmetric(mu: DenseMeasure, eps: float, k: int) -> bool:
    """Whether Omega^n itself is an (eps, k)-state."""
    return state_deviation(mu, range(mu.size), k) < eps


# ---------------------------------------------------------------------------
# state extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtractedState:
    indices: tuple
    mass: float
    deviation: float


def _level_cells(mu: DenseMeasure, pitch: float) -> list:
    freq = np.zeros((mu.size, mu.k))
    for w in range(mu.k):
        freq[:, w] = (mu.digits == w).sum(axis=1) / mu.n
    top = math.ceil(1.0 / pitch) - 1  # frequency 1.0 belongs to the last box
    cells = np.minimum(np.floor((freq + _CELL_GUARD) / pitch), top).astype(np.int64)
    _, inverse = np.unique(cells, axis=0, return_inverse=True)
    return [np.flatnonzero(inverse == c) for c in range(inverse.max() + 1)]


def extract_states(
    mu: DenseMeasure,
    eps: float,
    k: int = 2,
    *,
    mass_floor: float = 0.01,
) -> list:
    """Disjoint (eps, k)-states covering at least 1 - eps of the mass.

    If the whole cube already passes, it is returned as the single state.
    Otherwise assignments are grouped into cells of their global empirical
    distribution, from the coarsest pitch (1/2) down to the mesh pitch
    eps/|Omega|; the first pitch whose individually certified cells of mass
    at least `mass_floor` cover 1 - eps wins.  States are returned sorted by
    mass, largest first.
    """
    full = np.arange(mu.size)
    dev = state_deviation(mu, full, k)
    if dev < eps:
        return [ExtractedState(tuple(full.tolist()), 1.0, dev)]

    finest = eps / mu.k
    pitches = []
    p = 0.5
    while p > finest:
        pitches.append(p)
        p /= 2.0
    pitches.append(finest)

    last_diag = None
    for pitch in pitches:
        kept = []
        for cell in _level_cells(mu, pitch):
            mass = mu.mass_of(cell)
            if mass < mass_floor:
                continue
            cell_dev = state_deviation(mu, cell, k)
            if cell_dev < eps:
                kept.append(ExtractedState(tuple(cell.tolist()), mass, cell_dev))
        coverage = sum(s.mass for s in kept)
        if coverage >= 1.0 - eps:
            return sorted(kept, key=lambda s: -s.mass)
        last_diag = (pitch, coverage, len(kept))
    raise InvalidState(
        f"state extraction failed: best attempt pitch={last_diag[0]} covered "
        f"{last_diag[1]:.4f} with {last_diag[2]} states (need >= {1.0 - eps:.4f})"
    )


# ---------------------------------------------------------------------------
# tensorisation
# ---------------------------------------------------------------------------


def tensor_square(mu: DenseMeasure, *, budget: int = TENSOR_BUDGET) -> DenseMeasure:
    """The product measure mu (x) mu on the pair alphabet (Omega x Omega)^n.

    Coordinate x of the result carries the pair (sigma_x, tau_x) of the two
    independent samples.
    """
    k, n = mu.k, mu.n
    if k ** (2 * n) > budget:
        raise BudgetExceeded(
            f"|Omega|^(2n) = {k**(2*n)} exceeds the tensor budget {budget}",
            required=k ** (2 * n),
            allowed=budget,
        )
    powers = (k * k) ** np.arange(n - 1, -1, -1, dtype=np.int64)
    f = mu.digits.astype(np.int64) @ (powers * k)  # first-component offsets
    g = mu.digits.astype(np.int64) @ powers  # second-component offsets
    out = np.zeros(k ** (2 * n))
    out[f[:, None] + g[None, :]] = np.outer(mu.mass, mu.mass)
    return DenseMeasure(mu.alphabet.pair(), n, out, budget=budget)
