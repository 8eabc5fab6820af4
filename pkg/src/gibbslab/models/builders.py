"""Built-in model families: Ising, Potts antiferromagnet, regular k-SAT."""
from __future__ import annotations

import numpy as np

from ..cube.measure import Alphabet
from ..errors import InvalidArgument
from .graph import FactorGraph
from .spec import ModelSpec
from .weights import WeightFunction

SPIN_ALPHABET = Alphabet((1, -1))


def ising(n: int, d: int, beta: float) -> ModelSpec:
    """Ising model on the random d-regular (multi)graph: n spins of degree d,
    nd/2 edge constraints with weight exp(beta * s1 * s2), a single clone type."""
    if (n * d) % 2 != 0:
        raise InvalidArgument("n * d must be even for the Ising model")
    spins = np.array([1.0, -1.0])
    table = np.exp(beta * np.outer(spins, spins))
    wid = f"ising:beta={beta!r}"
    wf = WeightFunction(wid, SPIN_ALPHABET, table)
    m = n * d // 2
    return ModelSpec(
        SPIN_ALPHABET,
        [(0,) * d] * n,
        [(0, 0)] * m,
        [wid] * m,
        {wid: wf},
    )


def potts(n: int, d: int, k: int, beta: float) -> ModelSpec:
    """Potts antiferromagnet with k colors: weight exp(-beta * 1{c1 = c2})."""
    if (n * d) % 2 != 0:
        raise InvalidArgument("n * d must be even for the Potts model")
    if k < 2:
        raise InvalidArgument("Potts needs k >= 2 colors")
    alpha = Alphabet(tuple(range(k)))
    table = np.exp(-beta * np.eye(k))
    wid = f"potts:k={k}:beta={beta!r}"
    wf = WeightFunction(wid, alpha, table)
    m = n * d // 2
    return ModelSpec(alpha, [(0,) * d] * n, [(0, 0)] * m, [wid] * m, {wid: wf})


def _spread_signs(total: int, positives: int) -> list:
    """Deterministically spread `positives` +1 entries over `total` slots."""
    signs = []
    acc = 0
    for i in range(total):
        nxt = (i + 1) * positives // total
        signs.append(1 if nxt > acc else -1)
        acc = nxt
    return signs


def ksat(n: int, k: int, beta: float, d_plus: int = 1, d_minus: int = 1) -> ModelSpec:
    """Regular k-SAT: every variable occurs d_plus times positively and
    d_minus times negatively; clause sign patterns are dealt evenly.

    Types are literal signs (+1 / -1); a clause slot of type s hosts a
    variable clone of the same sign.  The weight of a clause with pattern s
    is exp(-beta * 1{sigma = -s}).
    """
    total = n * (d_plus + d_minus)
    if total % k != 0:
        raise InvalidArgument(
            f"n (d+ + d-) = {total} must be divisible by k = {k} (clause count)"
        )
    m = total // k
    plus_needed = n * d_plus
    flat = _spread_signs(m * k, plus_needed)
    fac_types = [tuple(flat[a * k : (a + 1) * k]) for a in range(m)]

    weight_functions = {}
    fac_weights = []
    for pattern in fac_types:
        wid = "ksat:s=" + "".join("+" if s > 0 else "-" for s in pattern) + f":beta={beta!r}"
        if wid not in weight_functions:
            table = np.zeros((2,) * k)
            violating = tuple(0 if s < 0 else 1 for s in pattern)  # sigma = -s
            table[violating] = 1.0
            table = np.exp(-beta * table)
            weight_functions[wid] = WeightFunction(wid, SPIN_ALPHABET, table)
        fac_weights.append(wid)

    var_types = [(1,) * d_plus + (-1,) * d_minus] * n
    return ModelSpec(SPIN_ALPHABET, var_types, fac_types, fac_weights, weight_functions)


def ising_cycle_graph(n: int, beta: float) -> FactorGraph:
    """The deterministic Ising cycle x_0 - a_0 - x_1 - ... - a_{n-1} - x_0."""
    if n < 1:
        raise InvalidArgument("cycle needs n >= 1")
    model = ising(n, 2, beta)
    match = np.empty(model.num_clones, dtype=np.intp)
    for x in range(n):
        match[model.var_clone(x, 0)] = model.fac_clone(x, 0)
        match[model.var_clone(x, 1)] = model.fac_clone((x - 1) % n, 1)
    return FactorGraph(model, match)


def path_graph(n: int, beta: float) -> FactorGraph:
    """The open Ising chain on n spins (end spins have degree 1)."""
    if n < 2:
        raise InvalidArgument("path needs n >= 2")
    spins = np.array([1.0, -1.0])
    table = np.exp(beta * np.outer(spins, spins))
    wid = f"ising:beta={beta!r}"
    wf = WeightFunction(wid, SPIN_ALPHABET, table)
    var_types = [(0,)] + [(0, 0)] * (n - 2) + [(0,)]
    model = ModelSpec(SPIN_ALPHABET, var_types, [(0, 0)] * (n - 1), [wid] * (n - 1), {wid: wf})
    match = np.empty(model.num_clones, dtype=np.intp)
    for a in range(n - 1):
        left_slot = 0 if a == 0 else 1
        match[model.var_clone(a, left_slot)] = model.fac_clone(a, 0)
        match[model.var_clone(a + 1, 0)] = model.fac_clone(a, 1)
    return FactorGraph(model, match)
