"""Gibbs uniqueness: worst-case boundary influence on the root marginal."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import BudgetExceeded, InvalidArgument
from ..rng import stream
from ..simplex import tv
from .assignment import MarginalAssignment
from .treecalc import tree_root_marginal
from ..localstruct.template import truncate

BOUNDARY_CAP = 16


@dataclass(frozen=True)
class UniquenessVerdict:
    status: str  # "unique" | "not-unique" | "unknown"
    worst_tv: float
    worst_boundary: tuple | None
    boundary_nodes: tuple
    eps: float
    ell: int

    @property
    def unique(self) -> bool:
        return self.status == "unique"


def _boundary_iter(alphabet, count: int):
    # all-constant boundaries first (extremal for ferromagnetic weights),
    # then the full lexicographic enumeration
    constants = [tuple([s] * count) for s in alphabet.symbols]
    seen = set(constants)
    for c in constants:
        yield c
    for combo in itertools.product(alphabet.symbols, repeat=count):
        if combo not in seen:
            yield combo


def gibbs_uniqueness_check(
    template,
    p: MarginalAssignment,
    eps: float,
    ell: int,
    mode: str = "exhaustive",
    *,
    weight_functions=None,
    samples: int = 200,
    seed: int = 0,
    cap: int = BOUNDARY_CAP,
) -> UniquenessVerdict:
    """Compare the root marginal under every depth-ell boundary condition
    against the assignment's marginal for the template's depth-ell class.

    Exhaustive mode enumerates all boundaries (refused beyond `cap`
    variables) and can certify "unique"; sampled mode tries the all-constant
    extremes plus random boundaries and returns "not-unique" with a witness
    or "unknown".
    """
    if template.root_kind != "var" or not template.is_tree:
        raise InvalidArgument("uniqueness check needs a variable-rooted tree template")
    work = truncate(template, ell)
    boundary = work.variables_at_var_distance(ell)
    alphabet = p.alphabet
    p_root = p.variable(work.key, work)

    if not boundary:
        return UniquenessVerdict("unique", 0.0, None, (), eps, ell)

    if weight_functions is None:
        raise InvalidArgument("weight functions are required to evaluate tree marginals")
    wfs = weight_functions

    def shift(values: tuple) -> float:
        clamp = {node: val for node, val in zip(boundary, values)}
        cond = tree_root_marginal(work, wfs, alphabet, clamp=clamp)
        return tv(cond, p_root)

    worst, witness = 0.0, None
    if mode == "exhaustive":
        if len(boundary) > cap:
            raise BudgetExceeded(
                f"boundary has {len(boundary)} variables; exhaustive cap is {cap}",
                required=alphabet.size ** len(boundary),
                allowed=alphabet.size**cap,
            )
        for values in _boundary_iter(alphabet, len(boundary)):
            val = shift(values)
            if val > worst:
                worst, witness = val, values
        status = "unique" if worst < eps else "not-unique"
        return UniquenessVerdict(status, worst, witness if status == "not-unique" else witness, tuple(boundary), eps, ell)

    if mode == "sampled":
        rng = stream(seed, "uniqueness")
        tried = [tuple([s] * len(boundary)) for s in alphabet.symbols]
        for _ in range(samples):
            tried.append(tuple(alphabet.symbols[i] for i in rng.integers(0, alphabet.size, len(boundary))))
        for values in tried:
            val = shift(values)
            if val > worst:
                worst, witness = val, values
        status = "not-unique" if worst >= eps else "unknown"
        return UniquenessVerdict(status, worst, witness, tuple(boundary), eps, ell)

    raise InvalidArgument(f"unknown mode {mode!r}")
