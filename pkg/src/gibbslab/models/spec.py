"""Typed-clone factor-graph models.

A model lists variable nodes and constraint nodes with prescribed degrees,
assigns every clone (node, slot) a type, and attaches a weight function to
every constraint.  A factor graph is then a type-preserving bijection from
variable clones to constraint clones; sampling one uniformly is the
configuration model.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..cube.measure import Alphabet, _canonical_symbol
from ..errors import InvalidArgument
from .weights import WeightFunction


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "valid" if self.valid else "; ".join(self.violations)


class ModelSpec:
    """A (Delta, Omega, Psi, Theta)-model with finite node sets.

    Parameters
    ----------
    alphabet : value set Omega shared by all weight functions
    var_types : per variable, the tuple of clone types (length = degree)
    fac_types : per constraint, the tuple of clone types (length = arity)
    fac_weights : per constraint, the id of its weight function
    weight_functions : id -> WeightFunction
    """

    def __init__(self, alphabet: Alphabet, var_types, fac_types, fac_weights, weight_functions):
        self.alphabet = alphabet
        self.var_types = tuple(tuple(t) for t in var_types)
        self.fac_types = tuple(tuple(t) for t in fac_types)
        self.fac_weights = tuple(str(w) for w in fac_weights)
        self.weight_functions = dict(weight_functions)
        if len(self.fac_weights) != len(self.fac_types):
            raise InvalidArgument("fac_weights and fac_types lengths differ")

    # -- structure -------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.var_types)

    @property
    def m(self) -> int:
        return len(self.fac_types)

    def var_degree(self, x: int) -> int:
        return len(self.var_types[x])

    def fac_degree(self, a: int) -> int:
        return len(self.fac_types[a])

    @property
    def delta(self) -> int:
        return max(
            max((len(t) for t in self.var_types), default=0),
            max((len(t) for t in self.fac_types), default=0),
        )

    def psi(self, a: int) -> WeightFunction:
        return self.weight_functions[self.fac_weights[a]]

    # -- clone flattening --------------------------------------------------------
    @cached_property
    def var_clone_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum([len(t) for t in self.var_types])]).astype(np.intp)

    @cached_property
    def fac_clone_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum([len(t) for t in self.fac_types])]).astype(np.intp)

    @property
    def num_clones(self) -> int:
        return int(self.var_clone_offsets[-1])

    def var_clone(self, x: int, i: int) -> int:
        return int(self.var_clone_offsets[x]) + i

    def fac_clone(self, a: int, j: int) -> int:
        return int(self.fac_clone_offsets[a]) + j

    @cached_property
    def var_clone_owner(self) -> np.ndarray:
        out = np.empty(self.num_clones, dtype=np.intp)
        for x in range(self.n):
            out[self.var_clone_offsets[x] : self.var_clone_offsets[x + 1]] = x
        return out

    @cached_property
    def fac_clone_owner(self) -> np.ndarray:
        out = np.empty(int(self.fac_clone_offsets[-1]), dtype=np.intp)
        for a in range(self.m):
            out[self.fac_clone_offsets[a] : self.fac_clone_offsets[a + 1]] = a
        return out

    def var_clone_types_flat(self) -> list:
        return [t for types in self.var_types for t in types]

    def fac_clone_types_flat(self) -> list:
        return [t for types in self.fac_types for t in types]

    # -- serialization -------------------------------------------------------------
    def to_json(self) -> str:
        return json.dumps(
            {
                "alphabet": list(self.alphabet.symbols),
                "delta": self.delta,
                "variables": [
                    {"id": x, "degree": len(t), "clone_types": list(t)}
                    for x, t in enumerate(self.var_types)
                ],
                "factors": [
                    {"id": a, "weight_fn": self.fac_weights[a], "clone_types": list(t)}
                    for a, t in enumerate(self.fac_types)
                ],
                "weight_functions": {
                    wid: {"arity": wf.arity, "table": wf.table.ravel().tolist()}
                    for wid, wf in self.weight_functions.items()
                },
            }
        )

    @staticmethod
    def from_json(text: str) -> "ModelSpec":
        obj = json.loads(text)
        alpha = Alphabet(tuple(_canonical_symbol(s) for s in obj["alphabet"]))
        k = alpha.size
        wfs = {
            wid: WeightFunction(wid, alpha, np.asarray(spec["table"]).reshape((k,) * spec["arity"]))
            for wid, spec in obj["weight_functions"].items()
        }
        return ModelSpec(
            alpha,
            [tuple(v["clone_types"]) for v in obj["variables"]],
            [tuple(f["clone_types"]) for f in obj["factors"]],
            [f["weight_fn"] for f in obj["factors"]],
            wfs,
        )


def validate(model: ModelSpec) -> ValidationReport:
    """Check the model invariants; reports every violation, never raises."""
    bad = []
    dv = sum(len(t) for t in model.var_types)
    df = sum(len(t) for t in model.fac_types)
    if dv != df:
        bad.append(f"degree sums differ: sum d(x) = {dv}, sum d(a) = {df}")

    from collections import Counter

    cv = Counter(model.var_clone_types_flat())
    cf = Counter(model.fac_clone_types_flat())
    for theta in sorted(set(cv) | set(cf), key=repr):
        if cv.get(theta, 0) != cf.get(theta, 0):
            bad.append(
                f"type {theta!r} unbalanced: {cv.get(theta, 0)} variable clones vs "
                f"{cf.get(theta, 0)} constraint clones"
            )

    for a, wid in enumerate(model.fac_weights):
        wf = model.weight_functions.get(wid)
        if wf is None:
            bad.append(f"factor {a} references unknown weight function {wid!r}")
            continue
        if wf.arity != model.fac_degree(a):
            bad.append(f"factor {a}: degree {model.fac_degree(a)} != arity {wf.arity} of {wid!r}")
        # canonical template keys identify same-type slots, which is sound only
        # when the weight table cannot tell those slots apart
        types = model.fac_types[a]
        for i in range(len(types)):
            for j in range(i + 1, len(types)):
                if types[i] == types[j] and wf.arity == len(types) and not wf.symmetric_under(i, j):
                    bad.append(
                        f"factor {a}: weight {wid!r} not symmetric under same-type slots {i},{j}"
                    )
    return ValidationReport(tuple(bad))
