"""Marginal assignments: per-class root marginals and max-entropy joints.

The depth-ell marginal of a class T is approximated by extending T to depth
ell + m under the limiting tree distribution and averaging the free-boundary
root marginal over the extensions; for the regular families this is already
the (paramagnetic) belief-propagation fixed point at m = 1, and the builder
records whether the result was m-stable.

Constraint classes get the unique maximizer of H(nu) + <ln psi>_nu among
joints whose axis-j marginal is the marginal assigned to the depth-ell
class of the j-th neighbor (axes in canonical position order).
"""
from __future__ import annotations

import json

import numpy as np

from ..errors import InvalidArgument, MissingKey
from ..localstruct.localdist import LocalDistribution, LocalEntry
from ..localstruct.template import Template, reroot, truncate
from ..simplex import tv, uniform
from .maxent import max_entropy_joint
from .treecalc import tree_root_marginal

MA2_TOL = 1e-8


class MarginalAssignment:
    def __init__(
        self,
        ell: int,
        alphabet,
        variable_marginals: dict,
        constraint_joints: dict,
        neighbor_keys: dict,
        provenance: dict,
    ):
        self.ell = ell
        self.alphabet = alphabet
        self.variable_marginals = dict(variable_marginals)
        self.constraint_joints = dict(constraint_joints)
        self.neighbor_keys = dict(neighbor_keys)
        self.provenance = dict(provenance)

    def variable(self, key: str, template: Template | None = None) -> np.ndarray:
        if key in self.variable_marginals:
            return self.variable_marginals[key]
        if template is not None and not template.is_tree:
            return uniform(self.alphabet.size)  # cyclic classes default to uniform
        raise MissingKey(f"no marginal stored for variable class {key}")

    def joint(self, key: str) -> np.ndarray:
        if key not in self.constraint_joints:
            raise MissingKey(f"no joint stored for constraint class {key}")
        return self.constraint_joints[key]

    def ma2_residual(self) -> float:
        """Worst marginalisation mismatch between joints and neighbor marginals."""
        worst = 0.0
        for key, joint in self.constraint_joints.items():
            for j, nkey in enumerate(self.neighbor_keys[key]):
                axes = tuple(a for a in range(joint.ndim) if a != j)
                worst = max(worst, tv(joint.sum(axis=axes), self.variable_marginals[nkey]))
        return worst

    def to_json(self) -> str:
        return json.dumps(
            {
                "ell": self.ell,
                "alphabet": list(self.alphabet.symbols),
                "variable_marginals": {k: v.tolist() for k, v in self.variable_marginals.items()},
                "constraint_joints": {k: v.ravel().tolist() for k, v in self.constraint_joints.items()},
                "neighbor_keys": {k: list(v) for k, v in self.neighbor_keys.items()},
                "provenance": self.provenance,
            }
        )


def _grouped_variable_marginals(theta: LocalDistribution, ell: int, wfs, alphabet):
    """p_{ell, T} = E[ root marginal | depth-ell class T ] over theta's trees."""
    sums: dict = {}
    for _, entry in theta.variable_items():
        if not entry.is_tree:
            raise InvalidArgument("limiting distribution contains a cyclic class")
        shallow = truncate(entry.template, ell)
        marg = tree_root_marginal(entry.template, wfs, alphabet)
        acc = sums.setdefault(shallow.key, [0.0, np.zeros(alphabet.size), shallow])
        acc[0] += entry.weight
        acc[1] = acc[1] + entry.weight * marg
    return {key: (w_sum, vec / w_sum, tpl) for key, (w_sum, vec, tpl) in sums.items()}


def truncate_distribution(theta: LocalDistribution, depth: int) -> LocalDistribution:
    """The image of theta under depth truncation (theta_depth from theta_deeper)."""
    if depth > theta.depth:
        raise InvalidArgument("cannot deepen a local distribution by truncation")
    entries: dict = {}
    for _, entry in theta.entries.items():
        t = truncate(entry.template, depth)
        cur = entries.get(t.key)
        entries[t.key] = LocalEntry((cur.weight if cur else 0.0) + entry.weight, t)
    return LocalDistribution(depth, entries, mode=theta.mode, meta=theta.meta)


def build_marginal_assignment(
    theta_deep: LocalDistribution,
    ell: int,
    m: int,
    *,
    weight_functions=None,
    alphabet=None,
) -> MarginalAssignment:
    """Construct the depth-ell marginal assignment from theta_{ell+m}.

    theta_deep must be the depth-(ell+m) limiting distribution; the missing
    deeper layers are treated as free boundary.  Provenance records m and an
    m-stability flag (comparison against the m-1 build when m >= 1).
    """
    if theta_deep.depth != ell + m:
        raise InvalidArgument(
            f"need theta at depth ell+m = {ell + m}, got depth {theta_deep.depth}"
        )
    wfs = weight_functions or theta_deep.meta.get("weight_functions")
    if wfs is None:
        raise InvalidArgument("no weight functions supplied or recorded in theta")
    if alphabet is None:
        alphabet = next(iter(wfs.values())).alphabet

    groups = _grouped_variable_marginals(theta_deep, ell, wfs, alphabet)
    variable_marginals = {key: vec for key, (_, vec, _) in groups.items()}

    theta_ell = truncate_distribution(theta_deep, ell)
    constraint_joints = {}
    neighbor_keys = {}
    for key, entry in theta_ell.constraint_items():
        tpl = entry.template
        wid = tpl.weights[tpl.root]
        table = np.asarray(wfs[wid].table, dtype=float)
        order = tpl.canonical_root_order
        table = np.transpose(table, axes=order)
        nkeys = []
        margs = []
        for j in range(tpl.root_degree):
            sub = truncate(reroot(tpl, j), ell)
            if sub.key not in variable_marginals:
                raise MissingKey(f"neighbor class {sub.key} missing from theta's variable part")
            nkeys.append(sub.key)
            margs.append(variable_marginals[sub.key])
        constraint_joints[key] = max_entropy_joint(table, margs)
        neighbor_keys[key] = tuple(nkeys)

    m_stable = None
    if m >= 1:
        shallower = truncate_distribution(theta_deep, ell + m - 1)
        prev = _grouped_variable_marginals(shallower, ell, wfs, alphabet)
        if set(prev) == set(variable_marginals):
            m_stable = max(
                (tv(variable_marginals[k], prev[k][1]) for k in variable_marginals),
                default=0.0,
            ) < MA2_TOL
        else:
            m_stable = False

    return MarginalAssignment(
        ell,
        alphabet,
        variable_marginals,
        constraint_joints,
        neighbor_keys,
        provenance={"extension_m": m, "m_stable": m_stable, "theta_mode": theta_deep.mode},
    )
