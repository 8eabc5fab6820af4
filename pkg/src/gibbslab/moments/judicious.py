"""Judiciousness: how close an assignment's empirical sequence sits to a
marginal assignment, class-frequency weighted."""
from __future__ import annotations

from dataclasses import dataclass

from ..bethe.assignment import MarginalAssignment
from ..simplex import tv
from .sequences import GraphClasses, empirical_sequence


@dataclass(frozen=True)
class JudiciousScore:
    judicious: bool
    score: float
    eps: float


def is_judicious(
    g,
    sigma,
    p: MarginalAssignment,
    eps: float,
    ell: int,
    *,
    classes: GraphClasses | None = None,
) -> JudiciousScore:
    """Evaluate

        sum_T lambda[T|V] tv(q_T, p_T)
      + sum_{T, j} lambda[T|F] tv(q_{T :j}, p_{class of j-th neighbor})  < eps

    for q the empirical sequence of sigma.  Classes without a stored
    marginal fall back to uniform when cyclic (the convention for p)."""
    if classes is None:
        classes = GraphClasses(g, ell)
    q = empirical_sequence(g, sigma, ell, classes)
    lam = classes.lambda_dist

    score = 0.0
    for key, (members, t) in classes.var_classes.items():
        weight = lam.weight_given_kind(key)
        score += weight * tv(q.var(key), p.variable(key, t))

    for key, (members, t) in classes.fac_classes.items():
        weight = lam.weight_given_kind(key)
        for pos, nkey in enumerate(classes.neighbor_keys[key]):
            ntpl = classes.var_classes[nkey][1]
            score += weight * tv(q.joint_marginal(key, pos), p.variable(nkey, ntpl))

    return JudiciousScore(score < eps, score, eps)
