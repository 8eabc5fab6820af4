"""The per-graph Bethe functional and the clone-counting closed form."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import Infeasible
from ..simplex import entropy, kl, product
from .sequences import MarginalSequence


def graph_bethe(g, ell: int, q: MarginalSequence) -> float:
    """B_{G, ell}(q): the Bethe functional of a marginal sequence on G.

        sum_{T in V} (1 - d_T) H(q_T) lambda(T | V)
      + (|F|/|V|) sum_{T in F} [ H(q_T) + <ln psi_T>_{q_T}
                                 - KL(q_T || prod_j q_{neighbor class j}) ] lambda(T | F)
    """
    classes = q.classes
    model = g.model
    n_t, m_t = classes.class_sizes()
    n, m = model.n, model.m

    var_term = 0.0
    for key, (members, t) in classes.var_classes.items():
        var_term += (len(members) / n) * (1 - t.root_degree) * entropy(q.var(key))

    fac_term = 0.0
    for key, (members, t) in classes.fac_classes.items():
        joint = q.joint(key)
        a = members[0]
        log_table = np.transpose(model.psi(a).log_table, axes=t.canonical_root_order)
        mean_log_psi = float(np.sum(joint * log_table))
        neighbor_margs = [q.var(nkey) for nkey in classes.neighbor_keys[key]]
        divergence = kl(joint.ravel(), product(*neighbor_margs).ravel())
        fac_term += (len(members) / m) * (entropy(joint) + mean_log_psi - divergence)

    return var_term + (m / n) * fac_term


# ---------------------------------------------------------------------------
# clone-counting closed form
# ---------------------------------------------------------------------------


def _round_counts(dist: np.ndarray, total: int) -> np.ndarray:
    """Nearest-integer counts summing to `total` (largest-remainder rounding)."""
    raw = dist.ravel() * total
    base = np.floor(raw).astype(np.int64)
    short = total - int(base.sum())
    if short:
        order = np.argsort(-(raw - base), kind="stable")
        base[order[:short]] += 1
    return base.reshape(dist.shape)


@dataclass(frozen=True)
class QValidCount:
    """Closed-form estimate of the q-valid clone-assignment mass.

    `log_value` estimates ln sum over q-valid clone assignments of
    |G(M(G, sigma, ell))| / |G(M(G, ell))| with a +-sqrt(n) band; it is the
    weight-free counting exponent

        sum_T n_T H(q_T) - sum_{T', j} m_T' KL(q_{T' :j} || q_{nbr})
                         - sum_{T'}   m_T' KL(q_{T'} || prod_j q_{T' :j}),

    evaluated on the integer-rounded class counts.
    """

    log_value: float
    band: float
    feasible: bool
    rounding_residual: float
    detail: str = ""

    @property
    def interval(self) -> tuple:
        return (self.log_value - self.band, self.log_value + self.band)


def count_q_valid_ratio(g, ell: int, q: MarginalSequence, *, strict: bool = False) -> QValidCount:
    """Evaluate the counting closed form for the marginal sequence q.

    Counts q_T n_T and q_{T'} m_{T'} are projected to nearest integers (the
    residual is reported); a strict integer-balance check between variable-
    and constraint-side symbol counts decides feasibility.  With
    strict=True an infeasible projection raises Infeasible instead.
    """
    classes = q.classes
    n = g.model.n
    n_t, m_t = classes.class_sizes()

    residual = 0.0
    var_counts = {}
    for key, dist in q.var_dists.items():
        c = _round_counts(dist, n_t[key])
        var_counts[key] = c
        residual = max(residual, float(np.abs(c / n_t[key] - dist).max()))
    fac_counts = {}
    for key, joint in q.fac_joints.items():
        c = _round_counts(joint, m_t[key])
        fac_counts[key] = c
        residual = max(residual, float(np.abs(c / m_t[key] - joint).max()))

    # integer balance: constraint-side symbol counts aimed at class T must
    # equal d_T * (variable-side counts), else no q-valid assignment exists
    feasible = True
    detail = ""
    for vkey, c in var_counts.items():
        d_t = classes.var_classes[vkey][1].root_degree
        want = d_t * c
        got = np.zeros_like(c)
        for fkey, joint_counts in fac_counts.items():
            for pos, nkey in enumerate(classes.neighbor_keys[fkey]):
                if nkey == vkey:
                    axes = tuple(i for i in range(joint_counts.ndim) if i != pos)
                    got = got + joint_counts.sum(axis=axes)
        if np.any(got != want):
            feasible = False
            detail = (
                f"class {vkey}: constraint-side symbol counts {got.tolist()} != "
                f"d_T * variable-side {want.tolist()}"
            )
            break
    if strict and not feasible:
        raise Infeasible(f"no q-valid clone assignment exists: {detail}")

    total = 0.0
    for vkey, c in var_counts.items():
        total += n_t[vkey] * entropy(c / n_t[vkey])
    for fkey, c in fac_counts.items():
        m_count = m_t[fkey]
        joint = c / m_count
        margs = []
        for pos, nkey in enumerate(classes.neighbor_keys[fkey]):
            axes = tuple(i for i in range(joint.ndim) if i != pos)
            marg = joint.sum(axis=axes)
            margs.append(marg)
            total -= m_count * kl(marg, var_counts[nkey] / n_t[nkey])
        total -= m_count * kl(joint.ravel(), product(*margs).ravel())

    return QValidCount(
        log_value=float(total),
        band=math.sqrt(n),
        feasible=feasible,
        rounding_residual=residual,
        detail=detail,
    )
