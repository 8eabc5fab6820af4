"""The constrained maximum-entropy joint of a constraint node.

Among all joints nu on Omega^h with prescribed one-point marginals, the
unique maximizer of H(nu) + <ln psi>_nu has the form

    nu(sigma) = psi(sigma) * prod_j m_j(sigma_j)

for positive axis multipliers m_j; iterative proportional fitting converges
to it geometrically because psi is strictly positive, and strict concavity
of the objective on the marginal polytope makes the maximizer unique.
"""
from __future__ import annotations

import numpy as np

from ..errors import NonConvergence
from ..simplex import as_distribution, marginal_of_joint

IPF_TOL = 1e-10
IPF_MAX_SWEEPS = 100_000


def max_entropy_joint(table: np.ndarray, marginals, *, tol: float = IPF_TOL) -> np.ndarray:
    """Maximize H(nu) + <ln psi>_nu subject to nu having the given marginals.

    `table` is the strictly positive psi table of shape (k,) * h; `marginals`
    is one distribution on Omega per axis.  Stops when every marginal matches
    within `tol` (sup norm).
    """
    h = table.ndim
    if len(marginals) != h:
        raise ValueError(f"need {h} marginals, got {len(marginals)}")
    margs = [as_distribution(m, f"marginal[{j}]") for j, m in enumerate(marginals)]

    nu = np.array(table, dtype=float)
    nu /= nu.sum()
    shape_one = [1] * h
    for _ in range(IPF_MAX_SWEEPS):
        residual = 0.0
        for j in range(h):
            cur = marginal_of_joint(nu, j)
            residual = max(residual, float(np.abs(cur - margs[j]).max()))
            ratio = np.ones_like(cur)
            pos = cur > 0.0
            ratio[pos] = margs[j][pos] / cur[pos]
            shape = list(shape_one)
            shape[j] = -1
            nu = nu * ratio.reshape(shape)
        nu /= nu.sum()
        if residual < tol:
            return nu
    raise NonConvergence(
        f"IPF did not reach {tol} within {IPF_MAX_SWEEPS} sweeps", residual=residual
    )
