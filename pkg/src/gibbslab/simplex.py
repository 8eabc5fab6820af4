"""Distributions on finite sets: distances, entropy, divergence, products.

Distributions are plain numpy arrays of nonnegative reals summing to 1.
Joint distributions over h-tuples are arrays of shape (k,) * h.

Two total-variation quantities appear in the package and both are provided
explicitly to avoid silent factor-of-two confusion:

    tv(p, q)       = (1/2) sum |p - q|   in [0, 1]   (distance)
    tv_norm(p, q)  =       sum |p - q|   in [0, 2]   (norm of p - q)

The norm variant is what the state/symmetry deviation functionals use; the
distance variant is used everywhere a distance between two distributions is
compared against a tolerance.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidArgument

NORMALIZATION_TOL = 1e-12


def as_distribution(p, name: str = "distribution") -> np.ndarray:
    """Validate and return `p` as a float distribution array."""
    arr = np.asarray(p, dtype=float)
    if arr.size == 0:
        raise InvalidArgument(f"{name} is empty")
    if np.any(arr < -NORMALIZATION_TOL):
        raise InvalidArgument(f"{name} has negative entries")
    total = float(arr.sum())
    if not np.isfinite(total) or abs(total - 1.0) > 1e-9:
        raise InvalidArgument(f"{name} sums to {total}, not 1")
    return arr


def tv(p, q) -> float:
    """Total variation distance, (1/2) sum |p - q|, in [0, 1]."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InvalidArgument(f"shape mismatch {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def tv_norm(p, q) -> float:
    """Total variation norm of the signed measure p - q, in [0, 2]."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InvalidArgument(f"shape mismatch {p.shape} vs {q.shape}")
    return float(np.abs(p - q).sum())


def entropy(p) -> float:
    """Shannon entropy in nats, with 0 ln 0 = 0."""
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0.0]
    return float(-np.dot(nz, np.log(nz)))


def kl(p, q) -> float:
    """Kullback-Leibler divergence KL(p || q) in [0, inf].

    Conventions 0 ln 0 = 0 and 0 ln(0/0) = 0; returns inf when p charges a
    point that q does not.
    """
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise InvalidArgument(f"shape mismatch {p.shape} vs {q.shape}")
    support = p > 0.0
    if np.any(q[support] <= 0.0):
        return float("inf")
    ps = p[support]
    return float(np.dot(ps, np.log(ps) - np.log(q[support])))


def product(*margs) -> np.ndarray:
    """Outer product of distributions, shape (k_1, ..., k_h)."""
    out = np.asarray(margs[0], dtype=float)
    for m in margs[1:]:
        out = np.multiply.outer(out, np.asarray(m, dtype=float))
    return out


def marginal_of_joint(joint: np.ndarray, axis: int) -> np.ndarray:
    """Marginal of a joint array onto one axis."""
    axes = tuple(i for i in range(joint.ndim) if i != axis)
    return joint.sum(axis=axes)


def uniform(k: int) -> np.ndarray:
    return np.full(k, 1.0 / k)
