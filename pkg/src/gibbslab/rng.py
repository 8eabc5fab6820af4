"""Reproducible named random streams.

All randomness in the package flows through `stream(seed, *names)`: a PCG64
generator keyed by the user seed plus a hash of the stream name parts.  The
derivation uses SHA-256, so the same (seed, names) pair yields the same
stream on every platform and process, and distinct names yield independent
streams.
"""
from __future__ import annotations

import hashlib

import numpy as np


def _name_entropy(names: tuple) -> int:
    digest = hashlib.sha256("\x1f".join(str(n) for n in names).encode("utf8")).digest()
    return int.from_bytes(digest[:16], "little")


def stream(seed: int, *names) -> np.random.Generator:
    """Derive the named substream of `seed`."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), _name_entropy(names)]))
