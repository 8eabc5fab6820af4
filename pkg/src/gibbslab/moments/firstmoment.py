"""Conditional first moment of the restricted partition function.

Formula mode evaluates n * B_{G, ell}(q); Monte-Carlo mode averages
1{(2 ell + 5)-acyclic} * Z_{ell, q, delta} over enhanced-model resamples of
G (the unfiltered average is reported alongside).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument
from ..models.gibbs import PARTITION_BUDGET
from ..models.graph import is_l_acyclic
from ..rng import stream
from .functional import graph_bethe
from .resample import Resampler
from .restricted import RestrictionWindow, restricted_partition
from .sequences import GraphClasses, ms3_residual

MS3_TOL = 1e-8


@dataclass(frozen=True)
class FirstMomentEstimate:
    mode: str
    log_value: float
    log_value_unfiltered: float | None
    samples: int
    seed: int | None
    acyclic_fraction: float | None
    guaranteed: bool | None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "log_value": self.log_value,
            "log_value_unfiltered": self.log_value_unfiltered,
            "samples": self.samples,
            "seed": self.seed,
            "acyclic_fraction": self.acyclic_fraction,
            "guaranteed": self.guaranteed,
        }

    def to_record(self) -> dict:
        """The flat emission schema shared by the moment estimators."""
        return {
            "mode": self.mode,
            "value": self.log_value,
            "band": None,
            "samples": self.samples,
            "seed": self.seed,
            "acceptance_rate": self.acyclic_fraction,
        }


def conditional_first_moment(
    g,
    window: RestrictionWindow,
    mode: str,
    samples: int = 0,
    seed: int = 0,
    *,
    budget: int = PARTITION_BUDGET,
) -> FirstMomentEstimate:
    if mode == "formula":
        residual = ms3_residual(window.q)
        if residual > MS3_TOL:
            raise InvalidArgument(
                f"marginal sequence violates the MS3 balance (residual {residual:.2e}); "
                "the counting formula requires it"
            )
        value = g.model.n * graph_bethe(g, window.ell, window.q)
        return FirstMomentEstimate("formula", value, None, 0, None, None, None)

    if mode == "montecarlo":
        if samples < 1:
            raise InvalidArgument("montecarlo mode needs samples >= 1")
        resampler = Resampler(g, window.ell)
        rng = stream(seed, "firstmoment")
        acyclic_cut = 2 * window.ell + 5
        total_filtered = 0.0
        total_all = 0.0
        acyclic = 0
        for _ in range(samples):
            draw = resampler.draw(rng)
            classes = GraphClasses(draw, window.ell)
            z, _ = restricted_partition(draw, window, classes=classes, budget=budget)
            total_all += z
            if is_l_acyclic(draw, acyclic_cut):
                acyclic += 1
                total_filtered += z
        mean_f = total_filtered / samples
        mean_all = total_all / samples
        return FirstMomentEstimate(
            "montecarlo",
            float(np.log(mean_f)) if mean_f > 0 else float("-inf"),
            float(np.log(mean_all)) if mean_all > 0 else float("-inf"),
            samples,
            seed,
            acyclic / samples,
            resampler.guaranteed,
        )

    raise InvalidArgument(f"unknown mode {mode!r}")
