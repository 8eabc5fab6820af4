"""Experiment specifications: one JSON file per run, unknown keys rejected."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import InvalidArgument
from ..localstruct.limits import FamilySpec

_COMMON_KEYS = {
    "command",
    "family",
    "family_params",
    "sizes",
    "betas",
    "ell",
    "extension_m",
    "samples",
    "seed",
    "eps",
    "delta",
    "measure",
    "measure_n",
    "out",
    "budget_cap",
}

_COMMANDS = {
    "verify-bethe",
    "decompose",
    "uniqueness-scan",
    "nonrecon-scan",
    "planted-compare",
    "concentration",
}


@dataclass(frozen=True)
class ExperimentSpec:
    command: str
    family: str | None = None
    family_params: dict = field(default_factory=dict)
    sizes: tuple = ()
    betas: tuple = ()
    ell: int = 1
    extension_m: int = 1
    samples: int = 100
    seed: int | None = None
    eps: float = 0.3
    delta: float = 0.2
    measure: str | None = None
    measure_n: int = 12
    budget_cap: int | None = None

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise InvalidArgument(f"unknown command {self.command!r}; choose from {sorted(_COMMANDS)}")
        if self.seed is None:
            raise InvalidArgument("seed is mandatory for reproducibility")

    def family_spec(self, beta: float) -> FamilySpec:
        params = dict(self.family_params)
        params["beta"] = beta
        return FamilySpec(self.family, params)


def load_spec(source) -> ExperimentSpec:
    """Parse a spec from a JSON file path, file object, or dict."""
    if isinstance(source, dict):
        obj = dict(source)
    elif hasattr(source, "read"):
        obj = json.load(source)
    else:
        with open(source, "r", encoding="utf8") as fh:
            obj = json.load(fh)
    unknown = set(obj) - _COMMON_KEYS
    if unknown:
        raise InvalidArgument(f"unknown spec keys: {sorted(unknown)}")
    for key in ("sizes", "betas"):
        if key in obj:
            obj[key] = tuple(obj[key])
    obj.pop("out", None)
    return ExperimentSpec(**obj)
