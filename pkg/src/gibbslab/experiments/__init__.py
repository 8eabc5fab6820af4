from .spec import ExperimentSpec, load_spec
from .runner import (
    cmd_verify_bethe,
    cmd_decompose,
    cmd_uniqueness_scan,
    cmd_nonrecon_scan,
    cmd_planted_compare,
    cmd_concentration,
)

__all__ = [
    "ExperimentSpec",
    "load_spec",
    "cmd_verify_bethe",
    "cmd_decompose",
    "cmd_uniqueness_scan",
    "cmd_nonrecon_scan",
    "cmd_planted_compare",
    "cmd_concentration",
]
