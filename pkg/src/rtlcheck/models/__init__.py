"""Built-in models and the requirement formulas checked against them."""

from .catalog import CATALOG, builtin, load_ltsc, to_ltsc
from .requirements import (
    RequirementSpec, fs_suite, me_suite, requirement, wrap_fs_interface, wrap_me_interface,
)

__all__ = [
    "CATALOG",
    "RequirementSpec",
    "builtin",
    "fs_suite",
    "load_ltsc",
    "me_suite",
    "requirement",
    "to_ltsc",
    "wrap_fs_interface",
    "wrap_me_interface",
]
