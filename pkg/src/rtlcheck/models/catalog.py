"""The built-in models, stored as asset files next to this module."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Dict, List, Tuple, Union

from ..petri import PetriNet, net_to_ltsc, parse_net
from ..semantics import DEFAULT_BOUND, Ltsc, explore
from ..syntax import Definitions, Process, parse

# name -> (asset file, role); role picks default B/E and requirement suite
CATALOG: Dict[str, Tuple[str, str]] = {
    "beer-D": ("beer-D.ccst", "beer"),
    "bart-E": ("bart-E.ccst", "beer"),
    "bars-F": ("bars-F.ccst", "beer"),
    "vending": ("vending.ccst", "other"),
    "ex43": ("ex43.ccst", "other"),
    "fs-F1F2": ("fs-F1F2.ccst", "fs"),
    "fs-E1GE2": ("fs-E1GE2.ccst", "fs"),
    "fs-E1E2": ("fs-E1E2.ccst", "fs"),
    "fs-F0": ("fs-F0.ccst", "fs"),
    "gatekeeper-fs": ("gatekeeper-fs.ccst", "fs"),
    "fs-sequential": ("fs-sequential.ccst", "fs"),
    "me-F": ("me-F.ccst", "me"),
    "me-R": ("me-R.ccst", "me"),
    "me-H": ("me-H.ccst", "me"),
    "me-nil": ("me-nil.ccst", "me"),
    "me-W": ("me-W.ccst", "me1"),
    "gatekeeper-me": ("gatekeeper-me.ccst", "me"),
    "gatekeeper-encapsulated": ("gatekeeper-encapsulated.ccst", "me"),
    "peterson-ccs": ("peterson-ccs.ccst", "me"),
    "peterson-ccs-signals": ("peterson-ccs-signals.ccst", "me"),
    "peterson-ccst": ("peterson-ccst.ccst", "me"),
    "peterson-petri": ("peterson-petri.pnet", "me"),
    "peterson-petri-read-arcs": ("peterson-petri-read-arcs.pnet", "me"),
}

Model = Union[Tuple[Definitions, Process], PetriNet]


class UnknownModel(KeyError):
    pass


def names() -> List[str]:
    return list(CATALOG)


def role(name: str) -> str:
    return _entry(name)[1]


def _entry(name: str) -> Tuple[str, str]:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownModel("unknown model %r; known: %s" % (name, ", ".join(CATALOG))) from None


def asset_text(name: str) -> str:
    return resources.files(__package__).joinpath("assets").joinpath(_entry(name)[0]).read_text("utf-8")


def asset_path(name: str) -> str:
    return _entry(name)[0]


def builtin(name: str) -> Model:
    text = asset_text(name)
    if asset_path(name).endswith(".pnet"):
        return parse_net(text, name)
    return parse(text)


def to_ltsc(model: Model, bound: int = DEFAULT_BOUND) -> Ltsc:
    if isinstance(model, PetriNet):
        return net_to_ltsc(model, bound)
    defs, root = model
    return explore(defs, root, bound)


def load_source(spec: str) -> Tuple[str, Model]:
    """``builtin:<name>`` or a path to a .ccst/.pnet file."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        return name, builtin(name)
    path = Path(spec)
    text = path.read_text("utf-8")
    if path.suffix == ".pnet":
        return path.stem, parse_net(text, path.stem)
    return path.stem, parse(text)


def load_ltsc(spec: str, bound: int = DEFAULT_BOUND) -> Ltsc:
    if ":" not in spec and spec in CATALOG:
        spec = "builtin:" + spec
    return to_ltsc(load_source(spec)[1], bound)
