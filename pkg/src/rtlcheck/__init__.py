"""Reactive temporal logic checking for CCS with time-outs and Petri nets."""

from .checker import (
    Criterion, Judgement, ModelTooLarge, Verdict, check_counting_FS3, classify_hierarchy,
    complete_paths_semantics, oracle_check,
)
from .kripke import KripkeStructure, Lasso, LtsPath, embed_infinite, instrument, lts_to_kripke
from .ltl import Formula, evaluate, is_safety_fragment, parse_formula
from .petri import Marking, PetriNet, check_structural_conflict, net_to_ltsc, parse_net
from .semantics import BoundExceeded, Ltsc, concurrency, derive_transitions, explore, mark_spurious
from .syntax import Definitions, ParseError, ValidationError, parse, pretty, validate

__all__ = [
    "BoundExceeded",
    "Criterion",
    "Definitions",
    "Formula",
    "Judgement",
    "KripkeStructure",
    "Lasso",
    "LtsPath",
    "Ltsc",
    "Marking",
    "ModelTooLarge",
    "ParseError",
    "PetriNet",
    "ValidationError",
    "Verdict",
    "check_counting_FS3",
    "check_structural_conflict",
    "classify_hierarchy",
    "complete_paths_semantics",
    "concurrency",
    "derive_transitions",
    "embed_infinite",
    "evaluate",
    "explore",
    "instrument",
    "is_safety_fragment",
    "lts_to_kripke",
    "mark_spurious",
    "net_to_ltsc",
    "oracle_check",
    "parse",
    "parse_formula",
    "parse_net",
    "pretty",
    "validate",
]

__version__ = "0.1.0"
