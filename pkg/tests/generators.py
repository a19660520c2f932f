"""Seeded random LTSCs, formulas and traces shared by the property tests."""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from rtlcheck.kripke import Trace
from rtlcheck.ltl import FALSE, TRUE, Atom, F, Formula, G, Implies, Not, U, W, X, Y, And, Or
from rtlcheck.semantics import Ltsc, ltsc_from_edges

LABELS = ("a", "b", "tau")


def random_ltsc(rng: random.Random, max_states: int = 6, max_transitions: int = 10,
                labels: Sequence[str] = LABELS, p_concurrent: float = 0.4) -> Ltsc:
    n = rng.randint(1, max_states)
    m = rng.randint(0, max_transitions)
    edges = [(rng.randrange(n), rng.choice(labels), rng.randrange(n)) for _ in range(m)]
    pairs = [(t, u) for t in range(m) for u in range(m) if t != u and rng.random() < p_concurrent]
    return ltsc_from_edges(n, edges, pairs)


_UNARY = ("not", "X", "Y", "F", "G")
_BINARY = ("and", "or", "implies", "U", "W")


def random_formula(rng: random.Random, atoms: Sequence[str], depth: int = 3) -> Formula:
    """A formula with temporal depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.06:
            return TRUE if r < 0.03 else FALSE
        return Atom(rng.choice(atoms))
    op = rng.choice(_UNARY + _BINARY)
    temporal = op in ("X", "Y", "F", "G", "U", "W")
    inner = depth - 1 if temporal else depth
    if op in _UNARY:
        a = random_formula(rng, atoms, inner)
        return {"not": Not, "X": X, "Y": Y, "F": F, "G": G}[op](a)
    a = random_formula(rng, atoms, inner)
    b = random_formula(rng, atoms, inner)
    return {"and": And, "or": Or, "implies": Implies, "U": U, "W": W}[op](a, b)


def random_safety_formula(rng: random.Random, atoms: Sequence[str], depth: int = 3) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        a = Atom(rng.choice(atoms))
        return Not(a) if rng.random() < 0.4 else a
    op = rng.choice(("and", "or", "Y", "G", "W", "implies"))
    if op == "Y":
        return Y(random_safety_formula(rng, atoms, depth - 1))
    if op == "G":
        return G(random_safety_formula(rng, atoms, depth - 1))
    if op == "implies":
        return Implies(Atom(rng.choice(atoms)), random_safety_formula(rng, atoms, depth))
    a = random_safety_formula(rng, atoms, depth - 1 if op == "W" else depth)
    b = random_safety_formula(rng, atoms, depth - 1 if op == "W" else depth)
    return {"and": And, "or": Or, "W": W}[op](a, b)


def random_trace(rng: random.Random, atoms: Sequence[str], max_len: int = 6,
                 infinite: Optional[bool] = None) -> Trace:
    n = rng.randint(1, max_len)
    vals = tuple(frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(n))
    if infinite is None:
        infinite = rng.random() < 0.7
    return Trace(vals, rng.randrange(n) if infinite else None)


def random_models(seed: int, count: int, **kw) -> List[Ltsc]:
    rng = random.Random(seed)
    return [random_ltsc(rng, **kw) for _ in range(count)]
