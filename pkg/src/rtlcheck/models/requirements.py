"""Requirement formulas for fair schedulers (FS) and mutual exclusion (ME),
and the input interfaces that wrap a model before it is checked."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

from ..ltl import Atom, F, Formula, G, Implies, Not, W, Y, And, conj, disj, is_safety_fragment
from ..syntax import (
    Definitions, Identifier, Parallel, Process, base_name, prefix, relabel, restrict, subterms,
    GuardedChoice,
)


@dataclass(frozen=True)
class RequirementSpec:
    name: str
    formula: Formula
    B: FrozenSet[str]
    E: Optional[FrozenSet[str]] = None
    # False for the safety requirements, whose verdict does not depend on the criterion
    reactive: bool = True

    @property
    def safety(self) -> bool:
        return is_safety_fragment(self.formula)

    def label(self) -> str:
        return self.name


ME_NAMES = ("ME1", "ME2", "ME3", "ME4", "ME5", "ME6", "ME6a", "ME6b")
FS_NAMES = ("FS1", "FS2", "FS3'", "FS4", "FS4W")


def default_indices(i: str) -> Tuple[str, ...]:
    return ("A", "B") if i in ("A", "B") else ("1", "2")


def _me(action: str, i: str) -> Formula:
    return Atom("%s_%s" % (action, i))


def me_blocking(indices: Sequence[str]) -> FrozenSet[str]:
    return frozenset("ln_%s" % k for k in indices)


def me_E(indices: Sequence[str]) -> FrozenSet[str]:
    """B together with the lc actions: the most natural finitely blockable set."""
    return me_blocking(indices) | frozenset("lc_%s" % k for k in indices)


def _me_requirement(name: str, i: str, j: Optional[str], indices: Sequence[str]) -> RequirementSpec:
    ln, ec, lc, en = (_me(a, i) for a in ("ln", "ec", "lc", "en"))
    B = me_blocking(indices)
    E = me_E(indices)
    if name == "ME1":
        act = disj([ln, ec, lc, en])
        quiet = Not(act)
        f = conj([W(quiet, ln)] + [G(Implies(a, Y(W(quiet, b))))
                                   for a, b in ((ln, ec), (ec, lc), (lc, en), (en, ln))])
        return RequirementSpec("ME1(%s)" % i, f, B, E, reactive=False)
    if name == "ME2":
        if j is None:
            raise ValueError("ME2 needs two indices")
        f = G(Implies(ec, W(Not(_me("ec", j)), lc)))
        return RequirementSpec("ME2(%s,%s)" % (i, j), f, B, E, reactive=False)
    if name == "ME3":
        return RequirementSpec("ME3(%s)" % i, G(Implies(ln, F(ec))), B, E)
    if name == "ME4":
        return RequirementSpec("ME4(%s)" % i, G(Implies(ec, F(lc))), B, E)
    if name == "ME5":
        return RequirementSpec("ME5(%s)" % i, G(Implies(lc, F(en))), B, E)
    B6 = B - {"ln_%s" % i}
    if name == "ME6":
        return RequirementSpec("ME6(%s)" % i, And(F(ln), G(Implies(en, F(ln)))), B6, E)
    if name == "ME6a":
        return RequirementSpec("ME6a(%s)" % i, F(ln), B6, E)
    if name == "ME6b":
        return RequirementSpec("ME6b(%s)" % i, G(Implies(en, F(ln))), B6, E)
    raise ValueError("unknown requirement %r" % name)


def _fs_requirement(name: str, i: str) -> RequirementSpec:
    r, t = Atom("r" + i), Atom("t" + i)
    B = frozenset({"r1", "r2"})
    if name == "FS1":
        return RequirementSpec("FS1(%s)" % i, G(F(r)), B - {"r" + i})
    if name == "FS2":
        return RequirementSpec("FS2(%s)" % i, G(Implies(r, F(t))), B)
    if name == "FS3'":
        once = W(Not(t), r)
        return RequirementSpec("FS3'(%s)" % i, And(once, G(Implies(t, Y(once)))), B, reactive=False)
    free = W(And(Not(Atom("t1")), Not(Atom("t2"))), Atom("e"))
    if name == "FS4":
        return RequirementSpec("FS4(%s)" % i, G(Implies(t, Y(free))), B, reactive=False)
    if name == "FS4W":
        return RequirementSpec("FS4W(%s)" % i, G(Implies(t, W(t, free))), B, reactive=False)
    raise ValueError("unknown requirement %r" % name)


def requirement(name: str, i: str, j: Optional[str] = None,
                indices: Optional[Sequence[str]] = None) -> RequirementSpec:
    """Requirement ``name`` for process ``i`` (and ``j`` for ME2)."""
    i = str(i)
    name = {n.upper(): n for n in ME_NAMES + FS_NAMES}.get(name.upper(), name)
    if name.upper().startswith("ME"):
        idx = tuple(indices) if indices is not None else default_indices(i)
        if i not in idx:
            raise ValueError("index %s not among %s" % (i, idx))
        return _me_requirement(name, i, None if j is None else str(j), idx)
    if name.upper().startswith("FS"):
        if i not in ("1", "2"):
            raise ValueError("fair-scheduler index must be 1 or 2")
        return _fs_requirement(name, i)
    raise ValueError("unknown requirement %r" % name)


def me_suite(indices: Sequence[str] = ("1", "2")) -> List[RequirementSpec]:
    out = []
    for i in indices:
        out.append(requirement("ME1", i, indices=indices))
        out.extend(requirement("ME2", i, j, indices=indices) for j in indices if j != i)
        out.extend(requirement(n, i, indices=indices) for n in ("ME3", "ME4", "ME5", "ME6"))
    return out


def fs_suite() -> List[RequirementSpec]:
    return [requirement(n, i) for i in ("1", "2") for n in ("FS1", "FS2", "FS3'", "FS4")]


def me_indices_of(labels) -> Tuple[str, ...]:
    found = sorted({lab.split("_", 1)[1] for lab in labels
                    if lab.split("_", 1)[0] in ("ln", "ec", "lc", "en") and "_" in lab})
    return tuple(found) or ("1", "2")


# -- input interfaces ----------------------------------------------------------

class NameClash(ValueError):
    pass


def _names_used(defs: Definitions, root: Process) -> set:
    names = set()
    for p in [root] + list(defs.defs.values()):
        for q in subterms(p):
            if isinstance(q, GuardedChoice):
                names.update(base_name(s.label) for s in q.summands)
    return names


def _fresh(defs: Definitions, base: str) -> str:
    name = base
    k = 0
    while name in defs.defs:
        k += 1
        name = "%s_%d" % (base, k)
    return name


def _wrap(defs: Definitions, root: Process, steps, mapping, hidden) -> Tuple[Definitions, Process]:
    clash = sorted(set(hidden) & _names_used(defs, root))
    if clash:
        raise NameClash("interface names already in use: %s" % ", ".join(clash))
    new = dict(defs.defs)
    ids = []
    for k in ("1", "2"):
        name = _fresh(Definitions(new), "I%s" % k)
        proc: Process = Identifier(name)
        for step in reversed([s.replace("%s", k) for s in steps]):
            label, _, tag = step.partition("@")
            proc = prefix(label, proc, tag or None)
        new[name] = proc
        ids.append(Identifier(name))
    body = Parallel(Parallel(ids[0], relabel(root, mapping)), ids[1])
    return Definitions(new, defs.signals), restrict(body, hidden)


def wrap_fs_interface(defs: Definitions, root: Process) -> Tuple[Definitions, Process]:
    """(I1 | F[f] | I2) with c1, c2 restricted, I_i = r_i.'c_i.I_i and f(r_i) = c_i."""
    return _wrap(defs, root, ["r%s", "'c%s"], {"r1": "c1", "r2": "c2"}, ["c1", "c2"])


def wrap_me_interface(defs: Definitions, root: Process) -> Tuple[Definitions, Process]:
    """(I1 | P[f] | I2) with c_i, d_i restricted, I_i = ln_i.'c_i.'d_i.en_i.I_i (the
    handshake tagged pass_i so that it forms a task of its own),
    f(ln_i) = c_i and f(en_i) = d_i."""
    return _wrap(defs, root, ["ln_%s", "'c%s@pass%s", "'d%s", "en_%s"],
                 {"ln_1": "c1", "ln_2": "c2", "en_1": "d1", "en_2": "d2"}, ["c1", "c2", "d1", "d2"])
