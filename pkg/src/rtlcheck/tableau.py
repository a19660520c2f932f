"""LTL to transition-based generalized Buchi automata by tableau expansion.

States are sets of obligations (formulas in negation normal form).  A cover
of a state is one way of meeting its obligations now: literals that must hold
in the current position, obligations for the next position, and the until
formulas whose fulfilment was postponed.  A transition is accepting for an
until formula when it does not postpone it.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Tuple

from .ltl import Formula, nnf

Literal = Tuple[str, bool]


class Cover:
    __slots__ = ("pos", "neg", "nxt", "acc")

    def __init__(self, pos: FrozenSet[str], neg: FrozenSet[str], nxt: int, acc: int):
        self.pos = pos
        self.neg = neg
        self.nxt = nxt
        self.acc = acc

    def matches(self, valuation: FrozenSet[str]) -> bool:
        return self.pos <= valuation and not (self.neg & valuation)


def _untils(f: Formula, out: List[Formula]) -> None:
    if f.op == "U" and f not in out:
        out.append(f)
    for a in f.args:
        _untils(a, out)


class Tableau:
    """Automaton for an NNF formula; states are numbered from 0 (initial)."""

    def __init__(self, formula: Formula):
        self.formula = formula
        self.untils: List[Formula] = []
        _untils(formula, self.untils)
        # subformula numbering gives a deterministic order without printing formulas
        self._rank: Dict[Formula, int] = {}
        _rank(formula, self._rank)
        self.all_acc = (1 << len(self.untils)) - 1
        self.states: List[FrozenSet[Formula]] = []
        self._index: Dict[FrozenSet[Formula], int] = {}
        self._covers: Dict[int, List[Cover]] = {}
        self._succ: Dict[Tuple[int, FrozenSet[str]], List[Tuple[int, int]]] = {}
        self.state(frozenset({formula}))

    @classmethod
    def for_formula(cls, formula: Formula) -> "Tableau":
        return cls(nnf(formula))

    def state(self, obligations: FrozenSet[Formula]) -> int:
        idx = self._index.get(obligations)
        if idx is None:
            idx = self._index[obligations] = len(self.states)
            self.states.append(obligations)
        return idx

    def covers(self, q: int) -> List[Cover]:
        hit = self._covers.get(q)
        if hit is None:
            found = {}
            for pos, neg, nxt, postponed in self._expand(list(self.states[q]), frozenset(), frozenset(),
                                                         frozenset(), frozenset()):
                acc = self.all_acc
                for u in postponed:
                    acc &= ~(1 << self.untils.index(u))
                key = (pos, neg, nxt, acc)
                found[key] = None
            hit = [Cover(pos, neg, self.state(nxt), acc)
                   for pos, neg, nxt, acc in sorted(found, key=self._cover_key)]
            self._covers[q] = hit
        return hit

    def _cover_key(self, key):
        pos, neg, nxt, acc = key
        return (sorted(pos), sorted(neg), sorted(self._rank[f] for f in nxt), -acc)

    def successors(self, q: int, valuation: FrozenSet[str]) -> List[Tuple[int, int]]:
        """(next state, acceptance bits) pairs for a position with ``valuation``.

        Literals are decided on the spot, and an until whose right side
        already holds is not postponed, since postponing only adds obligations.
        """
        key = (q, valuation)
        hit = self._succ.get(key)
        if hit is None:
            found = {}
            for _, _, nxt, postponed in self._expand(list(self.states[q]), frozenset(), frozenset(),
                                                     frozenset(), frozenset(), valuation):
                acc = self.all_acc
                for u in postponed:
                    acc &= ~(1 << self.untils.index(u))
                found[(nxt, acc)] = None
            pairs = sorted(found, key=lambda e: (sorted(self._rank[f] for f in e[0]), -e[1]))
            hit = self._succ[key] = [(self.state(nxt), acc) for nxt, acc in pairs]
        return hit

    def _expand(self, todo, pos, neg, nxt, postponed, valuation=None):
        """Branches of the expansion; identical partial branches are merged."""
        rank = self._rank
        start = (frozenset(todo), pos, neg, frozenset(nxt), frozenset(postponed), frozenset())
        stack = [start]
        seen = {start}
        results = {}

        def push(todo, pos, neg, nxt, postponed, done):
            item = (todo, pos, neg, nxt, postponed, done)
            if item not in seen:
                seen.add(item)
                stack.append(item)

        while stack:
            todo, pos, neg, nxt, postponed, done = stack.pop()
            if not todo:
                results[(pos, neg, nxt, postponed)] = None
                continue
            f = min(todo, key=rank.__getitem__)
            todo = todo - {f}
            if f in done:
                push(todo, pos, neg, nxt, postponed, done)
                continue
            done = done | {f}
            op = f.op
            if op == "true":
                push(todo, pos, neg, nxt, postponed, done)
            elif op == "false":
                continue
            elif op == "atom":
                if f.name in neg or (valuation is not None and f.name not in valuation):
                    continue
                push(todo, pos | {f.name}, neg, nxt, postponed, done)
            elif op == "not":
                name = f.args[0].name
                if name in pos or (valuation is not None and name in valuation):
                    continue
                push(todo, pos, neg | {name}, nxt, postponed, done)
            elif op == "and":
                push(todo | set(f.args), pos, neg, nxt, postponed, done)
            elif op == "or":
                options = f.args
                if valuation is not None:
                    decided = [_literal_value(g, valuation) for g in f.args]
                    if True in decided:
                        push(todo, pos, neg, nxt, postponed, done)
                        continue
                    options = [g for g, v in zip(f.args, decided) if v is None]
                for g in options:
                    push(todo | {g}, pos, neg, nxt, postponed, done)
            elif op == "X":
                push(todo, pos, neg, nxt | {f.args[0]}, postponed, done)
            elif op == "U":
                a, b = f.args
                now = None if valuation is None else _literal_value(b, valuation)
                if now is True:
                    push(todo, pos, neg, nxt, postponed, done)
                    continue
                if now is None:
                    push(todo | {b}, pos, neg, nxt, postponed, done)
                push(todo | {a}, pos, neg, nxt | {f}, postponed | {f}, done)
            elif op == "R":
                a, b = f.args
                if valuation is not None:
                    vb = _literal_value(b, valuation)
                    if vb is False:
                        continue
                    if vb is True and _literal_value(a, valuation) is True:
                        push(todo, pos, neg, nxt, postponed, done)
                        continue
                push(todo | {a, b}, pos, neg, nxt, postponed, done)
                push(todo | {b}, pos, neg, nxt | {f}, postponed, done)
            else:
                raise ValueError("formula not in negation normal form: %s" % op)
        return list(results)


def _literal_value(f: Formula, valuation: FrozenSet[str]):
    """Truth of ``f`` at a position with ``valuation`` when that alone decides it, else None."""
    op = f.op
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "atom":
        return f.name in valuation
    if op == "not":
        v = _literal_value(f.args[0], valuation)
        return None if v is None else not v
    if op == "U":
        b = _literal_value(f.args[1], valuation)
        if b is True:
            return True
        return False if b is False and _literal_value(f.args[0], valuation) is False else None
    if op == "R":
        b = _literal_value(f.args[1], valuation)
        if b is False:
            return False
        return True if b is True and _literal_value(f.args[0], valuation) is True else None
    if op in ("and", "or"):
        vals = [_literal_value(a, valuation) for a in f.args]
        if op == "and":
            return False if False in vals else (None if None in vals else True)
        return True if True in vals else (None if None in vals else False)
    return None


def _rank(f: Formula, out: Dict[Formula, int]) -> None:
    if f not in out:
        out[f] = len(out)
        for a in f.args:
            _rank(a, out)
