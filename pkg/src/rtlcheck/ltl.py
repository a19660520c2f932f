"""LTL formulas over finite and ultimately periodic paths.

Formulas are interned, so structurally equal formulas are the same object.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, List, Optional

from .kripke import END, TR, Trace, en_task, en_tr, interfere, oc_task

UNARY = ("not", "X", "Y", "F", "G")
BINARY = ("and", "or", "implies", "U", "W")


class Formula:
    __slots__ = ("op", "args", "name", "_hash", "__weakref__")
    _table: Dict[tuple, "Formula"] = {}

    def __new__(cls, op: str, *args, name: Optional[str] = None):
        key = (op, name) + tuple(id(a) for a in args)
        hit = cls._table.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.op = op
        self.args = args
        self.name = name
        self._hash = hash(key)
        cls._table[key] = self
        return self

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        return "Formula(%s)" % to_text(self)

    def __str__(self):
        return to_text(self)

    def __lt__(self, other):
        return to_text(self) < to_text(other)

    # operator sugar
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)

    def depth(self) -> int:
        if self.op in ("atom", "true", "false"):
            return 0
        inner = max(a.depth() for a in self.args)
        return inner + (1 if self.op in ("X", "Y", "F", "G", "U", "W") else 0)

    def atoms(self) -> set:
        if self.op == "atom":
            return {self.name}
        out = set()
        for a in self.args:
            out |= a.atoms()
        return out


TRUE = Formula("true")
FALSE = Formula("false")


def Atom(name: str) -> Formula:
    return Formula("atom", name=name)


def Not(a):
    return Formula("not", a)


def And(a, b):
    return Formula("and", a, b)


def Or(a, b):
    return Formula("or", a, b)


def Implies(a, b):
    return Formula("implies", a, b)


def X(a):
    return Formula("X", a)


def Y(a):
    return Formula("Y", a)


def F(a):
    return Formula("F", a)


def G(a):
    return Formula("G", a)


def U(a, b):
    return Formula("U", a, b)


def W(a, b):
    return Formula("W", a, b)


def conj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def conjuncts(f: Formula) -> List[Formula]:
    if f.op == "and":
        return conjuncts(f.args[0]) + conjuncts(f.args[1])
    if f is TRUE:
        return []
    return [f]


# -- text syntax ---------------------------------------------------------------
#
# Precedence, loosest first: ->  |  &  U W  then the prefix operators.
# Atoms are identifiers, 'name for conames, or "anything" in double quotes.

_IDENT = re.compile(r"^'?[A-Za-z_][A-Za-z0-9_]*$")
_KEYWORDS = {"X", "Y", "F", "G", "U", "W", "true", "false"}
_TOK = re.compile(r'\s*(?:(->)|("[^"]*")|(\'?[A-Za-z_][A-Za-z0-9_]*)|([!&|()~]))')


def _atom_text(name: str) -> str:
    if _IDENT.match(name) and name not in _KEYWORDS:
        return name
    return '"%s"' % name


_PREC = {"implies": 1, "or": 2, "and": 3, "U": 4, "W": 4, "R": 4}


def to_text(f: Formula, level: int = 0) -> str:
    op = f.op
    if op == "true" or op == "false":
        return op
    if op == "atom":
        return _atom_text(f.name)
    if op in UNARY:
        sym = "!" if op == "not" else op + " "
        return sym + to_text(f.args[0], 5)
    prec = _PREC[op]
    sym = {"implies": " -> ", "or": " | ", "and": " & ", "U": " U ", "W": " W ", "R": " R "}[op]
    if op == "implies":
        text = to_text(f.args[0], prec + 1) + sym + to_text(f.args[1], prec)
    elif op in ("U", "W", "R"):
        text = to_text(f.args[0], prec + 1) + sym + to_text(f.args[1], prec + 1)
    else:
        text = to_text(f.args[0], prec) + sym + to_text(f.args[1], prec + 1)
    return "(" + text + ")" if prec < level else text


class FormulaSyntaxError(ValueError):
    pass


def parse_formula(text: str) -> Formula:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:
            raise FormulaSyntaxError("bad character at %d in %r" % (pos, text))
        tok = next(g for g in m.groups() if g is not None)
        if len(tok) > 1 and set(tok) <= set("XYFG"):
            toks.extend(tok)  # GF p, XX p
        else:
            toks.append(tok)
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take(expected=None):
        nonlocal i
        tok = toks[i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError("expected %r, found %r in %r" % (expected, tok, text))
        i += 1
        return tok

    def implies():
        left = disjunction()
        if peek() == "->":
            take()
            return Implies(left, implies())
        return left

    def disjunction():
        left = conjunction()
        while peek() == "|":
            take()
            left = Or(left, conjunction())
        return left

    def conjunction():
        left = binary()
        while peek() == "&":
            take()
            left = And(left, binary())
        return left

    def binary():
        left = unary()
        if peek() in ("U", "W"):
            op = take()
            right = unary()
            return U(left, right) if op == "U" else W(left, right)
        return left

    def unary():
        tok = peek()
        if tok in ("!", "~"):
            take()
            return Not(unary())
        if tok in ("X", "Y", "F", "G"):
            take()
            return Formula(tok, unary())
        if tok == "(":
            take()
            inner = implies()
            take(")")
            return inner
        if tok == "true":
            take()
            return TRUE
        if tok == "false":
            take()
            return FALSE
        if tok is None or tok in ("->", "|", "&", ")", "U", "W"):
            raise FormulaSyntaxError("unexpected %r in %r" % (tok, text))
        take()
        if tok.startswith('"'):
            return Atom(tok[1:-1])
        return Atom(tok)

    f = implies()
    if peek() is not None:
        raise FormulaSyntaxError("trailing input %r in %r" % (peek(), text))
    return f


# -- semantics ---------------------------------------------------------------

def _truth_table(trace: Trace, f: Formula, memo: Dict[Formula, List[bool]]) -> List[bool]:
    hit = memo.get(f)
    if hit is not None:
        return hit
    vals = trace.valuations
    n = len(vals)
    loop = trace.loop
    last = n - 1

    def succ(p):
        return p + 1 if p < last else loop

    op = f.op
    if op == "true":
        out = [True] * n
    elif op == "false":
        out = [False] * n
    elif op == "atom":
        out = [f.name in v for v in vals]
    elif op == "not":
        out = [not x for x in _truth_table(trace, f.args[0], memo)]
    elif op in ("and", "or", "implies"):
        a = _truth_table(trace, f.args[0], memo)
        b = _truth_table(trace, f.args[1], memo)
        if op == "and":
            out = [x and y for x, y in zip(a, b)]
        elif op == "or":
            out = [x or y for x, y in zip(a, b)]
        else:
            out = [(not x) or y for x, y in zip(a, b)]
    elif op in ("X", "Y"):
        a = _truth_table(trace, f.args[0], memo)
        out = []
        for p in range(n):
            nxt = succ(p)
            if nxt is None:
                out.append(op == "Y")
            else:
                out.append(a[nxt])
    else:
        # F, G, U, W as fixpoints of  v[p] = now[p] or (keep[p] and v[succ p])
        if op == "F":
            now, keep, start = _truth_table(trace, f.args[0], memo), [True] * n, False
        elif op == "G":
            a = _truth_table(trace, f.args[0], memo)
            now, keep, start = [False] * n, a, True
        elif op == "U":
            keep, now, start = _truth_table(trace, f.args[0], memo), _truth_table(trace, f.args[1], memo), False
        else:
            keep, now, start = _truth_table(trace, f.args[0], memo), _truth_table(trace, f.args[1], memo), True
        out = [start] * n
        changed = True
        while changed:
            changed = False
            for p in range(last, -1, -1):
                nxt = succ(p)
                if nxt is None:
                    # the suffix of length 0: F/U need now, G/W need keep or now
                    val = now[p] or (keep[p] and op in ("G", "W"))
                else:
                    val = now[p] or (keep[p] and out[nxt])
                if val != out[p]:
                    out[p] = val
                    changed = True
    memo[f] = out
    return out


def evaluate(trace: Trace, f: Formula, position: int = 0) -> bool:
    """Truth of ``f`` on the suffix of ``trace`` starting at ``position``."""
    return _truth_table(trace, f, {})[position]


eval_formula = evaluate


# -- safety fragment ---------------------------------------------------------

def _is_literal_combination(f: Formula) -> bool:
    if f.op in ("atom", "true", "false"):
        return True
    if f.op == "not":
        return _is_literal_combination(f.args[0])
    if f.op in ("and", "or"):
        return all(_is_literal_combination(a) for a in f.args)
    return False


def is_safety_fragment(f: Formula) -> bool:
    """Membership in p | !p | and | or | Y | G | W; negation and -> may
    apply to propositional subformulas, which push down to literals."""
    op = f.op
    if op in ("atom", "true", "false"):
        return True
    if op == "not":
        return _is_literal_combination(f.args[0])
    if op in ("and", "or", "W"):
        return all(is_safety_fragment(a) for a in f.args)
    if op in ("Y", "G"):
        return is_safety_fragment(f.args[0])
    if op == "implies":
        return _is_literal_combination(f.args[0]) and is_safety_fragment(f.args[1])
    return False


# -- normal forms --------------------------------------------------------------

def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form over true/false, literals, and, or, X, U, R.

    Y, F, G, W, -> are expanded; R is encoded as op "R".
    """
    op = f.op
    if op == "true":
        return FALSE if negate else TRUE
    if op == "false":
        return TRUE if negate else FALSE
    if op == "atom":
        return Not(f) if negate else f
    if op == "not":
        return nnf(f.args[0], not negate)
    if op == "and":
        a, b = nnf(f.args[0], negate), nnf(f.args[1], negate)
        return Or(a, b) if negate else And(a, b)
    if op == "or":
        a, b = nnf(f.args[0], negate), nnf(f.args[1], negate)
        return And(a, b) if negate else Or(a, b)
    if op == "implies":
        return nnf(Or(Not(f.args[0]), f.args[1]), negate)
    if op == "X":
        return X(nnf(f.args[0], negate))
    if op == "Y":
        raise ValueError("Y must be rewritten before normalisation")
    if op == "F":
        return nnf(U(TRUE, f.args[0]), negate)
    if op == "G":
        return nnf(Formula("R", FALSE, f.args[0]), negate)
    if op == "U":
        a, b = nnf(f.args[0], negate), nnf(f.args[1], negate)
        return Formula("R", a, b) if negate else U(a, b)
    if op == "R":
        a, b = nnf(f.args[0], negate), nnf(f.args[1], negate)
        return U(a, b) if negate else Formula("R", a, b)
    if op == "W":
        # a W b == b R (a | b)
        a, b = f.args
        return nnf(Formula("R", b, Or(a, b)), negate)
    raise ValueError("unknown operator %s" % op)


def with_end_marker(f: Formula) -> Formula:
    """Rewrite X and Y so that an infinite path whose tail is marked ``end``
    satisfies the result iff the finite path up to the first ``end`` position
    satisfies ``f``."""
    op = f.op
    if op in ("true", "false", "atom"):
        return f
    args = [with_end_marker(a) for a in f.args]
    end = Atom(END)
    if op == "X":
        return And(Not(end), X(args[0]))
    if op == "Y":
        return Or(end, X(args[0]))
    return Formula(op, *args)


# -- translation formulas ------------------------------------------------------

def build_WF(tasks: Iterable[str]) -> Formula:
    return conj(G(Implies(G(Atom(en_task(T))), F(Atom(oc_task(T))))) for T in tasks)


def build_SF(tasks: Iterable[str]) -> Formula:
    return conj(G(Implies(G(F(Atom(en_task(T)))), F(Atom(oc_task(T))))) for T in tasks)


def build_J(lts, B: Iterable[str] = ()) -> Formula:
    B = set(B)
    return conj(G(Implies(Atom(en_tr(t.id)), F(Atom(interfere(t.id)))))
                for t in lts.transitions if t.label not in B)


def transform_Q(f: Formula) -> Formula:
    op = f.op
    if op in ("true", "false", "atom"):
        return f
    if op == "X":
        q = transform_Q(f.args[0])
        tr = Atom(TR)
        return And(Implies(tr, X(And(Not(tr), q))), Implies(Not(tr), X(And(tr, q))))
    if op == "Y":
        return Not(transform_Q(X(Not(f.args[0]))))
    return Formula(op, *[transform_Q(a) for a in f.args])


def formula_Z() -> Formula:
    tr = Atom(TR)
    return And(G(Implies(tr, Or(G(tr), X(Not(tr))))),
               G(Implies(Not(tr), Or(G(Not(tr)), X(tr)))))
