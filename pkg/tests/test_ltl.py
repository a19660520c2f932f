import random

import pytest

from rtlcheck.checker import standard_check
from rtlcheck.kripke import END, TR, KripkeStructure, Trace
from rtlcheck.ltl import (
    FALSE, TRUE, Atom, F, Formula, FormulaSyntaxError, G, Implies, Not, U, W, X, Y, And, Or,
    build_J, build_SF, build_WF, conjuncts, evaluate, formula_Z, is_safety_fragment, parse_formula,
    to_text, transform_Q, with_end_marker,
)
from tests.generators import random_formula, random_trace

p, q = Atom("p"), Atom("q")


def tr(*vals, loop=None):
    return Trace(tuple(frozenset(v.split()) for v in vals), loop)


def test_last_position_of_a_finite_path():
    t = tr("p")
    assert not evaluate(t, X(p))
    assert evaluate(t, Y(p))
    assert evaluate(t, Y(FALSE))


def test_until_is_satisfied_immediately():
    assert evaluate(tr("p", "", loop=1), U(p, p))


def test_beer_alternation():
    a, b, c = Atom("A"), Atom("B"), Atom("C")
    t = tr("A", "C", loop=0)
    assert evaluate(t, G(Implies(a, F(Not(a)))))
    assert not evaluate(t, F(b))
    assert evaluate(t, G(Or(a, c)))


def test_weak_until_on_finite_paths():
    assert evaluate(tr("p", "p"), W(p, q))
    assert not evaluate(tr("p", "p"), U(p, q))
    assert not evaluate(tr("p", ""), W(p, q))


@pytest.mark.parametrize("text", [
    "G (ec_A -> (!ec_B W lc_A))",
    "F ln_1 & G (en_1 -> F ln_1)",
    "Y p | X !q",
    "p U (q W p)",
    '"en[label:a]" -> F "oc[label:a]"',
    "'a & !'b",
])
def test_text_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(to_text(f)) == f


def test_syntax_errors():
    for bad in ("p &", "(p", "p q", "G"):
        with pytest.raises(FormulaSyntaxError):
            parse_formula(bad)


def test_random_text_round_trip():
    rng = random.Random(5)
    for _ in range(300):
        f = random_formula(rng, ["a", "b", "'c"], 3)
        assert parse_formula(to_text(f)) == f


def test_safety_fragment_recognition():
    assert is_safety_fragment(parse_formula("G (ec_i -> (!ec_j W lc_i))"))
    assert not is_safety_fragment(F(p))
    assert not is_safety_fragment(parse_formula("G (G en -> F oc)"))
    assert not is_safety_fragment(X(p))


def test_builders(ltsc):
    assert build_WF([]) == TRUE
    assert len(conjuncts(build_WF(["bart"]))) == 1
    assert len(conjuncts(build_SF(["x", "y"]))) == 2
    lts = ltsc("ex43")
    assert len(lts.out[lts.initial]) == 5
    assert len(conjuncts(build_J(lts))) == len(lts.transitions)


def test_J_formula_skips_blocked_transitions(ltsc):
    lts = ltsc("fs-F0")
    blocked = {"r1", "r2"}
    n = sum(t.label not in blocked for t in lts.transitions)
    assert len(conjuncts(build_J(lts, blocked))) == n


def test_Q_transform():
    assert transform_Q(p) == p
    assert transform_Q(G(p)) == G(p)
    t = Atom(TR)
    assert transform_Q(X(p)) == And(Implies(t, X(And(Not(t), p))), Implies(Not(t), X(And(t, p))))
    assert "Y" not in to_text(transform_Q(Y(p)))


def test_Z_accepts_alternation():
    alt = tr("", "tr", "", "tr", loop=0)
    assert evaluate(alt, formula_Z())
    assert not evaluate(tr("", "", "tr", loop=1), formula_Z())


def test_end_marker_reproduces_finite_semantics():
    rng = random.Random(11)
    for _ in range(300):
        f = random_formula(rng, ["a", "b"], 3)
        t = random_trace(rng, ["a", "b"], infinite=False)
        # the last position, marked, repeated forever
        n = len(t.valuations)
        marked = Trace(t.valuations[:-1] + (t.valuations[-1] | {END},), n - 1)
        assert evaluate(t, f) == evaluate(marked, with_end_marker(f)), to_text(f)


# -- duality laws -----------------------------------------------------------------

def test_dualities_on_random_paths():
    rng = random.Random(3)
    for _ in range(500):
        a = random_formula(rng, ["a", "b"], 2)
        b = random_formula(rng, ["a", "b"], 2)
        t = random_trace(rng, ["a", "b"])
        assert evaluate(t, Y(a)) == evaluate(t, Not(X(Not(a))))
        assert evaluate(t, F(a)) == evaluate(t, Not(G(Not(a))))
        assert evaluate(t, W(a, b)) == evaluate(t, Or(U(a, b), G(a)))
        assert evaluate(t, Not(U(a, b))) == evaluate(t, W(Not(b), And(Not(a), Not(b))))
        assert evaluate(t, G(a)) == evaluate(t, W(a, FALSE))


# -- the automaton agrees with direct evaluation -----------------------------------

def _no_Y(f: Formula) -> Formula:
    args = [_no_Y(a) for a in f.args]
    if f.op == "Y":
        return Not(X(Not(args[0])))
    return Formula(f.op, *args, name=f.name) if f.op == "atom" else Formula(f.op, *args)


def _lasso_structure(t: Trace) -> KripkeStructure:
    k = KripkeStructure()
    for i, v in enumerate(t.valuations):
        k.add_node(("s", i), v)
    for i in range(len(t.valuations) - 1):
        k.succ[i].append((i + 1, None))
    k.succ[-1].append((t.loop, None))
    return k


def test_tableau_matches_evaluation_on_lassos():
    rng = random.Random(7)
    for _ in range(400):
        f = _no_Y(random_formula(rng, ["a", "b"], 3))
        t = random_trace(rng, ["a", "b"], infinite=True)
        holds, witness = standard_check(_lasso_structure(t), f)
        assert holds == evaluate(t, f), to_text(f)
