import pytest
from hypothesis import given, settings, strategies as st

from rtlcheck.syntax import (
    NIL, Definitions, GuardedChoice, Identifier, Parallel, ParseError, Summand, ValidationError,
    complement, is_visible, parse, parse_process, prefix, pretty_definitions, relabel, restrict,
)
from rtlcheck.models.catalog import asset_text, names


def test_simple_definition_maps_to_terms():
    defs, root = parse("A = a.A;  main = A | 'a.0")
    assert root == Parallel(Identifier("A"), GuardedChoice((Summand("'a", None, NIL),)))
    assert defs.defs["A"] == prefix("a", Identifier("A"))


def test_empty_process_is_nil():
    assert parse_process("") == NIL
    assert parse_process("0") == NIL


def test_complement_swaps_names_and_conames():
    assert complement("a") == "'a"
    assert complement("'a") == "a"
    for bad in ("tau", "t"):
        with pytest.raises(ValueError):
            complement(bad)
    assert not is_visible("tau") and not is_visible("t")


def test_unbound_identifier_is_named():
    with pytest.raises(ValidationError, match="Y"):
        parse("main = a.Y;")


def test_relabelling_tau_is_rejected():
    with pytest.raises(ParseError):
        parse("main = a.0[tau->b];")


def test_reserved_words_cannot_be_identifiers():
    with pytest.raises(ParseError):
        parse("t = a.0; main = t;")


def test_signals_must_be_register_self_loops():
    ok = "signals s; R = 's.R + w.R; main = R | s.0;"
    parse(ok)
    with pytest.raises(ValidationError):
        parse("signals s; R = 's.0; main = R;")


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError, match=r"^2:"):
        parse("A = a.A;\nmain = A |;")


@pytest.mark.parametrize("name", [n for n in names() if not n.startswith("peterson-petri")])
def test_assets_round_trip(name):
    defs, root = parse(asset_text(name))
    assert parse(pretty_definitions(defs, root)) == (defs, root)


def test_peterson_registers_use_two_identifiers_per_boolean():
    defs, _ = parse(asset_text("peterson-ccs"))
    for var in ("readyA", "readyB"):
        assert {"%s_true" % var, "%s_false" % var} <= set(defs.defs)


# -- generated terms -----------------------------------------------------------

IDS = ("P", "Q")
labels = st.sampled_from(["a", "b", "'a", "'b", "tau", "t", "c"])
tags = st.one_of(st.none(), st.sampled_from(["x", "y"]))


def processes(leaf):
    def extend(inner):
        return st.one_of(
            st.builds(lambda l, g, c: prefix(l, c, g), labels, tags, inner),
            st.lists(st.builds(lambda l, c: prefix(l, c), labels, inner), min_size=2, max_size=3)
              .map(lambda ps: GuardedChoice(tuple(s for p in ps for s in p.summands))),
            st.builds(Parallel, inner, inner),
            st.builds(lambda p, ns: restrict(p, ns), inner, st.sets(st.sampled_from(["a", "b"]), min_size=1)),
            st.builds(lambda p: relabel(p, {"a": "b"}), inner),
        )
    return st.recursive(leaf, extend, max_leaves=6)


terms = processes(st.one_of(st.just(NIL), st.sampled_from([Identifier(i) for i in IDS])))


@settings(max_examples=150, deadline=None)
@given(terms, terms, terms)
def test_pretty_parse_round_trip(p, q, root):
    defs = Definitions({"P": prefix("a", p), "Q": prefix("b", q)})
    assert parse(pretty_definitions(defs, root)) == (defs, root)
