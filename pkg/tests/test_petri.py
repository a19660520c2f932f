import pytest
from hypothesis import given, strategies as st

from rtlcheck.petri import (
    FireDisabled, Marking, check_structural_conflict, format_net, net_to_ltsc, parse_net,
)
from rtlcheck.models.catalog import builtin

markings = st.dictionaries(st.sampled_from("pqrs"), st.integers(0, 3)).map(Marking)


@given(markings, markings)
def test_sum_then_difference_restores(a, b):
    assert (a + b) - b == a


@given(markings, markings, markings)
def test_sum_is_commutative_and_associative(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


@given(markings, markings)
def test_order_and_meet(a, b):
    assert a <= a + b
    assert (a & b) <= a and (a & b) <= b
    assert (a <= b and b <= a) == (a == b)


def test_zero_counts_vanish():
    assert Marking({"p": 0}) == Marking()
    with pytest.raises(ValueError):
        Marking({"p": -1})


def _tiny(read=False):
    src = "place s\nplace r 1\ntrans t : a\narc s -> t\n" + ("read r -- t\n" if read else "")
    return parse_net(src)


def test_transition_without_tokens_is_disabled():
    net = _tiny()
    assert not net.enabled(net.initial, "t")
    with pytest.raises(FireDisabled):
        net.fire(net.initial, "t")


def test_every_transition_needs_a_preplace():
    with pytest.raises(ValueError):
        parse_net("place p 1\ntrans t : a\narc t -> p\n")


def test_read_place_cannot_also_be_input():
    with pytest.raises(ValueError):
        parse_net("place p 1\ntrans t : a\narc p -> t\nread p -- t\n")


def test_peterson_initial_marking_enables_only_ln():
    for name in ("peterson-petri", "peterson-petri-read-arcs"):
        net = builtin(name)
        assert sorted(net.enabled_transitions(net.initial)) == ["ln_A", "ln_B"]


def test_firing_a_read_arc_transition_keeps_the_token():
    net = builtin("peterson-petri-read-arcs")
    states, edges = net.reachable()
    src = next(states[s] for s, t, _ in edges if t == "m4_A")
    after = net.fire(src, "m4_A")
    assert src["readyA_f"] == after["readyA_f"] == 1
    assert after == (src - net.pre["m4_A"]) + net.post["m4_A"]


def _interferes(lts, t_name, u_name):
    """True when some u-transition interferes with some t-transition."""
    ts = [i for i, n in enumerate(lts.net_transition) if n == t_name]
    us = [i for i, n in enumerate(lts.net_transition) if n == u_name]
    return any(not lts.concurrent(t, u) for t in ts for u in us)


def test_l2_and_m4_compete_without_read_arcs():
    lts = net_to_ltsc(builtin("peterson-petri"))
    assert _interferes(lts, "l2", "m4_A") and _interferes(lts, "m4_A", "l2")


def test_read_arcs_give_asymmetric_concurrency():
    lts = net_to_ltsc(builtin("peterson-petri-read-arcs"))
    assert not _interferes(lts, "l2", "m4_A")
    assert _interferes(lts, "m4_A", "l2")
    assert not _interferes(lts, "m2", "l4_B")


def test_disjoint_transitions_are_concurrent_both_ways():
    net = parse_net("place p 1\nplace q 1\ntrans t : a\ntrans u : b\narc p -> t\narc q -> u\n")
    lts = net_to_ltsc(net)
    assert lts.concurrent(0, 1) and lts.concurrent(1, 0)


@pytest.mark.parametrize("name", ["peterson-petri", "peterson-petri-read-arcs"])
def test_peterson_nets_are_structural_conflict_nets(name):
    assert check_structural_conflict(builtin(name))


def test_shared_marked_place_breaks_structural_conflict():
    net = parse_net("place s 2\ntrans t : a\ntrans u : b\narc s -> t\narc s -> u\n")
    assert not check_structural_conflict(net)


def test_loops_and_read_arcs_have_the_same_marking_graph():
    with_reads = builtin("peterson-petri-read-arcs")
    with_loops = with_reads.without_read_arcs()
    assert with_reads.reachable() == with_loops.reachable()
    plain = builtin("peterson-petri")
    assert plain.reachable() == with_loops.reachable()


def test_net_text_round_trip():
    net = builtin("peterson-petri-read-arcs")
    again = parse_net(format_net(net), net.name)
    assert again == net
