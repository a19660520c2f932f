from rtlcheck.kripke import (
    TR, KPath, Lasso, LtsPath, default_tasks, embed_infinite, en_task, instrument, interfere,
    lts_to_kripke,
)
from rtlcheck.semantics import ltsc_from_edges


def test_vending_machine_gets_two_halfway_states(ltsc):
    lts = ltsc("vending")
    k = lts_to_kripke(lts)
    assert len(k) == 4
    halfway = sorted(k.valuation[n] for n in k.halfway_node.values())
    assert halfway == [frozenset({"c"}), frozenset({"p"})]
    assert all(k.valuation[n] == frozenset() for n in k.state_node.values())


def test_tau_only_lts_is_isomorphic():
    lts = ltsc_from_edges(3, [(0, "tau", 1), (1, "tau", 2), (2, "tau", 0)])
    k = lts_to_kripke(lts)
    assert len(k) == 3
    assert all(v == frozenset() for v in k.valuation)
    assert sorted((a, b) for a in range(3) for b, _ in k.succ[a]) == [(0, 1), (1, 2), (2, 0)]


def test_full_translation_adds_halfway_states_for_tau():
    lts = ltsc_from_edges(2, [(0, "tau", 1)])
    assert len(lts_to_kripke(lts, full=True)) == 3


def test_beer_structure(ltsc):
    lts = ltsc("beer-D")
    assert (len(lts.states), len(lts.transitions)) == (4, 9)
    assert len(lts_to_kripke(lts)) == 4 + 9


def test_instrument_single_state_gets_a_self_loop():
    k = instrument(ltsc_from_edges(1, []))
    assert len(k) == 1
    assert k.succ[0] == [(0, None)]
    assert TR not in k.valuation[0]


def test_halfway_states_carry_tr_and_self_loops(ltsc):
    k = instrument(ltsc("ex43"))
    for n in range(len(k)):
        assert (n, None) in k.succ[n]
        assert (TR in k.valuation[n]) == (k.kind[n][0] == "h")


def test_interference_markers(ltsc):
    lts = ltsc("ex43")
    k = instrument(lts)
    n = len(lts.transitions)
    for t in range(n):
        val = k.valuation[k.halfway_node[t]]
        for u in range(n):
            assert (interfere(u) in val) == (not lts.concurrent(u, t))


def test_bart_task_is_enabled_except_right_after_bart(ltsc):
    lts = ltsc("beer-D")
    bart = frozenset(t.id for t in lts.transitions if t.label == "b")
    k = instrument(lts, tasks={"bart": bart})
    after_bart = {lts.transitions[t].target for t in bart}
    for s, node in k.state_node.items():
        assert (en_task("bart") in k.valuation[node]) == (s not in after_bart)


def test_blocked_actions_do_not_enable(ltsc):
    lts = ltsc("beer-D")
    k = instrument(lts, B={"b"}, tasks={"bart": [t.id for t in lts.transitions if t.label == "b"]})
    assert not any(en_task("bart") in k.valuation[n] for n in k.state_node.values())


def test_default_tasks_cover_labels_and_tags(ltsc):
    tasks = default_tasks(ltsc("peterson-ccs"))
    assert "label:ln_A" in tasks and "tag:l2" in tasks


def test_embedding_of_finite_paths():
    assert embed_infinite(KPath((3,))) == KPath((3,), 0)
    assert embed_infinite(KPath((0, 1, 2))) == KPath((0, 1, 2), 2)
    lasso = KPath((0, 1), 0)
    assert embed_infinite(lasso) is lasso


def test_path_of_maps_lts_paths(ltsc):
    lts = ltsc("vending")
    k = lts_to_kripke(lts)
    p = k.path_of(lts, LtsPath(0, (0,)))
    assert [k.kind[n][0] for n in p.nodes] == ["s", "h", "s"] and p.loop is None
    loop = k.path_of(lts, Lasso(0, (), (0, 1)))
    assert len(loop.nodes) == 4 and loop.loop == 0
