import pytest

from rtlcheck.checker import (
    J, PR, SF, TOP, WF, Criterion, Judgement, check_counting_FS3, classify_hierarchy,
    complete_paths_semantics, is_b_deadlock, oracle_check, revalidate, select_tasks, translation_oracle,
    weakest_criterion,
)
from rtlcheck.kripke import LtsPath
from rtlcheck.ltl import TRUE, G, F, parse_formula
from rtlcheck.models.requirements import requirement
from rtlcheck.semantics import explore, ltsc_from_edges
from rtlcheck.syntax import parse

FB = parse_formula("F b")


def check(lts, formula, cc=PR, B=(), E=None):
    j = Judgement(lts, formula, cc, frozenset(B), E)
    v = complete_paths_semantics(j)
    if not v.holds:
        assert revalidate(j, v.counterexample)
    return v


def test_beer_verdicts(ltsc):
    d = ltsc("beer-D")
    bart = Criterion("wf").with_tasks(select_tasks(d, ["label:b"]))
    assert not check(d, FB)
    assert check(d, FB, bart)
    assert not check(d, FB, J)
    assert check(ltsc("bart-E"), FB)
    assert not check(ltsc("bars-F"), FB)
    assert check(ltsc("bars-F"), FB, J)


def test_criterion_names():
    assert Criterion.parse(" WF ") == WF
    with pytest.raises(ValueError):
        Criterion("fast")


def test_E_must_contain_B(ltsc):
    with pytest.raises(ValueError):
        Judgement(ltsc("beer-D"), FB, PR, frozenset({"a"}), frozenset())


def test_deadlock_respects_blocking():
    lts = ltsc_from_edges(2, [(0, "a", 1)])
    assert not is_b_deadlock(lts, 0, ())
    assert is_b_deadlock(lts, 0, {"a"})
    assert is_b_deadlock(lts, 1, ())


def test_single_state_with_nothing_to_do():
    lts = ltsc_from_edges(1, [])
    assert check(lts, G(TRUE))
    assert not check(lts, F(parse_formula("a")))


def test_tau_loop_satisfies_always_true():
    lts = ltsc_from_edges(1, [(0, "tau", 0)])
    for cc in (TOP, PR, J, WF, SF):
        assert check(lts, G(TRUE), cc)


def test_sequential_scheduler_counterexample_is_finite(ltsc):
    lts = ltsc("fs-sequential")
    assert check(lts, parse_formula("G (r1 -> F t1)"))
    r = requirement("FS2", "1")
    v = check(lts, r.formula, PR, r.B)
    assert not v and isinstance(v.counterexample, LtsPath)


@pytest.mark.parametrize("name", ["beer-D", "bars-F", "ex43", "fs-F0", "fs-E1GE2", "me-W"])
def test_verdicts_are_monotone_in_the_criterion(ltsc, name):
    lts = ltsc(name)
    for text in ("F b", "G F a", "F ln_1", "G (r1 -> F t1)", "G F 'a"):
        f = parse_formula(text)
        got = {cc.kind: check(lts, f, cc).holds for cc in (TOP, PR, J, WF, SF)}
        for weak, strong in (("top", "pr"), ("pr", "j"), ("pr", "wf"), ("wf", "sf")):
            assert not got[weak] or got[strong], (text, got)


def test_counterexamples_revalidate_across_models(ltsc):
    seen = 0
    for name in ("fs-F1F2", "fs-E1GE2", "fs-E1E2", "fs-F0"):
        lts = ltsc(name)
        for req in ("FS1", "FS2", "FS4"):
            for cc in (PR, J):
                r = requirement(req, "1")
                j = Judgement(lts, r.formula, cc, r.B)
                v = complete_paths_semantics(j)
                if not v.holds:
                    seen += 1
                    assert revalidate(j, v.counterexample)
    assert seen > 0


def test_counting_fs3(ltsc):
    assert check_counting_FS3(ltsc("fs-F1F2"), "r1", "t1")
    bad = explore(*parse("main = t1.0;"))
    v = check_counting_FS3(bad, "r1", "t1")
    assert not v and [bad.transitions[t].label for t in v.counterexample.transitions] == ["t1"]
    assert check_counting_FS3(ltsc("fs-E1E2"), "r1", "t1")


def test_counting_needs_a_positive_cap(ltsc):
    with pytest.raises(ValueError):
        check_counting_FS3(ltsc("fs-F0"), "r1", "t1", cap=0)


def test_weakest_criterion_of_nothing_is_progress():
    assert weakest_criterion([]) == "pr"


def test_classify_fair_schedulers(ltsc):
    assert classify_hierarchy(ltsc("gatekeeper-fs"), "fs") == {"request": "wf", "granting": "pr"}
    assert classify_hierarchy(ltsc("fs-F0"), "fs") == {"request": "sf", "granting": "pr"}


def test_classify_encapsulated_gatekeeper(ltsc):
    assert classify_hierarchy(ltsc("gatekeeper-encapsulated"), "me") == {"request": "j", "granting": "wf"}


def test_classify_rejects_unknown_roles(ltsc):
    with pytest.raises(ValueError):
        classify_hierarchy(ltsc("beer-D"), "beer")



def test_oracle_combines_cycles_through_one_state(ltsc):
    # a fair run of bars-F must alternate the a and c self-loops
    lts = ltsc("bars-F")
    j = Judgement(lts, parse_formula("G F b"), WF)
    v = complete_paths_semantics(j)
    o = oracle_check(j, 2, 2)
    assert not v.holds and not o.holds and o.exhaustive
    assert revalidate(j, o.counterexample)


def test_translation_needs_paths_to_leave_halfway_states():
    lts = ltsc_from_edges(3, [(0, "a", 1), (1, "b", 2)])
    j = Judgement(lts, FB, PR, kripke="full")
    assert complete_paths_semantics(j).holds
    assert translation_oracle(j).holds
    # stalling inside the a-transition satisfies the unguarded premise
    assert not translation_oracle(j, literal=True).holds
