import json

import pydot
import pytest
from click.testing import CliRunner

from rtlcheck.checker import Criterion, Judgement, revalidate
from rtlcheck.cli import main
from rtlcheck.export import path_from_json
from rtlcheck.ltl import parse_formula


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_explore_summary():
    r = run("explore", "builtin:beer-D")
    assert r.exit_code == 0
    assert "4 states, 9 transitions" in r.output


def test_explore_json_with_closure():
    r = run("explore", "builtin:ex43", "--format", "json", "--closure")
    data = json.loads(r.output)
    assert data["closure_violations"] == []
    assert len(data["transitions"]) == 18


def test_exit_status_follows_the_verdict():
    assert run("check", "builtin:bart-E", "--formula", "F b").exit_code == 0
    assert run("check", "builtin:beer-D", "--formula", "F b").exit_code == 1
    assert run("check", "builtin:beer-D", "--formula", "F b", "--cc", "wf", "--tasks", "label:b").exit_code == 0


@pytest.mark.parametrize("args", [
    ("check", "builtin:nothing", "--formula", "F b"),
    ("check", "builtin:beer-D", "--formula", "F ("),
    ("check", "builtin:beer-D", "--formula", "F b", "--B", "a", "--E", "b"),
    ("check", "builtin:beer-D"),
    ("explore", "builtin:peterson-ccs", "--bound", "5"),
])
def test_errors_exit_with_status_2(args):
    r = run(*args)
    assert r.exit_code == 2
    assert "error:" in r.output


def test_source_files_are_accepted(tmp_path):
    src = tmp_path / "loop.ccst"
    src.write_text("A = a.A;\nmain = A;\n")
    assert run("check", str(src), "--formula", "G F a").exit_code == 0
    src.write_text("main = a.;\n")
    assert run("explore", str(src)).exit_code == 2


def test_peterson_starvation_under_justness_goes_through_l2_m4():
    r = run("check", "builtin:peterson-ccs", "--req", "ME3", "--i", "A", "--cc", "J", "--format", "json")
    assert r.exit_code == 1
    (res,) = json.loads(r.output)["results"]
    assert not res["holds"] and res["counterexample"]["kind"] == "lasso"


def test_peterson_with_timeouts_passes_the_progress_suite():
    r = run("check", "builtin:peterson-ccst", "--suite", "ME", "--cc", "Pr")
    assert r.exit_code == 1  # ME6 needs justness
    lines = [ln.split() for ln in r.output.splitlines() if not ln.startswith(" ")]
    for name, verdict, _ in lines:
        assert verdict == ("FAIL" if name.startswith("ME6") else "PASS"), name


def test_json_reports_are_deterministic():
    args = ("check", "builtin:fs-F1F2", "--suite", "FS", "--cc", "j", "--format", "json")
    first, second = run(*args), run(*args)
    assert first.output == second.output
    names = [r["judgement"]["requirement"] for r in json.loads(first.output)["results"]]
    assert "FS3(1)" in names and "FS4(1)" in names


def test_json_counterexamples_replay(ltsc):
    r = run("check", "builtin:fs-F1F2", "--suite", "FS", "--cc", "j", "--format", "json")
    lts = ltsc("fs-F1F2")
    failures = 0
    for res in json.loads(r.output)["results"]:
        jd = res["judgement"]
        if res["holds"] or jd["formula"] is None:
            continue
        failures += 1
        j = Judgement(lts, parse_formula(jd["formula"]), Criterion(jd["criterion"]), frozenset(jd["B"]),
                      None if jd["E"] is None else frozenset(jd["E"]))
        assert revalidate(j, path_from_json(res["counterexample"]))
    assert failures


def test_classify():
    r = run("classify", "builtin:gatekeeper-fs", "--format", "json")
    assert json.loads(r.output) == {"model": "gatekeeper-fs", "role": "fs", "request": "wf", "granting": "pr"}


def _edges(dot):
    (g,) = pydot.graph_from_dot_data(dot)
    return g.get_edges()


def test_net_dot_export_shows_read_arcs_only_when_present():
    plain = run("export", "builtin:peterson-petri", "--dot")
    reads = run("export", "builtin:peterson-petri-read-arcs", "--dot")
    assert plain.exit_code == reads.exit_code == 0
    assert not any(e.get("dir") == "none" for e in _edges(plain.output))
    assert any(e.get("dir") == "none" for e in _edges(reads.output))


def test_lts_dot_export_parses():
    r = run("export", "builtin:vending", "--format", "dot", "--what", "lts")
    assert len(_edges(r.output)) == 2


def test_source_export_round_trips():
    r = run("export", "builtin:gatekeeper-fs", "--format", "source")
    assert "X" in r.output and r.exit_code == 0
