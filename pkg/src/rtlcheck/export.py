"""DOT and JSON renderings of LTSCs, Kripke structures, nets and verdicts."""

from __future__ import annotations

import json
from typing import Dict, Iterable, Optional

from .kripke import KripkeStructure, Lasso, LtsPath
from .ltl import to_text
from .petri import PetriNet
from .semantics import Ltsc, mark_spurious

SCHEMA_VERSION = 1


def _q(text: str) -> str:
    return '"%s"' % str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def ltsc_to_dot(lts: Ltsc, E: Optional[Iterable[str]] = None, name: str = "ltsc",
                state_labels: bool = False) -> str:
    """Spurious time-outs are dotted; those spurious only for ``E`` are dashed."""
    dotted = lts.spurious_any
    dashed = mark_spurious(lts, E) - dotted if E is not None else set()
    lines = ["digraph %s {" % _q(name), "\trankdir=LR;", "\tnode [shape=circle];"]
    for s in range(len(lts.states)):
        label = lts.state_name(s) if state_labels else str(s)
        attrs = ["label=%s" % _q(label)]
        if s == lts.initial:
            attrs.append("penwidth=2")
        lines.append("\ts%d [%s];" % (s, ", ".join(attrs)))
    for tr in lts.transitions:
        attrs = ["label=%s" % _q(tr.label)]
        if tr.id in dotted:
            attrs.append("style=dotted")
        elif tr.id in dashed:
            attrs.append("style=dashed")
        lines.append("\ts%d -> s%d [%s];" % (tr.source, tr.target, ", ".join(attrs)))
    lines.append("}")
    return "\n".join(lines) + "\n"


def ltsc_to_json(lts: Ltsc, E: Optional[Iterable[str]] = None) -> Dict:
    n = len(lts.transitions)
    return {
        "schema": SCHEMA_VERSION,
        "initial": lts.initial,
        "states": [lts.state_name(s) for s in range(len(lts.states))],
        "transitions": [
            {"id": tr.id, "source": tr.source, "label": tr.label, "target": tr.target,
             "components": sorted(tr.components), "tags": sorted(tr.tags)}
            for tr in lts.transitions
        ],
        "concurrent": [[t, u] for t in range(n) for u in range(n) if lts.concurrent(t, u)],
        "spurious": sorted(lts.spurious_any),
        "spurious_E": sorted(mark_spurious(lts, E)) if E is not None else None,
    }


def kripke_to_dot(k: KripkeStructure, name: str = "kripke") -> str:
    lines = ["digraph %s {" % _q(name), "\tnode [shape=box];"]
    for node in range(len(k)):
        props = ", ".join(sorted(k.valuation[node]))
        shape = "" if k.kind[node][0] == "s" else ", style=rounded"
        lines.append("\tk%d [label=%s%s];" % (node, _q("%s\n{%s}" % (k.name(node), props)), shape))
    for node in range(len(k)):
        for dst, _ in k.succ[node]:
            lines.append("\tk%d -> k%d;" % (node, dst))
    lines.append("}")
    return "\n".join(lines) + "\n"


def net_to_dot(net: PetriNet) -> str:
    """Places are circles, transitions boxes; read arcs are drawn without arrow heads."""
    lines = ["digraph %s {" % _q(net.name), "\trankdir=TB;"]
    for p in net.places:
        tokens = net.initial[p]
        label = p if not tokens else "%s\n%s" % (p, "*" * tokens if tokens < 4 else str(tokens))
        lines.append("\tp_%s [shape=circle, label=%s];" % (p, _q(label)))
    for t in net.transitions:
        lines.append("\tt_%s [shape=box, label=%s];" % (t, _q("%s\n%s" % (t, net.labels[t]))))
    for t in net.transitions:
        for p, k in net.pre[t].items():
            lines.append("\tp_%s -> t_%s%s;" % (p, t, "" if k == 1 else " [label=%d]" % k))
        for p, k in net.post[t].items():
            lines.append("\tt_%s -> p_%s%s;" % (t, p, "" if k == 1 else " [label=%d]" % k))
        for p in net.read[t]:
            lines.append("\tp_%s -> t_%s [dir=none];" % (p, t))
    lines.append("}")
    return "\n".join(lines) + "\n"


def path_to_json(lts: Ltsc, path) -> Optional[Dict]:
    if path is None:
        return None

    def steps(tids):
        return [{"id": t, "source": lts.transitions[t].source, "label": lts.transitions[t].label,
                 "target": lts.transitions[t].target} for t in tids]

    if isinstance(path, LtsPath):
        return {"kind": "finite", "start": path.start, "steps": steps(path.transitions)}
    return {"kind": "lasso", "start": path.start, "stem": steps(path.stem), "cycle": steps(path.cycle)}


def path_from_json(data: Optional[Dict]):
    if data is None:
        return None
    ids = lambda xs: tuple(x["id"] for x in xs)
    if data["kind"] == "finite":
        return LtsPath(data["start"], ids(data["steps"]))
    return Lasso(data["start"], ids(data["stem"]), ids(data["cycle"]))


def path_to_text(lts: Ltsc, path) -> str:
    if path is None:
        return ""
    if isinstance(path, LtsPath):
        labels = [lts.transitions[t].label for t in path.transitions]
        return "finite: " + (" ".join(labels) if labels else "(empty)")
    stem = " ".join(lts.transitions[t].label for t in path.stem)
    cycle = " ".join(lts.transitions[t].label for t in path.cycle)
    return "lasso: %s ( %s )^w" % (stem or "(empty)", cycle)


def verdict_record(name: str, judgement, verdict) -> Dict:
    j = judgement
    stats = {k: v for k, v in verdict.stats.items() if k != "seconds"}
    return {
        "judgement": {
            "requirement": name,
            "formula": to_text(j.formula),
            "criterion": str(j.criterion),
            "B": sorted(j.B),
            "E": None if j.E is None else sorted(j.E),
        },
        "holds": verdict.holds,
        "counterexample": path_to_json(j.model, verdict.counterexample),
        "stats": stats,
    }


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
