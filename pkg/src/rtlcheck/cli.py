"""Command-line front end: explore, check, classify, export."""

from __future__ import annotations

import sys
from typing import List, Optional, Tuple

import click

from . import export
from .checker import (
    Criterion, Judgement, ModelTooLarge, check_counting_FS3, classify_hierarchy,
    complete_paths_semantics, select_tasks,
)
from .kripke import lts_to_kripke
from .ltl import FormulaSyntaxError, parse_formula
from .models.catalog import load_source, to_ltsc
from .models.requirements import (
    RequirementSpec, fs_suite, me_indices_of, me_suite, requirement,
)
from .petri import PetriNet, format_net
from .semantics import DEFAULT_BOUND, BoundExceeded, Ltsc, check_closure
from .syntax import ParseError, ValidationError, pretty_definitions

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


def _names(text: Optional[str]) -> Optional[frozenset]:
    if text is None:
        return None
    return frozenset(n.strip() for n in text.split(",") if n.strip())


def _role(lts: Ltsc) -> str:
    labels = lts.labels
    if any(lab.startswith(("ln_", "ec_")) for lab in labels):
        return "me"
    if labels & {"r1", "r2", "t1", "t2"}:
        return "fs"
    return "other"


def _load(spec: str, bound: int) -> Tuple[str, object, Ltsc]:
    name, model = load_source(spec)
    return name, model, to_ltsc(model, bound)


def _fail(message: str) -> None:
    click.echo("error: %s" % message, err=True)
    sys.exit(EXIT_ERROR)


class _Errors(click.Group):
    """Turn model errors into exit status 2 with a one-line diagnostic."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (ParseError, ValidationError, FormulaSyntaxError, BoundExceeded, ModelTooLarge,
                KeyError, ValueError, OSError) as exc:
            _fail(str(exc))


@click.group(cls=_Errors)
@click.version_option(package_name="artifact")
def main():
    """Reactive LTL checking for CCS with time-outs and Petri nets with read arcs."""


input_arg = click.argument("source", metavar="INPUT")
bound_opt = click.option("--bound", type=int, default=DEFAULT_BOUND, show_default=True,
                         help="Maximum number of reachable states.")


@main.command()
@input_arg
@bound_opt
@click.option("--format", "fmt", type=click.Choice(["text", "json", "dot"]), default="text")
@click.option("--E", "E", help="Finitely blockable actions, for marking E-spurious time-outs.")
@click.option("--closure", is_flag=True, help="Also verify the closure property of the concurrency relation.")
def explore(source, bound, fmt, E, closure):
    """Build the LTS with concurrency relation of INPUT."""
    name, _, lts = _load(source, bound)
    E = _names(E)
    if fmt == "json":
        data = export.ltsc_to_json(lts, E)
        if closure:
            data["closure_violations"] = check_closure(lts)
        click.echo(export.dumps(data))
        return
    if fmt == "dot":
        click.echo(export.ltsc_to_dot(lts, E, name), nl=False)
        return
    click.echo("%s: %d states, %d transitions" % (name, len(lts.states), len(lts.transitions)))
    click.echo("labels: %s" % ", ".join(sorted(lts.labels)))
    if lts.spurious_any:
        click.echo("spurious time-outs: %s" % ", ".join(map(str, sorted(lts.spurious_any))))
    if closure:
        bad = check_closure(lts)
        click.echo("closure: %s" % ("ok" if not bad else "%d violations" % len(bad)))


def _judgements(lts: Ltsc, formula, req, i, j, suite, cc: Criterion, B, E) -> List[Tuple[RequirementSpec, object]]:
    """(spec, judgement or counter check) pairs in report order."""
    role = _role(lts)
    if formula is not None:
        specs = [RequirementSpec("formula", parse_formula(formula), B or frozenset(), E)]
    elif req is not None:
        if req.upper().startswith("ME"):
            idx = me_indices_of(lts.labels)
            targets = [i] if i else list(idx)
            specs = []
            for a in targets:
                partners = [j] if j else [b for b in idx if b != a] if req.upper() == "ME2" else [None]
                specs.extend(requirement(req, a, b, indices=idx) for b in partners)
        else:
            specs = [requirement(req, a) for a in ([i] if i else ["1", "2"])]
    elif suite is not None:
        if suite.upper() == "ME":
            specs = me_suite(me_indices_of(lts.labels))
        elif suite.upper() == "FS":
            specs = fs_suite()
        else:
            raise ValueError("unknown suite %r (use ME or FS)" % suite)
    else:
        raise ValueError("give one of --formula, --req or --suite")
    out = []
    for spec in specs:
        b = spec.B if B is None else B
        e = E if E is not None else (spec.E if role == "me" else None)
        if e is not None and not b <= e:
            e = e | b
        out.append((spec, Judgement(lts, spec.formula, cc, b, e)))
    if suite is not None and suite.upper() == "FS":
        for k in ("1", "2"):
            out.append((RequirementSpec("FS3(%s)" % k, None, frozenset()), ("r" + k, "t" + k)))
    return out


@main.command()
@input_arg
@bound_opt
@click.option("--formula", help="An LTL formula, e.g. 'G (ec_A -> F lc_A)'.")
@click.option("--req", help="A requirement name: ME1..ME6, FS1, FS2, FS3', FS4.")
@click.option("--i", "i", help="Process index for --req.")
@click.option("--j", "j", help="Second index for ME2.")
@click.option("--suite", help="Run every requirement of a family: ME or FS.")
@click.option("--cc", type=click.Choice(["top", "pr", "j", "wf", "sf"], case_sensitive=False), default="pr",
              show_default=True, help="Completeness criterion.")
@click.option("--B", "B", help="Blocking actions (comma separated); overrides the requirement's.")
@click.option("--E", "E", help="Finitely blockable actions (comma separated).")
@click.option("--tasks", help="Task set for wf/sf, e.g. 'tag:l2,tag:m2' or 'label:r1'.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def check(source, bound, formula, req, i, j, suite, cc, B, E, tasks, fmt):
    """Decide reactive judgements; exit 0 if all hold, 1 if any fails."""
    name, _, lts = _load(source, bound)
    criterion = Criterion.parse(cc)
    if tasks:
        criterion = criterion.with_tasks(select_tasks(lts, _names(tasks)))
    B, E = _names(B), _names(E)
    if B is not None and E is not None and not B <= E:
        raise ValueError("B must be a subset of E")
    records = []
    all_hold = True
    for spec, jd in _judgements(lts, formula, req, i, j, suite, criterion, B, E):
        if isinstance(jd, tuple):
            verdict = check_counting_FS3(lts, *jd)
            record = {"judgement": {"requirement": spec.name, "formula": None, "criterion": "counter",
                                    "B": [], "E": None},
                      "holds": verdict.holds,
                      "counterexample": export.path_to_json(lts, verdict.counterexample),
                      "stats": verdict.stats}
        else:
            verdict = complete_paths_semantics(jd)
            record = export.verdict_record(spec.name, jd, verdict)
        all_hold &= verdict.holds
        records.append((record, verdict))
    if fmt == "json":
        click.echo(export.dumps({"schema": export.SCHEMA_VERSION, "model": name,
                                 "results": [r for r, _ in records]}))
    else:
        for record, verdict in records:
            jd = record["judgement"]
            click.echo("%-10s %-5s %s" % (jd["requirement"], "PASS" if verdict.holds else "FAIL",
                                          "[%s]" % jd["criterion"]))
            if verdict.counterexample is not None:
                click.echo("    counterexample " + export.path_to_text(lts, verdict.counterexample))
    sys.exit(EXIT_HOLDS if all_hold else EXIT_FAILS)


@main.command()
@input_arg
@bound_opt
@click.option("--role", type=click.Choice(["fs", "me"]), help="Defaults to a guess from the action names.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--figure", type=click.Path(dir_okay=False), help="Also draw the coordinates to this image file.")
def classify(source, bound, role, fmt, figure):
    """Weakest criterion under which the request and granting requirements hold."""
    name, _, lts = _load(source, bound)
    role = role or _role(lts)
    coords = classify_hierarchy(lts, role)
    if fmt == "json":
        click.echo(export.dumps({"model": name, "role": role, **coords}))
    else:
        for axis, kind in coords.items():
            click.echo("%-9s %s" % (axis, kind or "none"))
    if figure:
        from .plotting import hierarchy_figure

        hierarchy_figure({name: coords}, figure)


@main.command("export")
@input_arg
@bound_opt
@click.option("--format", "fmt", type=click.Choice(["dot", "json", "source"]), default="dot")
@click.option("--dot", "as_dot", is_flag=True, help="Shorthand for --format dot.")
@click.option("--what", type=click.Choice(["model", "lts", "kripke"]), default="model",
              help="model: the net itself for nets, the LTS otherwise.")
@click.option("--E", "E", help="Finitely blockable actions, for dashed E-spurious edges.")
def export_cmd(source, bound, fmt, as_dot, what, E):
    """Write INPUT as DOT, JSON or source text."""
    if as_dot:
        fmt = "dot"
    name, model, lts = _load(source, bound)
    if fmt == "source":
        if isinstance(model, PetriNet):
            click.echo(format_net(model), nl=False)
        else:
            click.echo(pretty_definitions(*model))
        return
    if what == "kripke":
        k = lts_to_kripke(lts)
        if fmt != "dot":
            raise ValueError("the Kripke structure is exported as DOT only")
        click.echo(export.kripke_to_dot(k, name), nl=False)
    elif what == "model" and isinstance(model, PetriNet) and fmt == "dot":
        click.echo(export.net_to_dot(model), nl=False)
    elif fmt == "dot":
        click.echo(export.ltsc_to_dot(lts, _names(E), name), nl=False)
    else:
        click.echo(export.dumps(export.ltsc_to_json(lts, _names(E))))


if __name__ == "__main__":
    main()
