"""Component-labelled operational semantics of CCS_t and the reachable LTSC.

A component is a string over ``L``/``R`` naming a position in the tree of
parallel compositions; ``""`` is the root.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .syntax import (
    TAU, TIMEOUT, Definitions, GuardedChoice, Identifier, Parallel, Process,
    Relabelling, Restriction, base_name, canonical, canonical_definitions,
    complement, is_coname, is_visible, pretty,
)

DEFAULT_BOUND = 100_000

# evidence entry: (component, prefix label as written, continuation re-enters the unfolded identifier)
Evidence = Tuple[Tuple[str, str, bool], ...]


class BoundExceeded(RuntimeError):
    def __init__(self, bound: int):
        super().__init__("more than %d reachable states" % bound)
        self.bound = bound


@dataclass(frozen=True)
class Step:
    """One conclusion of the transition rules, before states are numbered."""
    label: str
    components: FrozenSet[str]
    tags: FrozenSet[str]
    target: Process
    evidence: Evidence


@dataclass(frozen=True)
class Transition:
    id: int
    source: int
    label: str
    components: FrozenSet[str]
    tags: FrozenSet[str]
    target: int
    evidence: Evidence = ()


def _prefixed(d: str, comps: Iterable[str]) -> FrozenSet[str]:
    return frozenset(d + c for c in comps)


def _prefixed_evidence(d: str, ev: Evidence) -> Evidence:
    return tuple((d + c, lab, loop) for c, lab, loop in ev)


class Semantics:
    """Derivation engine for one definition environment."""

    def __init__(self, defs: Definitions):
        self.defs = defs
        self._cache: Dict[Process, Tuple[Step, ...]] = {}

    def steps(self, p: Process) -> Tuple[Step, ...]:
        hit = self._cache.get(p)
        if hit is None:
            hit = tuple(sorted(set(self._derive(p, None, frozenset())), key=_step_key))
            self._cache[p] = hit
        return hit

    def _derive(self, p: Process, unfolding: Optional[str], visiting: FrozenSet[str]) -> List[Step]:
        if isinstance(p, GuardedChoice):
            out = []
            loop_target = Identifier(unfolding) if unfolding is not None else None
            for s in p.summands:
                loop = loop_target is not None and s.cont == loop_target
                out.append(Step(s.label, frozenset({""}),
                                frozenset({s.tag}) if s.tag else frozenset(),
                                s.cont, (("", s.label, loop),)))
            return out
        if isinstance(p, Identifier):
            if p.name in visiting:
                raise ValueError("unguarded recursion through %s" % p.name)
            return self._derive(self.defs[p.name], p.name, visiting | {p.name})
        if isinstance(p, Parallel):
            left = self.steps(p.left)
            right = self.steps(p.right)
            out = [Step(s.label, _prefixed("L", s.components), s.tags,
                        Parallel(s.target, p.right), _prefixed_evidence("L", s.evidence))
                   for s in left]
            out += [Step(s.label, _prefixed("R", s.components), s.tags,
                         Parallel(p.left, s.target), _prefixed_evidence("R", s.evidence))
                    for s in right]
            by_label: Dict[str, List[Step]] = {}
            for s in right:
                if is_visible(s.label):
                    by_label.setdefault(s.label, []).append(s)
            for s in left:
                if not is_visible(s.label):
                    continue
                for r in by_label.get(complement(s.label), ()):
                    out.append(Step(TAU,
                                    _prefixed("L", s.components) | _prefixed("R", r.components),
                                    s.tags | r.tags,
                                    Parallel(s.target, r.target),
                                    _prefixed_evidence("L", s.evidence) + _prefixed_evidence("R", r.evidence)))
            return out
        if isinstance(p, Restriction):
            return [Step(s.label, s.components, s.tags, Restriction(s.target, p.names), s.evidence)
                    for s in self.steps(p.proc)
                    if not (is_visible(s.label) and base_name(s.label) in p.names)]
        if isinstance(p, Relabelling):
            return [Step(p.apply(s.label), s.components, s.tags, Relabelling(s.target, p.mapping), s.evidence)
                    for s in self.steps(p.proc)]
        raise TypeError("not a process: %r" % (p,))


def _step_key(s: Step):
    return (s.label, tuple(sorted(s.components)), tuple(sorted(s.tags)), pretty(s.target), s.evidence)


def derive_transitions(defs: Definitions, p: Process) -> List[Step]:
    """All conclusions of the transition rules with source ``p``."""
    return list(Semantics(defs).steps(p))


@dataclass
class Ltsc:
    """A finite LTS with a concurrency relation.

    ``interferers[t]`` is a bitmask of the transitions u with not(t conc u);
    ``concurrent(t, u)`` is the relation itself.
    """
    states: List[object]
    transitions: List[Transition]
    initial: int = 0
    interferers: List[int] = field(default_factory=list)
    spurious_any: FrozenSet[int] = frozenset()
    signals: FrozenSet[str] = frozenset()
    state_names: Optional[List[str]] = None

    def __post_init__(self):
        self.out: List[List[int]] = [[] for _ in self.states]
        for tr in self.transitions:
            self.out[tr.source].append(tr.id)
        if not self.spurious_any:
            self.spurious_any = frozenset(mark_spurious(self, None))

    def concurrent(self, t: int, u: int) -> bool:
        return not (self.interferers[t] >> u) & 1

    def interferer_ids(self, t: int) -> List[int]:
        mask = self.interferers[t]
        return [u for u in range(len(self.transitions)) if (mask >> u) & 1]

    @property
    def labels(self) -> Set[str]:
        return {tr.label for tr in self.transitions}

    @property
    def visible_names(self) -> Set[str]:
        return {tr.label for tr in self.transitions if is_visible(tr.label)}

    def state_name(self, s: int) -> str:
        if self.state_names is not None:
            return self.state_names[s]
        st = self.states[s]
        return pretty(st) if not isinstance(st, str) else st

    def find(self, source: int, label: str, tag: Optional[str] = None) -> List[int]:
        return [t for t in self.out[source]
                if self.transitions[t].label == label
                and (tag is None or tag in self.transitions[t].tags)]


def explore(defs: Definitions, root: Process, bound: int = DEFAULT_BOUND,
            signals: Optional[Iterable[str]] = None) -> Ltsc:
    """Breadth-first reachable LTSC of ``root``.

    Concurrency is the component rule, adjusted for ``signals`` (default: the
    signals declared in ``defs``).
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    defs = canonical_definitions(defs)
    sem = Semantics(defs)
    start = canonical(root)
    index: Dict[Process, int] = {start: 0}
    states: List[Process] = [start]
    transitions: List[Transition] = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for step in sem.steps(states[s]):
            tgt = index.get(step.target)
            if tgt is None:
                if len(states) >= bound:
                    raise BoundExceeded(bound)
                tgt = len(states)
                index[step.target] = tgt
                states.append(step.target)
                queue.append(tgt)
            transitions.append(Transition(len(transitions), s, step.label, step.components,
                                          step.tags, tgt, step.evidence))
    sig = frozenset(defs.signals if signals is None else signals)
    lts = Ltsc(states, transitions, 0, [], frozenset(), sig)
    lts.interferers = concurrency(lts, sig)
    return lts


def concurrency(lts: Ltsc, signals: Iterable[str] = ()) -> List[int]:
    """Interferer bitmasks: u interferes with t unless, at every shared
    component, u merely emits a declared signal from a register self-loop."""
    signals = frozenset(signals)
    by_comp: Dict[str, int] = {}
    for tr in lts.transitions:
        quiet = set()
        if signals:
            for comp, lab, loop in tr.evidence:
                if loop and is_coname(lab) and base_name(lab) in signals:
                    quiet.add(comp)
        for c in tr.components:
            if c not in quiet:
                by_comp[c] = by_comp.get(c, 0) | (1 << tr.id)
    masks = []
    for tr in lts.transitions:
        m = 1 << tr.id
        for c in tr.components:
            m |= by_comp.get(c, 0)
        masks.append(m)
    return masks


def mark_spurious(lts: Ltsc, E: Optional[Iterable[str]]) -> Set[int]:
    """Time-out transitions whose source offers tau or an action outside E.

    ``E=None`` means all visible actions, giving the plain spurious set.
    """
    E = None if E is None else set(E)
    out = set()
    for s, tids in enumerate(lts.out):
        escapes = False
        for t in tids:
            lab = lts.transitions[t].label
            if lab == TAU or (E is not None and is_visible(lab) and lab not in E):
                escapes = True
                break
        if escapes:
            out.update(t for t in tids if lts.transitions[t].label == TIMEOUT)
    return out


def check_closure(lts: Ltsc) -> List[Tuple[int, int]]:
    """Violations of the LTSC closure property as (t, state) pairs.

    For each t, every state reachable from source(t) via transitions
    concurrent with t must offer some u with the same label that t does
    not tolerate.
    """
    bad = []
    for t in lts.transitions:
        mask = lts.interferers[t.id]
        seen = {t.source}
        queue = deque([t.source])
        while queue:
            s = queue.popleft()
            if not any((mask >> u) & 1 and lts.transitions[u].label == t.label for u in lts.out[s]):
                bad.append((t.id, s))
            for v in lts.out[s]:
                if not (mask >> v) & 1:
                    nxt = lts.transitions[v].target
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return bad


def is_symmetric(lts: Ltsc) -> bool:
    n = len(lts.transitions)
    return all(lts.concurrent(t, u) == lts.concurrent(u, t) for t in range(n) for u in range(t + 1, n))


def ltsc_from_edges(n_states: int, edges: Sequence[Tuple[int, str, int]],
                    concurrent_pairs: Iterable[Tuple[int, int]] = (), initial: int = 0) -> Ltsc:
    """Build an LTSC directly; transitions are numbered in edge order.

    ``concurrent_pairs`` lists (t, u) with t conc u; everything else interferes.
    """
    transitions = [Transition(i, s, lab, frozenset({str(i)}), frozenset(), d)
                   for i, (s, lab, d) in enumerate(edges)]
    full = (1 << len(transitions)) - 1
    masks = [full] * len(transitions)
    for t, u in concurrent_pairs:
        if t != u:
            masks[t] &= ~(1 << u)
    lts = Ltsc(list(range(n_states)), transitions, initial, masks, frozenset(), frozenset(),
               [str(i) for i in range(n_states)])
    return lts
