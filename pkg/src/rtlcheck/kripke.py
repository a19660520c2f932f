"""Kripke structures derived from an LTSC, and paths through them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from .semantics import Ltsc, mark_spurious
from .syntax import is_visible

TR = "tr"
END = "end"


def en_task(name: str) -> str:
    return "en[%s]" % name


def oc_task(name: str) -> str:
    return "oc[%s]" % name


def en_tr(t: int) -> str:
    return "en<%d>" % t


def interfere(t: int) -> str:
    return "#%d" % t


@dataclass(frozen=True)
class Trace:
    """A sequence of valuations; ``loop`` is the index the last position
    returns to, or None for a finite path."""
    valuations: Tuple[FrozenSet[str], ...]
    loop: Optional[int] = None

    def __post_init__(self):
        if not self.valuations:
            raise ValueError("a path has at least one state")
        if self.loop is not None and not 0 <= self.loop < len(self.valuations):
            raise ValueError("loop index out of range")

    def __len__(self):
        return len(self.valuations)

    def prefix(self, n: int) -> "Trace":
        """The finite prefix with ``n`` positions (unrolling the loop as needed)."""
        vals = []
        i = 0
        while len(vals) < n:
            vals.append(self.valuations[i])
            i += 1
            if i == len(self.valuations):
                if self.loop is None:
                    break
                i = self.loop
        return Trace(tuple(vals))


@dataclass(frozen=True)
class KPath:
    """Nodes of a Kripke path; ``loop`` as in Trace."""
    nodes: Tuple[int, ...]
    loop: Optional[int] = None


@dataclass(frozen=True)
class LtsPath:
    """A finite LTS path from ``start``."""
    start: int
    transitions: Tuple[int, ...] = ()

    def states(self, lts: Ltsc) -> List[int]:
        out = [self.start]
        for t in self.transitions:
            out.append(lts.transitions[t].target)
        return out

    @property
    def finite(self) -> bool:
        return True


@dataclass(frozen=True)
class Lasso:
    """stem followed by cycle repeated forever; the cycle returns to its first source."""
    start: int
    stem: Tuple[int, ...]
    cycle: Tuple[int, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("a lasso needs a nonempty cycle")

    def states(self, lts: Ltsc) -> List[int]:
        out = [self.start]
        for t in self.stem + self.cycle:
            out.append(lts.transitions[t].target)
        return out

    def validate(self, lts: Ltsc) -> None:
        cur = self.start
        for t in self.stem + self.cycle:
            if lts.transitions[t].source != cur:
                raise ValueError("transition %d does not start at state %d" % (t, cur))
            cur = lts.transitions[t].target
        first = lts.transitions[self.cycle[0]].source
        if cur != first:
            raise ValueError("cycle does not return to its start")

    @property
    def finite(self) -> bool:
        return False


@dataclass
class KripkeStructure:
    """Nodes with successor lists; each edge carries the LTS transition it
    starts (or None).  ``kind[k]`` is ('s', state), ('h', transition) or
    ('e', state) for end copies."""
    kind: List[Tuple[str, int]] = field(default_factory=list)
    succ: List[List[Tuple[int, Optional[int]]]] = field(default_factory=list)
    valuation: List[FrozenSet[str]] = field(default_factory=list)
    initial: int = 0
    state_node: Dict[int, int] = field(default_factory=dict)
    halfway_node: Dict[int, int] = field(default_factory=dict)

    def add_node(self, kind: Tuple[str, int], props: Iterable[str] = ()) -> int:
        self.kind.append(kind)
        self.succ.append([])
        self.valuation.append(frozenset(props))
        return len(self.kind) - 1

    def name(self, k: int) -> str:
        tag, x = self.kind[k]
        return {"s": "%d", "h": "<%d>", "e": "%d$"}[tag] % x

    def __len__(self):
        return len(self.kind)

    def trace(self, path: KPath) -> Trace:
        return Trace(tuple(self.valuation[k] for k in path.nodes), path.loop)

    def path_of(self, lts: Ltsc, p) -> KPath:
        """The Kripke path corresponding to an LTS path or lasso."""
        nodes = [self.state_node[p.start]]

        def walk(tids):
            for t in tids:
                h = self.halfway_node.get(t)
                if h is not None:
                    nodes.append(h)
                nodes.append(self.state_node[lts.transitions[t].target])

        if isinstance(p, LtsPath):
            walk(p.transitions)
            return KPath(tuple(nodes))
        walk(p.stem)
        loop = len(nodes) - 1
        walk(p.cycle)
        nodes.pop()
        return KPath(tuple(nodes), loop)


def lts_to_kripke(lts: Ltsc, full: bool = False, exclude: Iterable[int] = ()) -> KripkeStructure:
    """Halfway states for visible transitions (all transitions when ``full``)."""
    exclude = set(exclude)
    k = KripkeStructure()
    for s in range(len(lts.states)):
        k.state_node[s] = k.add_node(("s", s))
    k.initial = k.state_node[lts.initial]
    for tr in lts.transitions:
        if tr.id in exclude:
            continue
        src, dst = k.state_node[tr.source], k.state_node[tr.target]
        if full or is_visible(tr.label):
            h = k.add_node(("h", tr.id), [tr.label] if is_visible(tr.label) else [])
            k.halfway_node[tr.id] = h
            k.succ[src].append((h, tr.id))
            k.succ[h].append((dst, None))
        else:
            k.succ[src].append((dst, tr.id))
    return k


def default_tasks(lts: Ltsc) -> Dict[str, FrozenSet[int]]:
    """One task per action label plus one per source tag."""
    tasks: Dict[str, Set[int]] = {}
    for tr in lts.transitions:
        tasks.setdefault("label:" + tr.label, set()).add(tr.id)
        for tag in tr.tags:
            tasks.setdefault("tag:" + tag, set()).add(tr.id)
    return {name: frozenset(ids) for name, ids in sorted(tasks.items())}


def b_enabled(lts: Ltsc, s: int, task: Iterable[int], B: Iterable[str]) -> bool:
    B = set(B)
    task = set(task)
    return any(t in task and lts.transitions[t].label not in B for t in lts.out[s])


def instrument(lts: Ltsc, B: Iterable[str] = (), E: Optional[Iterable[str]] = None,
               tasks: Optional[Mapping[str, Iterable[int]]] = None) -> KripkeStructure:
    """The structure K-hat: halfway states for all transitions, self-loops
    everywhere, and the propositions tr, en[T], oc[T], en<t>, #t."""
    B = frozenset(B)
    tasks = {name: frozenset(ids) for name, ids in (tasks or {}).items()}
    dropped = mark_spurious(lts, E) if E is not None else set()
    k = lts_to_kripke(lts, full=True, exclude=dropped)
    enabled = [{name for name, ids in tasks.items() if b_enabled(lts, s, ids, B)}
               for s in range(len(lts.states))]
    props: List[Set[str]] = [set(v) for v in k.valuation]
    for s, node in k.state_node.items():
        props[node].update(en_task(n) for n in enabled[s])
        props[node].update(en_tr(t) for t in lts.out[s] if lts.transitions[t].label not in B)
    unblocked = [t.id for t in lts.transitions if t.label not in B]
    for t, h in k.halfway_node.items():
        tr = lts.transitions[t]
        props[h].add(TR)
        props[h].update(en_task(n) for n in enabled[tr.source] & enabled[tr.target])
        props[h].update(oc_task(n) for n, ids in tasks.items() if t in ids)
        props[h].update(interfere(u) for u in unblocked if (lts.interferers[u] >> t) & 1)
    k.valuation = [frozenset(p) for p in props]
    for node in range(len(k)):
        k.succ[node].append((node, None))
    return k


def embed_infinite(path: KPath) -> KPath:
    """pi^infinity: repeat the last state of a finite path forever."""
    if path.loop is not None:
        return path
    return KPath(path.nodes, len(path.nodes) - 1)
