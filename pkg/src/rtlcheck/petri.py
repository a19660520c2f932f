"""Petri nets with read arcs, their marking graphs and concurrency relation."""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .semantics import DEFAULT_BOUND, BoundExceeded, Ltsc, Transition


class Marking(Mapping[str, int]):
    """A finite multiset of places; zero counts are dropped."""

    __slots__ = ("_items", "_dict", "_hash")

    def __init__(self, counts: Optional[Mapping[str, int] | Iterable[str]] = None):
        if counts is None:
            counts = {}
        elif not isinstance(counts, Mapping):
            counts = Counter(counts)
        for v in counts.values():
            if v < 0:
                raise ValueError("negative multiplicity")
        self._items = tuple(sorted((k, v) for k, v in counts.items() if v > 0))
        self._dict = dict(self._items)
        self._hash = hash(self._items)

    def __getitem__(self, place: str) -> int:
        return self._dict.get(place, 0)

    def get(self, place, default=0):
        return self._dict.get(place, default)

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Marking):
            return self._items == other._items
        return NotImplemented

    def __repr__(self):
        return "Marking(%s)" % dict(self._items)

    def __str__(self):
        return "{" + ", ".join(k if v == 1 else "%s*%d" % (k, v) for k, v in self._items) + "}"

    def __add__(self, other: "Marking") -> "Marking":
        c = Counter(self._dict)
        c.update(other._dict)
        return Marking(c)

    def __sub__(self, other: "Marking") -> "Marking":
        return Marking({k: max(0, v - other[k]) for k, v in self._items})

    def __and__(self, other: "Marking") -> "Marking":
        return Marking({k: min(v, other[k]) for k, v in self._items})

    def __le__(self, other: "Marking") -> bool:
        return all(v <= other[k] for k, v in self._items)

    def __bool__(self):
        return bool(self._items)


class FireDisabled(RuntimeError):
    pass


@dataclass
class PetriNet:
    places: List[str]
    transitions: List[str]
    pre: Dict[str, Marking]
    post: Dict[str, Marking]
    read: Dict[str, Marking]
    initial: Marking
    labels: Dict[str, str]
    name: str = "net"

    def __post_init__(self):
        problems = []
        for t in self.transitions:
            if not self.pre[t]:
                problems.append("transition %s has no preplace" % t)
            for s in self.read[t]:
                if self.pre[t][s]:
                    problems.append("place %s is both input and read place of %s" % (s, t))
        if problems:
            raise ValueError("; ".join(problems))

    def enabled(self, marking: Marking, t: str) -> bool:
        return self.pre[t] + self.read[t] <= marking

    def fire(self, marking: Marking, t: str) -> Marking:
        if not self.enabled(marking, t):
            raise FireDisabled("%s is not enabled under %s" % (t, marking))
        return (marking - self.pre[t]) + self.post[t]

    def enabled_transitions(self, marking: Marking) -> List[str]:
        return [t for t in self.transitions if self.enabled(marking, t)]

    def reachable(self, bound: int = DEFAULT_BOUND) -> Tuple[List[Marking], List[Tuple[int, str, int]]]:
        index = {self.initial: 0}
        states = [self.initial]
        edges = []
        queue = deque([0])
        while queue:
            s = queue.popleft()
            for t in self.enabled_transitions(states[s]):
                m = self.fire(states[s], t)
                tgt = index.get(m)
                if tgt is None:
                    if len(states) >= bound:
                        raise BoundExceeded(bound)
                    tgt = index[m] = len(states)
                    states.append(m)
                    queue.append(tgt)
                edges.append((s, t, tgt))
        return states, edges

    def without_read_arcs(self) -> "PetriNet":
        """Replace every read arc by a loop: F := F + R + R^-1."""
        return PetriNet(list(self.places), list(self.transitions),
                        {t: self.pre[t] + self.read[t] for t in self.transitions},
                        {t: self.post[t] + self.read[t] for t in self.transitions},
                        {t: Marking() for t in self.transitions},
                        self.initial, dict(self.labels), self.name + "-loops")


def net_to_ltsc(net: PetriNet, bound: int = DEFAULT_BOUND) -> Ltsc:
    """Marking graph with (pre t + read t) meet pre u = empty as concurrency."""
    states, edges = net.reachable(bound)
    transitions = [Transition(i, s, net.labels[t], frozenset(net.pre[t]), frozenset({t}), d)
                   for i, (s, t, d) in enumerate(edges)]
    by_name: Dict[str, int] = {}
    for tr, (_, t, _) in zip(transitions, edges):
        by_name[t] = by_name.get(t, 0) | (1 << tr.id)
    names = net.transitions
    clash = {t: [u for u in names if (net.pre[t] + net.read[t]) & net.pre[u]] for t in names}
    masks = []
    for tr, (_, t, _) in zip(transitions, edges):
        m = 1 << tr.id
        for u in clash[t]:
            m |= by_name.get(u, 0)
        masks.append(m)
    lts = Ltsc(states, transitions, 0, masks, frozenset(), frozenset(), [str(m) for m in states])
    lts.net_transition = [t for _, t, _ in edges]
    return lts


def check_structural_conflict(net: PetriNet, bound: int = DEFAULT_BOUND) -> bool:
    states, _ = net.reachable(bound)
    pairs = [(t, u) for t in net.transitions for u in net.transitions
             if (net.pre[t] + net.read[t]) & net.pre[u]]
    for m in states:
        for t, u in pairs:
            if net.pre[t] + net.read[t] + net.pre[u] <= m and net.read[u] <= m:
                return False
    return True


# -- text format ---------------------------------------------------------------
#
#   place l1 1            name and initial token count (default 0)
#   trans ln_A : ln_A     transition name and action label
#   arc l1 -> ln_A        flow arc, optional "* k" multiplicity
#   read readyB_f -- l4_B read arc

_LINE = re.compile(r"""^\s*(?:
    place\s+(?P<place>\w+)(?:\s+(?P<tokens>\d+))? |
    trans\s+(?P<trans>\w+)\s*:\s*(?P<label>'?\w+) |
    arc\s+(?P<src>\w+)\s*->\s*(?P<dst>\w+)(?:\s*\*\s*(?P<mult>\d+))? |
    read\s+(?P<rplace>\w+)\s*--\s*(?P<rtrans>\w+)(?:\s*\*\s*(?P<rmult>\d+))?
)\s*$""", re.VERBOSE)


def parse_net(source: str, name: str = "net") -> PetriNet:
    places: List[str] = []
    trans: List[str] = []
    initial: Dict[str, int] = {}
    labels: Dict[str, str] = {}
    pre: Dict[str, Counter] = {}
    post: Dict[str, Counter] = {}
    read: Dict[str, Counter] = {}
    arcs = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise ValueError("line %d: cannot parse %r" % (lineno, raw.strip()))
        if m.group("place"):
            places.append(m.group("place"))
            initial[m.group("place")] = int(m.group("tokens") or 0)
        elif m.group("trans"):
            t = m.group("trans")
            trans.append(t)
            labels[t] = m.group("label")
            pre[t], post[t], read[t] = Counter(), Counter(), Counter()
        elif m.group("src"):
            arcs.append((lineno, "flow", m.group("src"), m.group("dst"), int(m.group("mult") or 1)))
        else:
            arcs.append((lineno, "read", m.group("rplace"), m.group("rtrans"), int(m.group("rmult") or 1)))
    for lineno, kind, a, b, k in arcs:
        if kind == "read":
            if a not in initial or b not in labels:
                raise ValueError("line %d: read arc needs a place and a transition" % lineno)
            read[b][a] += k
        elif a in initial and b in labels:
            pre[b][a] += k
        elif a in labels and b in initial:
            post[a][b] += k
        else:
            raise ValueError("line %d: arc must join a place and a transition" % lineno)
    return PetriNet(places, trans, {t: Marking(pre[t]) for t in trans},
                    {t: Marking(post[t]) for t in trans}, {t: Marking(read[t]) for t in trans},
                    Marking(initial), labels, name)


def format_net(net: PetriNet) -> str:
    lines = []
    for p in net.places:
        k = net.initial[p]
        lines.append("place %s%s" % (p, " %d" % k if k else ""))
    for t in net.transitions:
        lines.append("trans %s : %s" % (t, net.labels[t]))
    for t in net.transitions:
        for s, k in net.pre[t].items():
            lines.append("arc %s -> %s%s" % (s, t, " * %d" % k if k > 1 else ""))
        for s, k in net.post[t].items():
            lines.append("arc %s -> %s%s" % (t, s, " * %d" % k if k > 1 else ""))
        for s, k in net.read[t].items():
            lines.append("read %s -- %s%s" % (s, t, " * %d" % k if k > 1 else ""))
    return "\n".join(lines) + "\n"
