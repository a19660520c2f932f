"""Reactive LTL judgements under completeness criteria.

A judgement fixes a model, a formula, a criterion (top, pr, j, wf, sf), the
blocking actions B and the finitely blockable actions E.  It holds when every
complete path from the initial state satisfies the formula.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .kripke import (
    END, TR, KripkeStructure, KPath, Lasso, LtsPath, b_enabled, default_tasks, embed_infinite,
    instrument, lts_to_kripke,
)
from .ltl import (
    FALSE, TRUE, And, Atom, F, Formula, G, Implies, Not, build_J, build_SF, build_WF, conjuncts, evaluate,
    formula_Z, nnf, transform_Q, with_end_marker,
)
from .semantics import Ltsc, mark_spurious
from .syntax import TIMEOUT
from .tableau import Tableau

KINDS = ("top", "pr", "j", "wf", "sf")
STRENGTH = {"top": 0, "pr": 1, "j": 2, "wf": 3, "sf": 4}

Path = Union[LtsPath, Lasso]


class ModelTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Criterion:
    kind: str = "pr"
    tasks: Optional[Tuple[Tuple[str, FrozenSet[int]], ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown criterion %r" % self.kind)

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        return cls(text.strip().lower())

    def task_map(self, lts: Ltsc) -> Dict[str, FrozenSet[int]]:
        if self.tasks is None:
            return default_tasks(lts)
        return dict(self.tasks)

    def with_tasks(self, tasks: Mapping[str, Iterable[int]]) -> "Criterion":
        return Criterion(self.kind, tuple((k, frozenset(v)) for k, v in sorted(tasks.items())))

    def __str__(self):
        return self.kind


TOP, PR, J, WF, SF = (Criterion(k) for k in KINDS)


def select_tasks(lts: Ltsc, spec: Iterable[str]) -> Dict[str, FrozenSet[int]]:
    """Tasks named ``label:a`` or ``tag:x``, resolved against ``lts``."""
    available = default_tasks(lts)
    out = {}
    for name in spec:
        if name not in available:
            kind, _, value = name.partition(":")
            if kind not in ("label", "tag"):
                raise ValueError("task must be label:<action> or tag:<tag>, not %r" % name)
            out[name] = frozenset()
        else:
            out[name] = available[name]
    return out


@dataclass
class Judgement:
    model: Ltsc
    formula: Formula
    criterion: Criterion = PR
    B: FrozenSet[str] = frozenset()
    E: Optional[FrozenSet[str]] = None
    kripke: str = "dv"

    def __post_init__(self):
        self.B = frozenset(self.B)
        if self.E is not None:
            self.E = frozenset(self.E)
            if not self.B <= self.E:
                raise ValueError("B must be a subset of E")
        if self.kripke not in ("dv", "full"):
            raise ValueError("kripke must be 'dv' or 'full'")

    @cached_property
    def dropped(self) -> Set[int]:
        """E-spurious transitions, which no complete path takes."""
        return mark_spurious(self.model, self.E)


@dataclass
class Verdict:
    holds: bool
    counterexample: Optional[Path] = None
    stats: Dict[str, object] = field(default_factory=dict)
    exhaustive: bool = True

    def __bool__(self):
        return self.holds


# -- completeness predicates, straight from the definitions ---------------------

def is_b_deadlock(lts: Ltsc, s: int, B: Iterable[str]) -> bool:
    B = set(B)
    return all(lts.transitions[t].label in B for t in lts.out[s])


def _obligations(lts: Ltsc, s: int, B: FrozenSet[str]) -> List[int]:
    return [t for t in lts.out[s] if lts.transitions[t].label not in B]


def is_complete(j: Judgement, path: Path) -> bool:
    lts, B = j.model, j.B
    dropped = j.dropped
    tids = path.transitions if isinstance(path, LtsPath) else path.stem + path.cycle
    if any(t in dropped for t in tids):
        return False
    kind = j.criterion.kind
    states = path.states(lts)
    if isinstance(path, LtsPath):
        return kind == "top" or is_b_deadlock(lts, states[-1], B)
    if kind in ("top", "pr"):
        return True
    cycle_states = [lts.transitions[t].source for t in path.cycle]
    if kind == "j":
        occurring = 0
        for t in path.cycle:
            occurring |= 1 << t
        for s in set(cycle_states):
            for t in _obligations(lts, s, B):
                if not lts.interferers[t] & occurring:
                    return False
        later = occurring
        for i in range(len(path.stem) - 1, -1, -1):
            t_here = path.stem[i]
            later |= 1 << t_here
            for t in _obligations(lts, lts.transitions[t_here].source, B):
                if not lts.interferers[t] & later:
                    return False
        return True
    tasks = j.criterion.task_map(lts)
    cycle_set = set(path.cycle)
    for ids in tasks.values():
        enabled = [b_enabled(lts, s, ids, B) for s in cycle_states]
        needed = all(enabled) if kind == "wf" else any(enabled)
        if needed and not (ids & cycle_set):
            return False
    return True


def satisfies(j: Judgement, path: Path, kripke: Optional[KripkeStructure] = None) -> bool:
    k = kripke or lts_to_kripke(j.model, full=j.kripke == "full")
    return evaluate(k.trace(k.path_of(j.model, path)), j.formula)


def revalidate(j: Judgement, path: Path) -> bool:
    """True when ``path`` is a genuine counterexample for ``j``."""
    return is_complete(j, path) and not satisfies(j, path)


# -- the product-automaton checker ---------------------------------------------

class _Product:
    def __init__(self, j: Judgement, limit: int):
        self.j = j
        lts = self.lts = j.model
        self.B = j.B
        self.kind = j.criterion.kind
        self.dropped = j.dropped
        self.k = lts_to_kripke(lts, full=j.kripke == "full", exclude=self.dropped)
        self._add_end_nodes()
        self.tab = Tableau.for_formula(with_end_marker(Not(j.formula)))
        self.tasks = j.criterion.task_map(lts) if self.kind in ("wf", "sf") else {}
        self.task_enabled = {
            name: [b_enabled(lts, s, ids, self.B) for s in range(len(lts.states))]
            for name, ids in self.tasks.items()
        }
        self.oblig = [0] * len(lts.states)
        for s in range(len(lts.states)):
            for t in _obligations(lts, s, self.B):
                self.oblig[s] |= 1 << t
        self.pending_mode = self.kind == "j" and not inheritance_holds(lts, self.B, self.dropped)
        self.limit = limit
        self._build()

    def _add_end_nodes(self):
        k, lts = self.k, self.lts
        ends = {}
        for s in range(len(lts.states)):
            if self.kind == "top" or is_b_deadlock(lts, s, self.B):
                node = k.state_node[s]
                e = k.add_node(("e", s), k.valuation[node] | {END})
                k.succ[e].append((e, None))
                ends[node] = e
        for node in range(len(k)):
            extra = [(ends[d], ann) for d, ann in k.succ[node] if d in ends]
            k.succ[node].extend(extra)
        self.starts = [k.initial] + ([ends[k.initial]] if k.initial in ends else [])

    def _build(self):
        k, tab = self.k, self.tab
        index: Dict[Tuple[int, int, int], int] = {}
        nodes: List[Tuple[int, int, int]] = []
        succ: List[List[Tuple[int, Optional[int], int]]] = []

        def node(key):
            idx = index.get(key)
            if idx is None:
                if len(nodes) >= self.limit:
                    raise ModelTooLarge("product exceeds %d nodes" % self.limit)
                idx = index[key] = len(nodes)
                nodes.append(key)
                succ.append([])
                queue.append(idx)
            return idx

        queue: deque = deque()
        self.initial = [node((kn, 0, 0)) for kn in self.starts]
        while queue:
            p = queue.popleft()
            kn, q, pend = nodes[p]
            val = k.valuation[kn]
            if self.pending_mode and k.kind[kn][0] == "s":
                pend |= self.oblig[k.kind[kn][1]]
            for nxt, acc in tab.successors(q, frozenset(val)):
                for dst, ann in k.succ[kn]:
                    npend = pend
                    if self.pending_mode and ann is not None and npend:
                        npend = self._discharge(npend, ann)
                    target = node((dst, nxt, npend))
                    succ[p].append((target, ann, acc))
        self.nodes, self.succ = nodes, succ

    def _discharge(self, pend: int, u: int) -> int:
        lts = self.lts
        out = pend
        rest = pend
        while rest:
            low = rest & -rest
            t = low.bit_length() - 1
            if (lts.interferers[t] >> u) & 1:
                out &= ~low
            rest &= rest - 1
        return out

    # SCC search

    def _state_of(self, p: int) -> Optional[int]:
        kind, x = self.k.kind[self.nodes[p][0]]
        return x if kind == "s" else None

    def _is_end(self, p: int) -> bool:
        return self.k.kind[self.nodes[p][0]][0] == "e"

    def find_accepting(self) -> Optional[FrozenSet[int]]:
        reach = set(self.initial)
        stack = list(self.initial)
        while stack:
            p = stack.pop()
            for d, _, _ in self.succ[p]:
                if d not in reach:
                    reach.add(d)
                    stack.append(d)
        work = [frozenset(reach)]
        while work:
            part = work.pop()
            g = nx.DiGraph()
            g.add_nodes_from(part)
            for p in part:
                for d, _, _ in self.succ[p]:
                    if d in part:
                        g.add_edge(p, d)
            comps = sorted((frozenset(c) for c in nx.strongly_connected_components(g)), key=min)
            for comp in comps:
                if len(comp) == 1:
                    (p,) = comp
                    if not g.has_edge(p, p):
                        continue
                verdict = self._judge(comp)
                if verdict is True:
                    return comp
                if verdict:
                    work.append(comp - verdict)
        return None

    def _edges(self, comp: FrozenSet[int]):
        for p in comp:
            for d, ann, acc in self.succ[p]:
                if d in comp:
                    yield p, d, ann, acc

    def _judge(self, comp: FrozenSet[int]):
        """True if accepting, a nonempty set of nodes to prune, or False."""
        acc_seen = 0
        occurring = 0
        for _, _, ann, acc in self._edges(comp):
            acc_seen |= acc
            if ann is not None:
                occurring |= 1 << ann
        if acc_seen != self.tab.all_acc:
            return False
        states = {self._state_of(p) for p in comp} - {None}
        if self.pending_mode:
            relevant = 0
            settled = 0
            for p in comp:
                relevant |= self.nodes[p][2]
                settled |= ~self.nodes[p][2]
            if relevant & ~settled:
                return False
        if self.kind == "wf":
            has_end = any(self._is_end(p) for p in comp)
            for name, ids in self.tasks.items():
                if has_end or any(not self.task_enabled[name][s] for s in states):
                    continue
                if not any((occurring >> t) & 1 for t in ids):
                    return False
        bad_states = set()
        if self.kind == "sf":
            for name, ids in self.tasks.items():
                if any((occurring >> t) & 1 for t in ids):
                    continue
                bad_states.update(s for s in states if self.task_enabled[name][s])
        if self.kind == "j" and not self.pending_mode:
            lts = self.lts
            for s in states:
                rest = self.oblig[s]
                while rest:
                    low = rest & -rest
                    t = low.bit_length() - 1
                    if not lts.interferers[t] & occurring:
                        bad_states.add(s)
                        break
                    rest &= rest - 1
        if not bad_states:
            return True
        return frozenset(p for p in comp if self._state_of(p) in bad_states)

    # counterexample extraction

    def _bfs(self, sources: Sequence[int], goal, allowed: Optional[FrozenSet[int]] = None):
        """Shortest edge path from one of ``sources`` to a node satisfying ``goal``."""
        parent: Dict[int, Optional[Tuple[int, Optional[int]]]] = {}
        queue = deque()
        for s in sources:
            if s not in parent:
                parent[s] = None
                queue.append(s)
        while queue:
            p = queue.popleft()
            if goal(p):
                path = []
                while parent[p] is not None:
                    prev, ann = parent[p]
                    path.append((prev, p, ann))
                    p = prev
                return p, path[::-1]
            for d, ann, _ in self.succ[p]:
                if allowed is not None and d not in allowed:
                    continue
                if d not in parent:
                    parent[d] = (p, ann)
                    queue.append(d)
        raise AssertionError("unreachable goal")

    def lasso(self, comp: FrozenSet[int]):
        start, stem = self._bfs(self.initial, lambda p: p in comp)
        c0 = stem[-1][1] if stem else start
        edges = sorted(self._edges(comp), key=lambda e: (e[0], e[1], -1 if e[2] is None else e[2]))
        cycle: List[Tuple[int, int, Optional[int]]] = []
        cur = c0

        def go_to_node(target):
            nonlocal cur
            _, seg = self._bfs([cur], lambda p: p == target, comp)
            cycle.extend(seg)
            cur = target

        def take(edge):
            nonlocal cur
            go_to_node(edge[0])
            cycle.append((edge[0], edge[1], edge[2]))
            cur = edge[1]

        def visited_nodes(path):
            return {c0} | {e[1] for e in path}

        # acceptance sets of the automaton
        for i in range(len(self.tab.untils)):
            if not any((e[3] >> i) & 1 for e in cycle_edges_full(cycle, self)):
                take(next(e for e in edges if (e[3] >> i) & 1))
        if self.pending_mode:
            need = 0
            for p in comp:
                need |= self.nodes[p][2]
            while need:
                low = need & -need
                t = low.bit_length() - 1
                if not any(not (self.nodes[p][2] >> t) & 1 for p in visited_nodes(cycle)):
                    go_to_node(min(p for p in comp if not (self.nodes[p][2] >> t) & 1))
                need &= need - 1
        if self.kind == "wf":
            for name, ids in self.tasks.items():
                seen = visited_nodes(cycle)
                if any(self._is_end(p) or (self._state_of(p) is not None
                                           and not self.task_enabled[name][self._state_of(p)])
                       for p in seen):
                    continue
                if any(e[2] in ids for e in cycle):
                    continue
                witness = [p for p in sorted(comp) if self._is_end(p) or (
                    self._state_of(p) is not None and not self.task_enabled[name][self._state_of(p)])]
                if witness:
                    go_to_node(witness[0])
                else:
                    take(next(e for e in edges if e[2] in ids))
        while True:
            if cur == c0 and cycle:
                closing = []
            else:
                if not cycle and cur == c0:
                    take(edges_from(edges, c0)[0])
                _, closing = self._bfs([cur], lambda p: p == c0, comp)
            full = cycle + closing
            missing = self._unmet(full, c0)
            if missing is None:
                cycle = full
                break
            take(next(e for e in edges if e[2] is not None and missing(e[2])))
        return stem, cycle

    def _unmet(self, path, c0):
        """A predicate for the first unmet dynamic obligation on a closed path, or None."""
        occurring = 0
        for e in path:
            if e[2] is not None:
                occurring |= 1 << e[2]
        states = []
        for p in [c0] + [e[1] for e in path]:
            s = self._state_of(p)
            if s is not None and s not in states:
                states.append(s)
        lts = self.lts
        if self.kind == "sf":
            for name, ids in self.tasks.items():
                if any(self.task_enabled[name][s] for s in states) and not any((occurring >> t) & 1 for t in ids):
                    return lambda u, ids=ids: u in ids
        if self.kind == "j" and not self.pending_mode:
            for s in states:
                for t in _obligations(lts, s, self.B):
                    if not lts.interferers[t] & occurring:
                        return lambda u, t=t: (lts.interferers[t] >> u) & 1
        return None

    def to_path(self, stem, cycle) -> Path:
        start_state = self.lts.initial
        stem_t = tuple(e[2] for e in stem if e[2] is not None)
        if cycle and all(self._is_end(e[0]) for e in cycle):
            return LtsPath(start_state, stem_t)
        cycle_t = tuple(e[2] for e in cycle if e[2] is not None)
        return Lasso(start_state, stem_t, cycle_t)


def cycle_edges_full(cycle, product):
    acc_of = {}
    for p, d, ann in cycle:
        for dd, aa, acc in product.succ[p]:
            if dd == d and aa == ann:
                acc_of.setdefault((p, d, ann), 0)
                acc_of[(p, d, ann)] |= acc
    return [(p, d, ann, acc_of[(p, d, ann)]) for p, d, ann in cycle]


def edges_from(edges, p):
    return [e for e in edges if e[0] == p]


def inheritance_holds(lts: Ltsc, B: FrozenSet[str], dropped: Set[int]) -> bool:
    """Whether every obligation left untouched by a step is inherited by an
    obligation at the target with no more interferers.  When this holds,
    justness can be decided on cycles alone."""
    obligations = [[t for t in lts.out[s] if lts.transitions[t].label not in B] for s in range(len(lts.states))]
    for tr in lts.transitions:
        if tr.label in B:
            continue
        mask = lts.interferers[tr.id]
        for v in lts.out[tr.source]:
            if v in dropped or (mask >> v) & 1:
                continue
            target = lts.transitions[v].target
            if not any(lts.interferers[u] & ~mask == 0 for u in obligations[target]):
                return False
    return True


def complete_paths_semantics(j: Judgement, limit: int = 2_000_000) -> Verdict:
    """Decide ``j`` exactly; a failing verdict carries a counterexample."""
    began = time.perf_counter()
    product = _Product(j, limit)
    comp = product.find_accepting()
    stats = {
        "product_nodes": len(product.nodes),
        "automaton_states": len(product.tab.states),
        "lts_states": len(j.model.states),
        "lts_transitions": len(j.model.transitions),
        "justness_mode": ("pending" if product.pending_mode else "cycle") if j.criterion.kind == "j" else None,
        "extrapolation": j.criterion.kind in ("wf", "sf") and any(
            t.label == TIMEOUT for t in j.model.transitions),
    }
    if comp is None:
        stats["seconds"] = round(time.perf_counter() - began, 4)
        return Verdict(True, None, stats)
    stem, cycle = product.lasso(comp)
    cex = product.to_path(stem, cycle)
    stats["seconds"] = round(time.perf_counter() - began, 4)
    return Verdict(False, cex, stats)


check = complete_paths_semantics


# -- brute-force oracle -------------------------------------------------------

def _distances_to(lts: Ltsc, target: int, allowed) -> Dict[int, int]:
    preds: Dict[int, List[int]] = {}
    for tr in lts.transitions:
        if allowed(tr.id):
            preds.setdefault(tr.target, []).append(tr.source)
    dist = {target: 0}
    queue = deque([target])
    while queue:
        s = queue.popleft()
        for p in preds.get(s, ()):
            if p not in dist:
                dist[p] = dist[s] + 1
                queue.append(p)
    return dist


def enumerate_paths(lts: Ltsc, stem_bound: int, cycle_bound: int, allowed=lambda t: True,
                    include_finite: bool = True) -> Iterator[Path]:
    """All finite paths of length <= stem_bound and all lassos with stem <=
    stem_bound and cycle <= cycle_bound from the initial state, in DFS order.

    Cycles are closed walks: they may pass their starting state more than
    once, since a fair cycle may have to combine several simple ones.
    """
    dist_cache: Dict[int, Dict[int, int]] = {}

    def cycles_from(start: int):
        dist = dist_cache.get(start)
        if dist is None:
            dist = dist_cache[start] = _distances_to(lts, start, allowed)
        trail: List[int] = []

        def dfs(s, budget):
            for t in lts.out[s]:
                if not allowed(t):
                    continue
                d = lts.transitions[t].target
                if d == start:
                    yield tuple(trail + [t])
                rest = budget - 1
                if rest > 0 and dist.get(d, rest + 1) <= rest:
                    trail.append(t)
                    yield from dfs(d, rest)
                    trail.pop()

        yield from dfs(start, cycle_bound)

    stem: List[int] = []

    def walk(s, depth):
        if include_finite:
            yield LtsPath(lts.initial, tuple(stem))
        for cyc in cycles_from(s):
            yield Lasso(lts.initial, tuple(stem), cyc)
        if depth < stem_bound:
            for t in lts.out[s]:
                if allowed(t):
                    stem.append(t)
                    yield from walk(lts.transitions[t].target, depth + 1)
                    stem.pop()

    yield from walk(lts.initial, 0)


def oracle_check(j: Judgement, stem_bound: int, cycle_bound: int, budget: Optional[int] = None) -> Verdict:
    """Enumerate paths up to the bounds and test each one directly."""
    lts = j.model
    dropped = j.dropped
    k = lts_to_kripke(lts, full=j.kripke == "full")
    examined = 0
    for path in enumerate_paths(lts, stem_bound, cycle_bound, lambda t: t not in dropped):
        if budget is not None and examined >= budget:
            return Verdict(True, None, {"examined": examined}, exhaustive=False)
        examined += 1
        if is_complete(j, path) and not satisfies(j, path, k):
            return Verdict(False, path, {"examined": examined})
    return Verdict(True, None, {"examined": examined, "stem_bound": stem_bound, "cycle_bound": cycle_bound})


# -- the translation to standard LTL ---------------------------------------------

def criterion_formula(j: Judgement) -> Formula:
    lts, B, kind = j.model, j.B, j.criterion.kind
    if kind == "top":
        from .ltl import TRUE
        return TRUE
    if kind == "pr":
        return build_WF(["*all*"])
    if kind == "j":
        return build_J(lts, B)
    tasks = j.criterion.task_map(lts)
    return build_WF(tasks) if kind == "wf" else build_SF(tasks)


def translation_formula(j: Judgement, literal: bool = False) -> Formula:
    """Z & GF !tr -> (CC_B -> Q(phi)); with ``literal`` the GF !tr guard is dropped."""
    premise = formula_Z() if literal else And(formula_Z(), G(F(Not(Atom(TR)))))
    return Implies(premise, Implies(criterion_formula(j), transform_Q(j.formula)))


def instrumented(j: Judgement) -> KripkeStructure:
    tasks = {}
    if j.criterion.kind == "pr":
        tasks = {"*all*": frozenset(range(len(j.model.transitions)))}
    elif j.criterion.kind in ("wf", "sf"):
        tasks = j.criterion.task_map(j.model)
    return instrument(j.model, j.B, j.E, tasks)


def _fairness_normal_form(f: Formula) -> Formula:
    """G(F G x | F y) becomes F G x | G F y and G(F x | F y) becomes G F(x | y).

    Both are LTL equivalences on infinite paths; they keep the automata for
    the fairness premises small without changing what is checked.
    """
    if f.op != "R" or f.args[0] != FALSE or f.args[1].op != "or":
        return f
    a, b = f.args[1].args
    if not (_is_eventually(a) and _is_eventually(b)):
        return f
    x, y = a.args[1], b.args[1]
    if _is_always(y) and not _is_always(x):
        x, y = y, x
    if _is_always(x) and not _is_always(y):
        return Formula("or", Formula("U", TRUE, x), Formula("R", FALSE, Formula("U", TRUE, y)))
    return Formula("R", FALSE, Formula("U", TRUE, Formula("or", x, y)))


def _is_eventually(f: Formula) -> bool:
    return f.op == "U" and f.args[0] == TRUE


def _is_always(f: Formula) -> bool:
    return f.op == "R" and f.args[0] == FALSE


def standard_check(k: KripkeStructure, f: Formula, initial: Optional[Sequence[int]] = None
                   ) -> Tuple[bool, Optional[KPath]]:
    """Plain LTL model checking: do all infinite paths of ``k`` satisfy ``f``?

    Only the automaton construction is shared with the reactive checker;
    acceptance is ordinary generalized Buchi, and a failing answer comes with
    a lasso of ``k`` that the evaluator confirms.
    """
    # one automaton per top-level conjunct of the negation, run in lockstep
    parts = [Tableau(_fairness_normal_form(c)) for c in conjuncts(nnf(Not(f)))] or [Tableau(TRUE)]
    shifts = []
    width = 0
    for tab in parts:
        shifts.append(width)
        width += len(tab.untils)
    all_acc = (1 << width) - 1
    joint: Dict[Tuple[Tuple[int, ...], FrozenSet[str]], List[Tuple[Tuple[int, ...], int]]] = {}

    def successors(qs, val):
        hit = joint.get((qs, val))
        if hit is None:
            hit = [((), 0)]
            for tab, q, shift in zip(parts, qs, shifts):
                hit = [(nq + (q2,), bits | (b2 << shift))
                       for nq, bits in hit for q2, b2 in tab.successors(q, val)]
            joint[(qs, val)] = hit
        return hit

    starts = [k.initial] if initial is None else list(initial)
    index: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    nodes: List[Tuple[int, Tuple[int, ...]]] = []
    succ: List[Dict[int, int]] = []
    valuations = [frozenset(v) for v in k.valuation]

    def node(key):
        idx = index.get(key)
        if idx is None:
            idx = index[key] = len(nodes)
            nodes.append(key)
            succ.append({})
        return idx

    roots = [node((s, (0,) * len(parts))) for s in starts]
    p = 0
    while p < len(nodes):
        kn, qs = nodes[p]
        out = succ[p]
        for nxt, bits in successors(qs, valuations[kn]):
            for dst, _ in k.succ[kn]:
                d = node((dst, nxt))
                out[d] = out.get(d, 0) | bits
        p += 1

    g = nx.DiGraph()
    g.add_nodes_from(range(len(nodes)))
    g.add_edges_from((a, b) for a, out in enumerate(succ) for b in out)
    for comp in sorted(nx.strongly_connected_components(g), key=min):
        inner = [(a, b, bits) for a in comp for b, bits in succ[a].items() if b in comp]
        if not inner:
            continue
        marks = 0
        for _, _, bits in inner:
            marks |= bits
        if marks != all_acc:
            continue
        c0 = min(comp)
        stem = _bfs_path(succ, roots, c0, None)
        # a cycle from c0 through an edge carrying each acceptance mark
        cycle = [c0]
        have = 0
        for i in range(width):
            if (have >> i) & 1:
                continue
            a, b, bits = min(e for e in inner if (e[2] >> i) & 1)
            seg = _bfs_path(succ, [cycle[-1]], a, comp) + [b]
            for x, y in zip(seg, seg[1:]):
                have |= succ[x][y]
            cycle += seg[1:]
        if len(cycle) == 1:
            cycle.append(min(b for a, b, _ in inner if a == c0))
        cycle += _bfs_path(succ, [cycle[-1]], c0, comp)[1:]
        knodes = [nodes[p][0] for p in stem[:-1] + cycle[:-1]]
        return False, KPath(tuple(knodes), len(stem) - 1)
    return True, None


def _bfs_path(succ: List[Dict[int, int]], sources: Sequence[int], target: int,
              within: Optional[Set[int]]) -> List[int]:
    """Shortest path from one of ``sources`` to ``target``, staying ``within`` if given."""
    parent: Dict[int, Optional[int]] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        a = queue.popleft()
        if a == target:
            path = [a]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for b in succ[a]:
            if b not in parent and (within is None or b in within):
                parent[b] = a
                queue.append(b)
    raise ValueError("target unreachable")


def translation_oracle(j: Judgement, stem_bound: Optional[int] = None, cycle_bound: Optional[int] = None,
                       literal: bool = False) -> Verdict:
    """Check the translated standard formula on K-hat.

    Without bounds this is plain LTL model checking of K-hat; with bounds it
    enumerates paths pi^infinity for Kripke paths pi within the bounds
    (measured in Kripke steps) and evaluates the formula on each.
    """
    khat = instrumented(j)
    phi = translation_formula(j, literal)
    if stem_bound is None:
        holds, witness = standard_check(khat, phi)
        if witness is not None and evaluate(khat.trace(witness), phi):
            raise AssertionError("witness does not falsify the translated formula")
        return Verdict(holds, None, {"kripke_path": witness})
    for kpath in enumerate_kripke_paths(khat, stem_bound, cycle_bound):
        trace = khat.trace(embed_infinite(kpath))
        if not evaluate(trace, phi):
            return Verdict(False, None, {"kripke_path": kpath})
    return Verdict(True, None, {}, exhaustive=False)


def enumerate_kripke_paths(k: KripkeStructure, stem_bound: int, cycle_bound: int) -> Iterator[KPath]:
    """Finite paths and lassos of the structure without its added self-loops."""
    def succ(n):
        return [d for d, _ in k.succ[n] if d != n]

    nodes: List[int] = [k.initial]

    def cycles(start):
        trail: List[int] = []

        def dfs(n, budget):
            for d in succ(n):
                if d == start:
                    yield list(trail)
                if budget > 1:
                    trail.append(d)
                    yield from dfs(d, budget - 1)
                    trail.pop()

        yield from dfs(start, cycle_bound)

    def walk(n, depth):
        yield KPath(tuple(nodes))
        for cyc in cycles(n):
            loop = len(nodes) - 1
            yield KPath(tuple(nodes + cyc), loop)
        if depth < stem_bound:
            for d in succ(n):
                nodes.append(d)
                yield from walk(d, depth + 1)
                nodes.pop()

    yield from walk(k.initial, 0)


# -- hierarchy and counting ------------------------------------------------------

LADDER = ("pr", "j", "wf", "sf")
AXES = {
    "fs": (("request", ("FS1",)), ("granting", ("FS2",))),
    "me": (("request", ("ME6",)), ("granting", ("ME3",))),
}


def weakest_criterion(judgements: Sequence[Judgement]) -> Optional[str]:
    """The weakest criterion on the ladder under which all judgements hold."""
    for kind in LADDER:
        ok = True
        for j in judgements:
            jj = Judgement(j.model, j.formula, Criterion(kind, j.criterion.tasks), j.B, j.E, j.kripke)
            if not complete_paths_semantics(jj).holds:
                ok = False
                break
        if ok:
            return kind
    return None


def check_counting_FS3(lts: Ltsc, r: str, t: str, cap: int = 8) -> Verdict:
    """Fail iff some reachable partial trace has more t than r occurrences."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    start = (lts.initial, 0)
    parent: Dict[Tuple[int, int], Optional[Tuple[Tuple[int, int], int]]] = {start: None}
    queue = deque([start])
    saturated = False
    while queue:
        s, d = queue.popleft()
        for tid in lts.out[s]:
            tr = lts.transitions[tid]
            nd = d + (tr.label == r) - (tr.label == t)
            if nd < 0:
                trail = [tid]
                node = (s, d)
                while parent[node] is not None:
                    node, via = parent[node]
                    trail.append(via)
                return Verdict(False, LtsPath(lts.initial, tuple(reversed(trail))), {"saturated": saturated})
            if nd > cap:
                nd = cap
                saturated = True
            nxt = (tr.target, nd)
            if nxt not in parent:
                parent[nxt] = ((s, d), tid)
                queue.append(nxt)
    return Verdict(True, None, {"saturated": saturated}, exhaustive=not saturated)


def classify_hierarchy(lts: Ltsc, role: str, tasks: Optional[Mapping[str, Iterable[int]]] = None
                       ) -> Dict[str, Optional[str]]:
    """Weakest criterion on each axis of the quality hierarchy, or None."""
    from .models.requirements import me_indices_of, requirement

    if role not in AXES:
        raise ValueError("role must be 'fs' or 'me'")
    base = Criterion("pr")
    if tasks is not None:
        base = base.with_tasks(tasks)
    if role == "me":
        idx = me_indices_of(lts.labels)
        specs = lambda names: [requirement(n, i, indices=idx) for n in names for i in idx]
    else:
        specs = lambda names: [requirement(n, i) for n in names for i in ("1", "2")]
    out = {}
    for axis, names in AXES[role]:
        js = [Judgement(lts, r.formula, base, r.B, r.E if role == "me" else None) for r in specs(names)]
        out[axis] = weakest_criterion(js)
    return out
