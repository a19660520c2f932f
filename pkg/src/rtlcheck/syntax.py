"""Abstract syntax, concrete syntax and well-formedness of CCS_t terms.

Action labels are plain strings: ``"a"`` is a name, ``"'a"`` its coname,
``"tau"`` the silent action and ``"t"`` the time-out action.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

TAU = "tau"
TIMEOUT = "t"
RESERVED = frozenset({TAU, TIMEOUT, "main", "signals"})


# -- action labels -----------------------------------------------------------

def is_coname(label: str) -> bool:
    return label.startswith("'")


def is_name(label: str) -> bool:
    return label not in (TAU, TIMEOUT) and not label.startswith("'")


def is_visible(label: str) -> bool:
    return label not in (TAU, TIMEOUT)


def base_name(label: str) -> str:
    """The name underlying a name or coname label."""
    if not is_visible(label):
        raise ValueError("%s has no underlying name" % label)
    return label[1:] if is_coname(label) else label


def complement(label: str) -> str:
    if label in (TAU, TIMEOUT):
        raise ValueError("complement is undefined on %s" % label)
    return label[1:] if is_coname(label) else "'" + label


# -- process terms -----------------------------------------------------------

@dataclass(frozen=True)
class Summand:
    label: str
    tag: Optional[str]
    cont: "Process"


@dataclass(frozen=True)
class GuardedChoice:
    summands: Tuple[Summand, ...] = ()


@dataclass(frozen=True)
class Parallel:
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Restriction:
    proc: "Process"
    names: FrozenSet[str]


@dataclass(frozen=True)
class Relabelling:
    proc: "Process"
    mapping: Tuple[Tuple[str, str], ...]

    def apply(self, label: str) -> str:
        if not is_visible(label):
            return label
        table = dict(self.mapping)
        target = table.get(base_name(label), base_name(label))
        return "'" + target if is_coname(label) else target


@dataclass(frozen=True)
class Identifier:
    name: str


Process = Union[GuardedChoice, Parallel, Restriction, Relabelling, Identifier]

NIL = GuardedChoice(())


def prefix(label: str, cont: Process = NIL, tag: Optional[str] = None) -> GuardedChoice:
    return GuardedChoice((Summand(label, tag, cont),))


def choice(*procs: GuardedChoice) -> GuardedChoice:
    out: List[Summand] = []
    for p in procs:
        out.extend(p.summands)
    return GuardedChoice(tuple(out))


def restrict(p: Process, names) -> Restriction:
    return Restriction(p, frozenset(names))


def relabel(p: Process, mapping: Dict[str, str]) -> Relabelling:
    return Relabelling(p, tuple(sorted(mapping.items())))


@dataclass
class Definitions:
    defs: Dict[str, Process] = field(default_factory=dict)
    signals: FrozenSet[str] = frozenset()

    def __getitem__(self, name: str) -> Process:
        return self.defs[name]


# -- canonical form ----------------------------------------------------------

def canonical(p: Process) -> Process:
    """Sort choice summands so that states are identified up to summand order."""
    if isinstance(p, GuardedChoice):
        summands = [Summand(s.label, s.tag, canonical(s.cont)) for s in p.summands]
        summands.sort(key=lambda s: (s.label, s.tag or "", pretty(s.cont)))
        return GuardedChoice(tuple(summands))
    if isinstance(p, Parallel):
        return Parallel(canonical(p.left), canonical(p.right))
    if isinstance(p, Restriction):
        return Restriction(canonical(p.proc), p.names)
    if isinstance(p, Relabelling):
        return Relabelling(canonical(p.proc), p.mapping)
    return p


def canonical_definitions(defs: Definitions) -> Definitions:
    return Definitions({k: canonical(v) for k, v in defs.defs.items()}, defs.signals)


def subterms(p: Process) -> Iterator[Process]:
    yield p
    if isinstance(p, GuardedChoice):
        for s in p.summands:
            yield from subterms(s.cont)
    elif isinstance(p, Parallel):
        yield from subterms(p.left)
        yield from subterms(p.right)
    elif isinstance(p, (Restriction, Relabelling)):
        yield from subterms(p.proc)


def tags_of(p: Process) -> List[str]:
    return [s.tag for q in subterms(p) if isinstance(q, GuardedChoice)
            for s in q.summands if s.tag is not None]


# -- printing ----------------------------------------------------------------

_PAR, _CHOICE, _UNARY, _ATOM = range(4)


def _wrap(text: str, needed: bool) -> str:
    return "(" + text + ")" if needed else text


def _summand_text(s: Summand) -> str:
    head = s.label + ("@" + s.tag if s.tag else "")
    return head + "." + _show(s.cont, _UNARY)


def _show(p: Process, level: int) -> str:
    if isinstance(p, Identifier):
        return p.name
    if isinstance(p, GuardedChoice):
        if not p.summands:
            return "0"
        if len(p.summands) == 1:
            return _wrap(_summand_text(p.summands[0]), level >= _ATOM)
        text = " + ".join(_summand_text(s) for s in p.summands)
        return _wrap(text, level > _CHOICE)
    if isinstance(p, Parallel):
        text = _show(p.left, _PAR) + " | " + _show(p.right, _CHOICE)
        return _wrap(text, level > _PAR)
    if isinstance(p, Restriction):
        return _show(p.proc, _ATOM) + "\\{" + ",".join(sorted(p.names)) + "}"
    if isinstance(p, Relabelling):
        pairs = ",".join("%s->%s" % kv for kv in p.mapping)
        return _show(p.proc, _ATOM) + "[" + pairs + "]"
    raise TypeError("not a process: %r" % (p,))


def pretty(p: Process) -> str:
    return _show(p, _PAR)


def pretty_definitions(defs: Definitions, root: Process) -> str:
    lines = []
    if defs.signals:
        lines.append("signals " + ",".join(sorted(defs.signals)) + ";")
    for name, body in defs.defs.items():
        lines.append("%s = %s;" % (name, pretty(body)))
    lines.append("main = %s;" % pretty(root))
    return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__("%d:%d: %s" % (line, column, message))
        self.line = line
        self.column = column


class ValidationError(ValueError):
    def __init__(self, problems: List[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<zero>0)
  | (?P<arrow>->)
  | (?P<punct>[.+|\\{}\[\],;=@()'])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str) -> List[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError("unexpected character %r" % source[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            toks.append(_Tok(kind if kind != "punct" else text, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error("expected %r, found %r" % (kind, tok.text or "end of input"))
        return self.next()

    def name(self) -> str:
        tok = self.expect("ident")
        if tok.text in RESERVED:
            raise self.error("reserved word %r used as a name" % tok.text, tok)
        return tok.text

    # grammar

    def _end_of_definition(self) -> None:
        # the last definition may omit its semicolon
        if self.peek().kind != "eof":
            self.expect(";")

    def file(self) -> Tuple[Definitions, Process]:
        defs = Definitions()
        signals = set()
        root = None
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "ident" and tok.text == "signals":
                self.next()
                signals.add(self.name())
                while self.peek().kind == ",":
                    self.next()
                    signals.add(self.name())
                self.expect(";")
                continue
            if tok.kind == "ident" and tok.text == "main":
                self.next()
                self.expect("=")
                if root is not None:
                    raise self.error("main defined twice", tok)
                root = self.par()
                self._end_of_definition()
                continue
            name = self.name()
            self.expect("=")
            if name in defs.defs:
                raise self.error("identifier %s defined twice" % name, tok)
            defs.defs[name] = self.par()
            self._end_of_definition()
        if root is None:
            raise self.error("missing 'main = P;'")
        defs.signals = frozenset(signals)
        return defs, root

    def par(self) -> Process:
        left = self.choice()
        while self.peek().kind == "|":
            self.next()
            left = Parallel(left, self.choice())
        return left

    def choice(self) -> Process:
        first_tok = self.peek()
        first = self.unary()
        if self.peek().kind != "+":
            return first
        parts = [(first_tok, first)]
        while self.peek().kind == "+":
            self.next()
            parts.append((self.peek(), self.unary()))
        summands: List[Summand] = []
        for tok, p in parts:
            if not isinstance(p, GuardedChoice):
                raise self.error("only guarded choice is supported", tok)
            summands.extend(p.summands)
        return GuardedChoice(tuple(summands))

    def at_action(self) -> bool:
        tok = self.peek()
        if tok.kind == "'":
            return True
        return tok.kind == "ident" and self.peek(1).kind in (".", "@")

    def action(self) -> str:
        if self.peek().kind == "'":
            self.next()
            return "'" + self.name()
        tok = self.expect("ident")
        if tok.text in ("main", "signals"):
            raise self.error("reserved word %r used as an action" % tok.text, tok)
        return tok.text

    def unary(self) -> Process:
        if self.at_action():
            label = self.action()
            tag = None
            if self.peek().kind == "@":
                self.next()
                tag = self.expect("ident").text
            self.expect(".")
            return GuardedChoice((Summand(label, tag, self.unary()),))
        return self.postfix(self.atom())

    def atom(self) -> Process:
        tok = self.peek()
        if tok.kind == "zero":
            self.next()
            return NIL
        if tok.kind == "(":
            self.next()
            p = self.par()
            self.expect(")")
            return p
        if tok.kind == "ident":
            return Identifier(self.name())
        raise self.error("expected a process, found %r" % (tok.text or "end of input"))

    def postfix(self, p: Process) -> Process:
        while True:
            kind = self.peek().kind
            if kind == "\\":
                self.next()
                self.expect("{")
                names = []
                if self.peek().kind != "}":
                    names.append(self.name())
                    while self.peek().kind == ",":
                        self.next()
                        names.append(self.name())
                self.expect("}")
                p = Restriction(p, frozenset(names))
            elif kind == "[":
                self.next()
                pairs = []
                while True:
                    src = self.name()
                    self.expect("arrow")
                    pairs.append((src, self.name()))
                    if self.peek().kind != ",":
                        break
                    self.next()
                self.expect("]")
                if len({s for s, _ in pairs}) != len(pairs):
                    raise self.error("relabelling maps a name twice")
                p = Relabelling(p, tuple(sorted(pairs)))
            else:
                return p


def parse(source: str) -> Tuple[Definitions, Process]:
    """Parse a ``.ccst`` model and check it is well formed."""
    defs, root = _Parser(source).file()
    validate(defs, root)
    return defs, root


def parse_process(source: str) -> Process:
    """Parse a single process expression (no validation)."""
    parser = _Parser(source)
    if parser.peek().kind == "eof":
        return NIL
    p = parser.par()
    parser.expect("eof")
    return p


# -- validation --------------------------------------------------------------

def validate(defs: Definitions, p: Process) -> None:
    """Raise ValidationError listing every problem found."""
    problems: List[str] = []
    bodies = [("main", p)] + list(defs.defs.items())
    for owner, body in bodies:
        for q in subterms(body):
            if isinstance(q, Identifier) and q.name not in defs.defs:
                problems.append("unbound identifier %s (in %s)" % (q.name, owner))
            elif isinstance(q, Relabelling):
                seen = set()
                for src, dst in q.mapping:
                    for n in (src, dst):
                        if not is_name(n):
                            problems.append("relabelling in %s maps non-name %s" % (owner, n))
                    if src in seen:
                        problems.append("relabelling in %s maps %s twice" % (owner, src))
                    seen.add(src)
            elif isinstance(q, Restriction):
                for n in sorted(q.names):
                    if not is_name(n):
                        problems.append("restriction in %s contains non-name %s" % (owner, n))
    problems.extend(_signal_problems(defs, p))
    if problems:
        raise ValidationError(sorted(set(problems), key=problems.index))


def _signal_problems(defs: Definitions, root: Process) -> List[str]:
    if not defs.signals:
        return []
    allowed = set()
    for name, body in defs.defs.items():
        if isinstance(body, GuardedChoice):
            for s in body.summands:
                if s.cont == Identifier(name):
                    allowed.add(id(s))
    problems = []
    for owner, body in [("main", root)] + list(defs.defs.items()):
        for q in subterms(body):
            if not isinstance(q, GuardedChoice):
                continue
            for s in q.summands:
                if is_coname(s.label) and base_name(s.label) in defs.signals and id(s) not in allowed:
                    problems.append("signal %s emitted in %s is not a register self-loop"
                                    % (base_name(s.label), owner))
    return problems
