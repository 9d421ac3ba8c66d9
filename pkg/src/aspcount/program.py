"""Ground program data model and the textual parser.

Accepted syntax, one statement per ``.``::

    a :- b, not c.
    a | b.
    :- a, not b.

``%`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Atom",
    "Rule",
    "Program",
    "ParseError",
    "parse_program",
    "render_program",
    "is_constraint",
    "is_disjunctive",
    "is_normal",
]

ATOM_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>%[^\n]*)"
    r"|(?P<if>:-)|(?P<bar>\|)|(?P<comma>,)|(?P<dot>\.)"
    r"|(?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Atom:
    id: int
    name: str


@dataclass(frozen=True)
class Rule:
    """A ground rule ``head :- pos, not neg``; all three parts hold atom ids."""

    head: frozenset[int] = frozenset()
    pos: frozenset[int] = frozenset()
    neg: frozenset[int] = frozenset()

    @property
    def body_size(self) -> int:
        return len(self.pos) + len(self.neg)


@dataclass(frozen=True)
class Program:
    atoms: tuple[str, ...] = ()
    rules: tuple[Rule, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {name: i for i, name in enumerate(self.atoms)}
        if len(index) != len(self.atoms):
            raise ValueError("duplicate atom names in atom table")
        n = len(self.atoms)
        for r in self.rules:
            for a in r.head | r.pos | r.neg:
                if not 0 <= a < n:
                    raise ValueError(f"rule references unknown atom id {a}")
        object.__setattr__(self, "_index", index)

    @property
    def num_atoms(self) -> int:
        return len(self.atoms)

    def atom(self, name: str) -> Atom:
        return Atom(self._index[name], name)

    def atom_id(self, name: str) -> int:
        return self._index[name]

    def interpretation(self, names: Iterable[str]) -> frozenset[int]:
        """Map atom names to the frozenset-of-ids interpretation form."""
        return frozenset(self._index[n] for n in names)

    def names(self, interp: Iterable[int]) -> list[str]:
        return [self.atoms[i] for i in sorted(interp)]

    def __str__(self) -> str:
        return render_program(self)


def is_constraint(r: Rule) -> bool:
    return not r.head


def is_disjunctive(p: Program) -> bool:
    return any(len(r.head) >= 2 for r in p.rules)


def is_normal(p: Program) -> bool:
    return all(len(r.head) <= 1 for r in p.rules)


def parse_program(text: str) -> Program:
    """Parse ground program text; atom ids follow first textual occurrence."""
    tokens = _tokenize(text)
    atoms: dict[str, int] = {}
    rules: list[Rule] = []

    def intern(name: str) -> int:
        if name not in atoms:
            atoms[name] = len(atoms)
        return atoms[name]

    i = 0
    while tokens[i][0] != "eof":
        kind, value, line, col = tokens[i]
        start_line, start_col = line, col
        head: set[int] = set()
        pos: set[int] = set()
        neg: set[int] = set()
        has_body = False
        if kind == "ident":
            if value == "not":
                raise ParseError("'not' is not allowed in a rule head", line, col)
            head.add(intern(value))
            i += 1
            while tokens[i][0] == "bar":
                i += 1
                kind, value, line, col = tokens[i]
                if kind != "ident" or value == "not":
                    raise ParseError("expected atom after '|'", line, col)
                head.add(intern(value))
                i += 1
        if tokens[i][0] == "if":
            has_body = True
            i += 1
            while True:
                kind, value, line, col = tokens[i]
                if kind != "ident":
                    raise ParseError("expected literal", line, col)
                negated = False
                if value == "not":
                    negated = True
                    i += 1
                    kind, value, line, col = tokens[i]
                    if kind != "ident" or value == "not":
                        raise ParseError("expected atom after 'not'", line, col)
                (neg if negated else pos).add(intern(value))
                i += 1
                if tokens[i][0] == "comma":
                    i += 1
                    continue
                break
        kind, value, line, col = tokens[i]
        if not head and not has_body:
            raise ParseError("empty statement", start_line, start_col)
        if kind != "dot":
            raise ParseError(f"expected '.' but found {value or kind!r}", line, col)
        i += 1
        rules.append(Rule(frozenset(head), frozenset(pos), frozenset(neg)))
    return Program(tuple(atoms), tuple(rules))


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append((kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


def _render_rule(p: Program, r: Rule) -> str:
    head = " | ".join(p.atoms[a] for a in sorted(r.head))
    # body literals sorted by atom id so that re-parsing reproduces the id order
    lits = sorted([(a, 0) for a in r.pos] + [(a, 1) for a in r.neg])
    body = ", ".join(("not " if neg else "") + p.atoms[a] for a, neg in lits)
    if not body:
        return f"{head}."
    if not head:
        return f":- {body}."
    return f"{head} :- {body}."


def render_program(p: Program) -> str:
    return "".join(_render_rule(p, r) + "\n" for r in p.rules)


def make_program(atoms: Sequence[str], rules: Iterable[tuple]) -> Program:
    """Build a program from name-level triples ``(head, pos, neg)``."""
    index = {name: i for i, name in enumerate(atoms)}
    built = [
        Rule(*(frozenset(index[n] for n in part) for part in triple)) for triple in rules
    ]
    return Program(tuple(atoms), tuple(built))
