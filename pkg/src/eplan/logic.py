"""Fluents, agents and the belief-formula language.

Formulas are immutable trees built from the classes below. The concrete
syntax is s-expression based::

    (B a (C (a b) (not opened)))
    (and heads (imply key_a (E (a b) key_a)))

``and``/``or`` accept one or more arguments and are right-folded into
the binary tree, so printing always produces the binary form.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import ParseError, UnknownSymbolError
from .sexpr import position, read_one


def intern_name(name: str) -> str:
    return sys.intern(str(name).lower())


@dataclass(frozen=True)
class Signature:
    """The finite fluent set F and agent set AG of a problem."""

    fluents: tuple
    agents: tuple

    def __post_init__(self):
        fluents = tuple(dict.fromkeys(intern_name(f) for f in self.fluents))
        agents = tuple(dict.fromkeys(intern_name(a) for a in self.agents))
        if not agents:
            raise ValueError("the agent set must be nonempty")
        object.__setattr__(self, "fluents", fluents)
        object.__setattr__(self, "agents", agents)


class Formula:
    """Base class of the formula AST."""

    __slots__ = ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class B(Formula):
    """Agent ``agent`` believes (or knows) ``arg``."""

    agent: str
    arg: Formula


@dataclass(frozen=True, slots=True)
class E(Formula):
    """Everybody in ``agents`` believes ``arg``."""

    agents: frozenset
    arg: Formula

    def __post_init__(self):
        if not self.agents:
            raise ValueError("E requires a nonempty agent group")


@dataclass(frozen=True, slots=True)
class C(Formula):
    """Common belief of ``agents`` in ``arg``."""

    agents: frozenset
    arg: Formula

    def __post_init__(self):
        if not self.agents:
            raise ValueError("C requires a nonempty agent group")


TRUE = Top()
FALSE = Bottom()

_BINARY = {And: "and", Or: "or", Implies: "imply"}
_MODAL = (B, E, C)


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Right-fold ``parts`` with And; the empty conjunction is True."""
    parts = list(parts)
    if not parts:
        return TRUE
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result = And(p, result)
    return result


def disjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result = Or(p, result)
    return result


def conjuncts(f: Formula) -> list:
    """Top-level conjuncts of ``f``; a non-conjunction is its own only conjunct."""
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


def children(f: Formula) -> tuple:
    if isinstance(f, (Top, Bottom, Atom)):
        return ()
    if isinstance(f, (And, Or, Implies)):
        return (f.left, f.right)
    return (f.arg,)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every node of ``f`` in pre-order."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def is_fluent_formula(f: Formula) -> bool:
    return not any(isinstance(g, _MODAL) for g in subformulas(f))


def evaluate_propositional(f: Formula, true_fluents) -> bool:
    """Truth of a fluent formula under the valuation ``true_fluents``."""
    if isinstance(f, Atom):
        return f.name in true_fluents
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate_propositional(f.arg, true_fluents)
    if isinstance(f, And):
        return evaluate_propositional(f.left, true_fluents) and evaluate_propositional(f.right, true_fluents)
    if isinstance(f, Or):
        return evaluate_propositional(f.left, true_fluents) or evaluate_propositional(f.right, true_fluents)
    if isinstance(f, Implies):
        return not evaluate_propositional(f.left, true_fluents) or evaluate_propositional(f.right, true_fluents)
    raise ValueError(f"not a fluent formula: {format_formula(f)}")


def modal_depth(f: Formula) -> int:
    if isinstance(f, _MODAL):
        return 1 + modal_depth(f.arg)
    return max((modal_depth(c) for c in children(f)), default=0)


def atoms_of(f: Formula) -> set:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def agents_of(f: Formula) -> set:
    out = set()
    for g in subformulas(f):
        if isinstance(g, B):
            out.add(g.agent)
        elif isinstance(g, (E, C)):
            out.update(g.agents)
    return out


def check_symbols(f: Formula, fluents, agents) -> None:
    """Raise UnknownSymbolError if ``f`` mentions names outside the signature."""
    bad_f = atoms_of(f) - set(fluents)
    if bad_f:
        raise UnknownSymbolError(f"unknown fluent(s): {', '.join(sorted(bad_f))}")
    bad_a = agents_of(f) - set(agents)
    if bad_a:
        raise UnknownSymbolError(f"unknown agent(s): {', '.join(sorted(bad_a))}")


# -- printing ---------------------------------------------------------------


def format_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return f"(not {format_formula(f.arg)})"
    if isinstance(f, (And, Or, Implies)):
        op = _BINARY[type(f)]
        return f"({op} {format_formula(f.left)} {format_formula(f.right)})"
    if isinstance(f, B):
        return f"(B {f.agent} {format_formula(f.arg)})"
    op = "E" if isinstance(f, E) else "C"
    group = " ".join(sorted(f.agents))
    return f"({op} ({group}) {format_formula(f.arg)})"


# -- parsing ----------------------------------------------------------------

AtomResolver = Callable[[object], str]


class _FormulaReader:
    def __init__(self, fluents, agents, source=None, atom_resolver=None, agent_resolver=None):
        # fluents=None accepts any resolved name (schema-level checking)
        self.fluents = None if fluents is None else set(fluents)
        self.agents = set(agents)
        self.source = source
        self.atom_resolver = atom_resolver
        self.agent_resolver = agent_resolver

    def fail(self, message, node, cls=ParseError):
        line, col = position(node)
        if cls is ParseError:
            raise ParseError(message, line, col, self.source)
        where = f" at {line}:{col}" if line is not None else ""
        raise cls(f"{message}{where}")

    def agent(self, node):
        if isinstance(node, list):
            self.fail("expected an agent name", node)
        name = self.agent_resolver(node) if self.agent_resolver else str(node)
        if name not in self.agents:
            self.fail(f"unknown agent '{name}'", node, UnknownSymbolError)
        return intern_name(name)

    def group(self, node):
        if not isinstance(node, list):
            self.fail("expected a parenthesised agent group", node)
        if not node:
            self.fail("empty agent group", node)
        return frozenset(self.agent(x) for x in node)

    def atom(self, node):
        if self.atom_resolver is not None:
            name = self.atom_resolver(node)
        elif isinstance(node, list):
            self.fail(f"unknown operator '{node[0] if node else ''}'", node)
        else:
            name = str(node)
        if self.fluents is not None and name not in self.fluents:
            self.fail(f"unknown fluent '{name}'", node, UnknownSymbolError)
        return Atom(intern_name(name))

    def read(self, node) -> Formula:
        if not isinstance(node, list):
            if node == "true":
                return TRUE
            if node == "false":
                return FALSE
            return self.atom(node)
        if not node:
            self.fail("empty expression", node)
        head = node[0]
        args = node[1:]
        if isinstance(head, list):
            self.fail("operator expected", node)
        if head == "not":
            if len(args) != 1:
                self.fail("'not' takes exactly one argument", node)
            return Not(self.read(args[0]))
        if head in ("and", "or"):
            if not args:
                self.fail(f"'{head}' needs at least one argument", node)
            parts = [self.read(a) for a in args]
            return conjoin(parts) if head == "and" else disjoin(parts)
        if head == "imply":
            if len(args) != 2:
                self.fail("'imply' takes exactly two arguments", node)
            return Implies(self.read(args[0]), self.read(args[1]))
        if head == "b":
            if len(args) != 2:
                self.fail("'B' takes an agent and a formula", node)
            return B(self.agent(args[0]), self.read(args[1]))
        if head in ("e", "c"):
            if len(args) != 2:
                self.fail(f"'{head.upper()}' takes an agent group and a formula", node)
            cls = E if head == "e" else C
            return cls(self.group(args[0]), self.read(args[1]))
        return self.atom(node)


def read_formula(node, fluents, agents, source=None, atom_resolver=None, agent_resolver=None) -> Formula:
    """Convert an already-read s-expression into a Formula."""
    reader = _FormulaReader(fluents, agents, source, atom_resolver, agent_resolver)
    return reader.read(node)


def parse_formula(text: str, signature: Signature, source=None) -> Formula:
    """Parse ``text`` against ``signature``.

    Raises ParseError (with line and column) on malformed input and
    UnknownSymbolError on names outside the signature.
    """
    node = read_one(text, source)
    return read_formula(node, signature.fluents, signature.agents, source)


__all__ = [
    "Signature", "Formula", "Top", "Bottom", "Atom", "Not", "And", "Or", "Implies",
    "B", "E", "C", "TRUE", "FALSE", "conjoin", "disjoin", "conjuncts", "subformulas",
    "is_fluent_formula", "evaluate_propositional", "modal_depth", "atoms_of", "agents_of", "check_symbols",
    "format_formula", "parse_formula", "read_formula", "intern_name",
]
