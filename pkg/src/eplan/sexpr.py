"""Minimal s-expression reader with source positions.

Symbols are lower-cased; ``;`` starts a comment running to end of line.
"""

from __future__ import annotations

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


class Sym(str):
    """A lower-cased symbol remembering where it was read."""

    line: int
    col: int

    def __new__(cls, text, line=0, col=0):
        obj = super().__new__(cls, text.lower())
        obj.line = line
        obj.col = col
        return obj


class SList(list):
    """A parenthesised list remembering the position of its open paren."""

    def __init__(self, items=(), line=0, col=0):
        super().__init__(items)
        self.line = line
        self.col = col


def position(node):
    return getattr(node, "line", None), getattr(node, "col", None)


def _tokens(text):
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        tok = m.group()
        col = pos - line_start + 1
        if not tok[0].isspace() and tok[0] != ";":
            yield tok, line, col
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()


def read_all(text, source=None):
    """Parse every top-level expression in ``text``."""
    stack = [SList()]
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append(SList(line=line, col=col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col, source)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(Sym(tok, line, col))
    if len(stack) > 1:
        opened = stack[-1]
        raise ParseError("unclosed '('", opened.line, opened.col, source)
    return list(stack[0])


def read_one(text, source=None):
    exprs = read_all(text, source)
    if len(exprs) != 1:
        raise ParseError(f"expected exactly one expression, found {len(exprs)}", 1, 1, source)
    return exprs[0]


def to_plain(node):
    """Strip position info: nested tuples of plain strings."""
    if isinstance(node, list):
        return tuple(to_plain(x) for x in node)
    return str(node)


def from_plain(node):
    """Inverse of :func:`to_plain` (positions are lost)."""
    if isinstance(node, (list, tuple)):
        return SList([from_plain(x) for x in node])
    return Sym(node)


def dumps(node):
    if isinstance(node, (list, tuple)):
        return "(" + " ".join(dumps(x) for x in node) + ")"
    return str(node)
