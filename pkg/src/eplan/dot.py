"""Graphviz rendering of e-states."""

from __future__ import annotations

from .kripke import bisim_contract
from .possibility import Possibility, to_kripke


def _quote(s):
    s = s.replace("\\", "\\\\").replace('"', r"\"").replace("\n", r"\n")
    return f'"{s}"'


def emit_dot(state, name="estate") -> str:
    """DOT digraph of ``state`` after contraction.

    Nodes are labelled with their true fluents, the designated world is
    double-circled, and each edge carries one agent label. Bisimilar
    inputs yield byte-identical text.
    """
    if isinstance(state, Possibility):
        state = to_kripke(state)
    q = bisim_contract(state)
    m = q.structure
    out = [f"digraph {_quote(name)} {{\n", "  rankdir=LR;\n"]
    for w, v in enumerate(m.valuations):
        shape = "doublecircle" if w == q.designated else "circle"
        label = "\n".join(sorted(v)) if v else "{}"
        out.append(f"  w{w} [shape={shape}, label={_quote(label)}];\n")
    for a in sorted(m.agents):
        for s, t in sorted(m.relations[a]):
            out.append(f"  w{s} -> w{t} [label={_quote(a)}];\n")
    out.append("}\n")
    return "".join(out)
