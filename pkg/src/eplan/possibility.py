"""Possibilities: e-states as maximally shared rooted graphs.

A possibility assigns a truth value to every fluent and, to every agent,
a set of possibilities. Since these sets may be non-well-founded, nodes
are kept in a :class:`PossibilityStore` that interns them by canonical
digest; two interned nodes are the same object exactly when they are
bisimilar.
"""

from __future__ import annotations

from collections import deque

from .kripke import KripkeStructure, PointedKripke, bisim_contract, canonical_digest
from .logic import (
    And, Atom, B, Bottom, C, E, Formula, Implies, Not, Or, Top, check_symbols, intern_name,
)


class Possibility:
    """One interned node. Compare with ``is``; equality is identity."""

    __slots__ = ("valuation", "_succ", "digest", "store", "__weakref__")

    def __init__(self, valuation, digest, store):
        self.valuation = valuation
        self.digest = digest
        self.store = store
        self._succ = None

    def successors(self, agent) -> frozenset:
        return self._succ[agent]

    def holds(self, fluent) -> bool:
        return fluent in self.valuation

    @property
    def agents(self):
        return self.store.agents

    @property
    def fluents(self):
        return self.store.fluents

    def __repr__(self):
        return f"<Possibility {sorted(self.valuation)} {self.digest[:10]}>"


class PossibilityStore:
    """Interning table for possibilities over one fluent/agent signature."""

    def __init__(self, fluents, agents):
        self.fluents = tuple(intern_name(f) for f in fluents)
        self.agents = tuple(intern_name(a) for a in agents)
        self._nodes = {}

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, digest):
        return digest in self._nodes

    def get(self, digest):
        return self._nodes.get(digest)

    def intern(self, state: PointedKripke) -> Possibility:
        """Return the node for the designated world of ``state``.

        Every world of the contracted state gets a node; worlds whose
        digest is already known reuse the existing node, which is sound
        because equal digests mean bisimilar sub-possibilities.
        """
        if state.structure.fluents != self.fluents or state.structure.agents != self.agents:
            raise ValueError("state signature does not match the store")
        q = bisim_contract(state)
        m = q.structure
        nodes = {}
        fresh = []
        for w in m.worlds:
            d = canonical_digest(PointedKripke(m, w))
            node = self._nodes.get(d)
            if node is None:
                node = Possibility(m.valuations[w], d, self)
                self._nodes[d] = node
                fresh.append(w)
            nodes[w] = node
        for w in fresh:
            nodes[w]._succ = {a: frozenset(nodes[t] for t in m.succ[a][w]) for a in m.agents}
        return nodes[q.designated]


_STORES = {}


def default_store(fluents, agents) -> PossibilityStore:
    key = (tuple(fluents), tuple(agents))
    store = _STORES.get(key)
    if store is None:
        store = _STORES[key] = PossibilityStore(*key)
    return store


def from_kripke(state: PointedKripke, store: PossibilityStore = None) -> Possibility:
    if store is None:
        store = default_store(state.structure.fluents, state.structure.agents)
    return store.intern(state)


def _enumerate(p: Possibility):
    order = [p]
    index = {p: 0}
    queue = deque([p])
    while queue:
        u = queue.popleft()
        for a in p.agents:
            for v in sorted(u.successors(a), key=lambda x: x.digest):
                if v not in index:
                    index[v] = len(order)
                    order.append(v)
                    queue.append(v)
    return order, index


def to_kripke(p: Possibility) -> PointedKripke:
    """Nodes reachable from ``p`` become worlds; ``p`` is world 0."""
    order, index = _enumerate(p)
    rels = {a: {(index[u], index[v]) for u in order for v in u.successors(a)} for a in p.agents}
    m = KripkeStructure(tuple(u.valuation for u in order), rels, p.agents, p.fluents)
    return PointedKripke(m, 0)


def entails_p(p: Possibility, f: Formula) -> bool:
    """Evaluate ``f`` directly on the possibility graph."""
    check_symbols(f, p.fluents, p.agents)
    return _Evaluator().holds(p, f)


class _Evaluator:
    def __init__(self):
        self.memo = {}

    def holds(self, u, f):
        key = (u, id(f))
        hit = self.memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(f, Atom):
            r = f.name in u.valuation
        elif isinstance(f, Top):
            r = True
        elif isinstance(f, Bottom):
            r = False
        elif isinstance(f, Not):
            r = not self.holds(u, f.arg)
        elif isinstance(f, And):
            r = self.holds(u, f.left) and self.holds(u, f.right)
        elif isinstance(f, Or):
            r = self.holds(u, f.left) or self.holds(u, f.right)
        elif isinstance(f, Implies):
            r = not self.holds(u, f.left) or self.holds(u, f.right)
        elif isinstance(f, B):
            r = all(self.holds(v, f.arg) for v in u.successors(f.agent))
        elif isinstance(f, E):
            r = all(self.holds(v, f.arg) for a in f.agents for v in u.successors(a))
        elif isinstance(f, C):
            r = all(self.holds(v, f.arg) for v in _closure(u, f.agents))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[key] = (f, r)
        return r


def _closure(u, agents):
    """``u`` and everything reachable from it through ``agents``' edges."""
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for a in agents:
            for v in x.successors(a):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return seen


def dump_p(p: Possibility) -> str:
    """Text listing in the same format as :func:`eplan.kripke.dump`."""
    order, index = _enumerate(p)
    lines = ["designated 0"]
    for i, u in enumerate(order):
        lines.append(f"world {i}: {' '.join(sorted(u.valuation))}".rstrip())
    for a in sorted(p.agents):
        edges = sorted((index[u], index[v]) for u in order for v in u.successors(a))
        lines.extend(f"edge {a} {s} {t}" for s, t in edges)
    return "\n".join(lines) + "\n"
