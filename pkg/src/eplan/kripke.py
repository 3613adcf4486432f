"""Pointed Kripke structures and their semantics.

World sets are handled as integer bitmasks: bit ``w`` set means world
``w`` belongs to the set. Entailment is computed globally, i.e. the
set of worlds satisfying each subformula is built once per query.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .logic import (
    And, Atom, B, Bottom, C, E, Formula, Implies, Not, Or, Top, check_symbols, intern_name,
)


@dataclass(frozen=True, eq=False)
class KripkeStructure:
    """Worlds ``0..n-1`` with a valuation and one relation per agent.

    ``valuations[w]`` is the set of fluents true at ``w``. ``relations``
    maps each agent to a frozenset of ``(source, target)`` pairs. When
    ``fluents`` or ``agents`` are omitted they are inferred.
    """

    valuations: tuple
    relations: Mapping
    agents: tuple = None
    fluents: tuple = None
    succ: dict = field(init=False, repr=False)

    def __post_init__(self):
        vals = tuple(frozenset(intern_name(f) for f in v) for v in self.valuations)
        if not vals:
            raise ValueError("a Kripke structure needs at least one world")
        agents = self.agents
        if agents is None:
            agents = sorted(self.relations)
        agents = tuple(dict.fromkeys(intern_name(a) for a in agents))
        fluents = self.fluents
        if fluents is None:
            fluents = sorted(set().union(*vals))
        fluents = tuple(dict.fromkeys(intern_name(f) for f in fluents))
        extra = set().union(*vals) - set(fluents)
        if extra:
            raise ValueError(f"valuation mentions undeclared fluents {sorted(extra)}")
        n = len(vals)
        rels = {}
        for a, pairs in self.relations.items():
            a = intern_name(a)
            if a not in agents:
                raise ValueError(f"relation given for undeclared agent {a!r}")
            rels[a] = frozenset((int(s), int(t)) for s, t in pairs)
        succ = {}
        for a in agents:
            rels.setdefault(a, frozenset())
            lists = [[] for _ in range(n)]
            for s, t in rels[a]:
                if not (0 <= s < n and 0 <= t < n):
                    raise ValueError(f"edge ({s}, {t}) of agent {a!r} leaves the world set")
                lists[s].append(t)
            succ[a] = tuple(tuple(sorted(x)) for x in lists)
        object.__setattr__(self, "valuations", vals)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "fluents", fluents)
        object.__setattr__(self, "succ", succ)
        object.__setattr__(self, "_masks", None)

    @property
    def n_worlds(self):
        return len(self.valuations)

    @property
    def worlds(self):
        return range(len(self.valuations))

    def successor_masks(self):
        """Per agent, a tuple giving each world's successor set as a bitmask."""
        if self._masks is None:
            masks = {}
            for a, lists in self.succ.items():
                masks[a] = tuple(sum(1 << t for t in ts) for ts in lists)
            object.__setattr__(self, "_masks", masks)
        return self._masks


@dataclass(frozen=True, eq=False)
class PointedKripke:
    """A Kripke structure together with its designated (actual) world."""

    structure: KripkeStructure
    designated: int
    canonical: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.designated < self.structure.n_worlds:
            raise ValueError(f"designated world {self.designated} is not a world")

    @property
    def agents(self):
        return self.structure.agents

    @property
    def fluents(self):
        return self.structure.fluents


def pointed(valuations, relations, designated=0, agents=None, fluents=None) -> PointedKripke:
    """Shorthand constructor used throughout the tests and examples."""
    return PointedKripke(KripkeStructure(tuple(valuations), relations, agents, fluents), designated)


# -- entailment -------------------------------------------------------------


def _box(masks, target, n):
    """Worlds all of whose successors (per ``masks``) lie in ``target``."""
    out = 0
    for w in range(n):
        if masks[w] & ~target == 0:
            out |= 1 << w
    return out


def satisfying_worlds(m: KripkeStructure, f: Formula, memo=None) -> int:
    """Bitmask of the worlds of ``m`` where ``f`` holds."""
    if memo is None:
        memo = {}
    key = id(f)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    n = m.n_worlds
    full = (1 << n) - 1
    if isinstance(f, Atom):
        r = 0
        for w, v in enumerate(m.valuations):
            if f.name in v:
                r |= 1 << w
    elif isinstance(f, Top):
        r = full
    elif isinstance(f, Bottom):
        r = 0
    elif isinstance(f, Not):
        r = full & ~satisfying_worlds(m, f.arg, memo)
    elif isinstance(f, And):
        r = satisfying_worlds(m, f.left, memo) & satisfying_worlds(m, f.right, memo)
    elif isinstance(f, Or):
        r = satisfying_worlds(m, f.left, memo) | satisfying_worlds(m, f.right, memo)
    elif isinstance(f, Implies):
        r = (full & ~satisfying_worlds(m, f.left, memo)) | satisfying_worlds(m, f.right, memo)
    elif isinstance(f, B):
        r = _box(m.successor_masks()[f.agent], satisfying_worlds(m, f.arg, memo), n)
    elif isinstance(f, E):
        inner = satisfying_worlds(m, f.arg, memo)
        masks = m.successor_masks()
        r = full
        for a in f.agents:
            r &= _box(masks[a], inner, n)
    elif isinstance(f, C):
        # greatest fixpoint of X = arg & E(X); starts from arg, the k=0 term
        masks = m.successor_masks()
        union = [0] * n
        for a in f.agents:
            for w, s in enumerate(masks[a]):
                union[w] |= s
        r = satisfying_worlds(m, f.arg, memo)
        while True:
            nxt = r & _box(union, r, n)
            if nxt == r:
                break
            r = nxt
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[key] = (f, r)  # keep f alive so its id stays unique
    return r


def entails(state: PointedKripke, f: Formula) -> bool:
    """Whether ``f`` holds at the designated world of ``state``."""
    m = state.structure
    check_symbols(f, m.fluents, m.agents)
    return bool(satisfying_worlds(m, f) >> state.designated & 1)


def entails_at(m: KripkeStructure, world: int, f: Formula) -> bool:
    check_symbols(f, m.fluents, m.agents)
    return bool(satisfying_worlds(m, f) >> world & 1)


# -- frame properties -------------------------------------------------------


@dataclass(frozen=True)
class AgentFrame:
    reflexive: bool
    transitive: bool
    euclidean: bool
    serial: bool


@dataclass(frozen=True)
class FrameClass:
    """Per-agent relation properties and the derived S5 / KD45 label."""

    agents: Mapping

    @property
    def is_s5(self):
        return all(p.reflexive and p.transitive and p.euclidean for p in self.agents.values())

    @property
    def is_kd45(self):
        return all(p.serial and p.transitive and p.euclidean for p in self.agents.values())

    @property
    def label(self):
        if self.is_s5:
            return "S5"
        if self.is_kd45:
            return "KD45"
        return "K"


def _agent_frame(succ, n):
    sets = [set(ts) for ts in succ]
    reflexive = all(w in sets[w] for w in range(n))
    serial = all(sets[w] for w in range(n))
    transitive = all(sets[u] <= sets[w] for w in range(n) for u in sets[w])
    euclidean = all(sets[w] <= sets[u] for w in range(n) for u in sets[w])
    return AgentFrame(reflexive, transitive, euclidean, serial)


def classify_frame(m: KripkeStructure) -> FrameClass:
    if isinstance(m, PointedKripke):
        m = m.structure
    return FrameClass({a: _agent_frame(m.succ[a], m.n_worlds) for a in m.agents})


# -- bisimulation -----------------------------------------------------------


def reachable_worlds(m: KripkeStructure, start: int) -> list:
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for a in m.agents:
            for t in m.succ[a][w]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return sorted(seen)


def _rank(keys):
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def refine_colors(valuations, succ, agents):
    """Coarsest bisimulation as canonical colors.

    Colors are ranks of signatures, so they depend only on the structure
    up to isomorphism, never on the input world numbering.
    """
    n = len(valuations)
    colors = _rank([tuple(sorted(v)) for v in valuations])
    count = len(set(colors))
    while True:
        sigs = [
            (colors[w],) + tuple(tuple(sorted({colors[t] for t in succ[a][w]})) for a in agents)
            for w in range(n)
        ]
        colors = _rank(sigs)
        new_count = len(set(colors))
        if new_count == count:
            return colors
        count = new_count


def bisim_contract(state: PointedKripke) -> PointedKripke:
    """Bisimulation quotient of the part reachable from the designated world.

    Quotient worlds are numbered by canonical color, so bisimilar inputs
    produce identical outputs.
    """
    if state.canonical:
        return state
    m = state.structure
    keep = reachable_worlds(m, state.designated)
    index = {w: i for i, w in enumerate(keep)}
    vals = [m.valuations[w] for w in keep]
    succ = {a: [tuple(index[t] for t in m.succ[a][w]) for w in keep] for a in m.agents}
    colors = refine_colors(vals, succ, m.agents)
    k = max(colors) + 1
    new_vals = [None] * k
    for i, c in enumerate(colors):
        new_vals[c] = vals[i]
    rels = {}
    for a in m.agents:
        rels[a] = {(colors[i], colors[t]) for i in range(len(keep)) for t in succ[a][i]}
    structure = KripkeStructure(tuple(new_vals), rels, m.agents, m.fluents)
    return PointedKripke(structure, colors[index[state.designated]], canonical=True)


def canonical_digest(state: PointedKripke) -> str:
    """Hex digest equal for bisimilar states.

    Computed on the contracted quotient, whose worlds are already in
    canonical order; within a quotient every world has its own color so
    no ordering ties remain.
    """
    q = bisim_contract(state)
    m = q.structure
    h = hashlib.sha256()
    h.update(repr((m.fluents, m.agents, q.designated)).encode())
    h.update(repr(tuple(tuple(sorted(v)) for v in m.valuations)).encode())
    for a in m.agents:
        h.update(repr((a, m.succ[a])).encode())
    return h.hexdigest()


def dump(state: PointedKripke) -> str:
    """Deterministic text listing: worlds with sorted valuations, sorted edges."""
    m = state.structure
    lines = [f"designated {state.designated}"]
    for w, v in enumerate(m.valuations):
        lines.append(f"world {w}: {' '.join(sorted(v))}".rstrip())
    for a in sorted(m.agents):
        for s, t in sorted(m.relations[a]):
            lines.append(f"edge {a} {s} {t}")
    return "\n".join(lines) + "\n"
