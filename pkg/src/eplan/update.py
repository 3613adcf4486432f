"""Update (event) models, product update, and the action compilers.

Ontic, sensing and announcement actions are compiled into update models
given each agent's observability, so one product-update kernel serves
both the built-in action types and user-written models.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import EplanError, NotExecutableError
from .kripke import KripkeStructure, PointedKripke, bisim_contract, entails, satisfying_worlds
from .logic import FALSE, TRUE, And, Atom, Formula, Not, Or, Top, check_symbols, intern_name
from .possibility import Possibility, _Evaluator, entails_p


class Observability(enum.Enum):
    FULL = "fully_observant"
    PARTIAL = "partially_observant"
    OBLIVIOUS = "oblivious"


class ActionKind(enum.Enum):
    ONTIC = "ontic"
    SENSING = "sensing"
    ANNOUNCEMENT = "announcement"


@dataclass(frozen=True, eq=False)
class UpdateModel:
    """A pointed event model.

    ``post[e]`` maps a fluent to the formula that decides its new value;
    fluents not mentioned keep their old value. Agents missing from
    ``relations`` get an empty relation.
    """

    events: tuple
    pre: Mapping
    post: Mapping
    relations: Mapping
    designated: str
    name: str = "update"

    def __post_init__(self):
        events = tuple(self.events)
        if len(set(events)) != len(events):
            raise ValueError("duplicate event names")
        if self.designated not in events:
            raise ValueError(f"designated event {self.designated!r} is not an event")
        pre = {e: self.pre.get(e, TRUE) for e in events}
        post = {e: dict(self.post.get(e, {})) for e in events}
        for e in set(self.pre) | set(self.post):
            if e not in events:
                raise ValueError(f"unknown event {e!r}")
        rels = {}
        for a, pairs in self.relations.items():
            pairs = frozenset(pairs)
            for s, t in pairs:
                if s not in events or t not in events:
                    raise ValueError(f"relation of {a!r} uses unknown event")
            rels[intern_name(a)] = pairs
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "post", post)
        object.__setattr__(self, "relations", rels)

    def relation(self, agent) -> frozenset:
        return self.relations.get(agent, frozenset())

    def check_signature(self, fluents, agents):
        for e in self.events:
            check_symbols(self.pre[e], fluents, agents)
            for f, phi in self.post[e].items():
                check_symbols(Atom(f), fluents, agents)
                check_symbols(phi, fluents, agents)


def skip_model(agents, name="skip") -> UpdateModel:
    """One event, no precondition, no effect, every agent sees it."""
    return UpdateModel(("e",), {"e": TRUE}, {}, {a: {("e", "e")} for a in agents}, "e", name)


@dataclass(frozen=True)
class Observer:
    agent: str
    group: Observability
    guard: Optional[Formula] = None


@dataclass(frozen=True)
class ObservabilityMap:
    """Observer entries; agents without a satisfied entry are oblivious.

    Entries are resolved in order, fully observant ones first, and the
    first entry whose guard holds at the pre-update state classifies
    the agent.
    """

    entries: tuple = ()

    @classmethod
    def of(cls, full=(), partial=()):
        entries = [Observer(intern_name(a), Observability.FULL) for a in full]
        entries += [Observer(intern_name(a), Observability.PARTIAL) for a in partial]
        return cls(tuple(entries))

    def resolve(self, state, agents) -> dict:
        groups = {}
        ordered = sorted(self.entries, key=lambda o: o.group is not Observability.FULL)
        for ob in ordered:
            if ob.agent in groups:
                continue
            if ob.guard is None or holds(state, ob.guard):
                groups[ob.agent] = ob.group
        unknown = set(groups) - set(agents)
        if unknown:
            raise EplanError(f"observer(s) not among the agents: {sorted(unknown)}")
        return {a: groups.get(a, Observability.OBLIVIOUS) for a in agents}


@dataclass(frozen=True)
class ActionSpec:
    """An action of one of the three classical kinds.

    ``effects`` (ontic) is a tuple of ``(fluent, value, condition)``;
    ``sensed`` (sensing) is a fluent name; ``announced`` is a Formula.
    """

    name: str
    kind: ActionKind
    executability: Formula = TRUE
    effects: tuple = ()
    sensed: Optional[str] = None
    announced: Optional[Formula] = None
    observability: ObservabilityMap = field(default_factory=ObservabilityMap)

    def __post_init__(self):
        kind = ActionKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ActionKind.ONTIC:
            fluents = [f for f, _, _ in self.effects]
            if len(set(fluents)) != len(fluents):
                raise ValueError(f"{self.name}: a fluent is assigned more than once")
            if any(o.group is Observability.PARTIAL for o in self.observability.entries):
                raise ValueError(f"{self.name}: ontic actions cannot have partial observers")
        elif kind is ActionKind.SENSING and self.sensed is None:
            raise ValueError(f"{self.name}: sensing action without a sensed fluent")
        elif kind is ActionKind.ANNOUNCEMENT and self.announced is None:
            raise ValueError(f"{self.name}: announcement without a formula")


# -- entailment on either representation ------------------------------------


def holds(state, f: Formula) -> bool:
    if isinstance(state, Possibility):
        return entails_p(state, f)
    return entails(state, f)


def is_executable(state, action) -> bool:
    if isinstance(action, UpdateModel):
        return holds(state, action.pre[action.designated])
    return holds(state, action.executability)


# -- compilation ------------------------------------------------------------


def _and(a, b):
    if isinstance(a, Top):
        return b
    return And(a, b)


def compile_action(action: ActionSpec, state) -> UpdateModel:
    """Build the update model of ``action`` as executed in ``state``.

    Observer guards are evaluated at ``state``, so the returned model
    has fixed relations.
    """
    agents = state.agents
    groups = action.observability.resolve(state, agents)
    ex = action.executability
    rels = {}
    if action.kind is ActionKind.ONTIC:
        post = {}
        for fluent, value, cond in action.effects:
            fluent = intern_name(fluent)
            if cond is None or isinstance(cond, Top):
                post[fluent] = TRUE if value else FALSE
            elif value:
                post[fluent] = Or(cond, Atom(fluent))
            else:
                post[fluent] = And(Not(cond), Atom(fluent))
        for a, g in groups.items():
            if g is Observability.FULL:
                rels[a] = {("sigma", "sigma"), ("eps", "eps")}
            elif g is Observability.OBLIVIOUS:
                rels[a] = {("sigma", "eps"), ("eps", "eps")}
            else:
                raise EplanError(f"{action.name}: ontic actions cannot have partial observers")
        return UpdateModel(
            ("sigma", "eps"), {"sigma": ex, "eps": TRUE}, {"sigma": post}, rels, "sigma", action.name
        )

    if action.kind is ActionKind.SENSING:
        phi = Atom(intern_name(action.sensed))
        designated = "pos" if holds(state, phi) else "neg"
    else:
        phi = action.announced
        designated = "pos"
    for a, g in groups.items():
        if g is Observability.FULL:
            rels[a] = {("pos", "pos"), ("neg", "neg"), ("eps", "eps")}
        elif g is Observability.PARTIAL:
            rels[a] = {("pos", "pos"), ("pos", "neg"), ("neg", "pos"), ("neg", "neg"), ("eps", "eps")}
        else:
            rels[a] = {("pos", "eps"), ("neg", "eps"), ("eps", "eps")}
    pre = {"pos": _and(ex, phi), "neg": _and(ex, Not(phi)), "eps": TRUE}
    return UpdateModel(("pos", "neg", "eps"), pre, {}, rels, designated, action.name)


# -- product update ---------------------------------------------------------


def product_update(state: PointedKripke, model: UpdateModel) -> PointedKripke:
    """The raw product of ``state`` and ``model``, before contraction.

    Raises NotExecutableError if the designated event's precondition
    fails at the designated world.
    """
    m = state.structure
    model.check_signature(m.fluents, m.agents)
    memo = {}
    pre_sat = {e: satisfying_worlds(m, model.pre[e], memo) for e in model.events}
    if not pre_sat[model.designated] >> state.designated & 1:
        raise NotExecutableError(f"{model.name} is not executable")

    pairs = []
    index = {}
    for w in m.worlds:
        for e in model.events:
            if pre_sat[e] >> w & 1:
                index[(w, e)] = len(pairs)
                pairs.append((w, e))

    post_sat = {
        e: {f: satisfying_worlds(m, phi, memo) for f, phi in model.post[e].items()}
        for e in model.events
    }
    vals = []
    for w, e in pairs:
        v = set(m.valuations[w])
        for f, sat in post_sat[e].items():
            if sat >> w & 1:
                v.add(f)
            else:
                v.discard(f)
        vals.append(v)

    rels = {}
    for a in m.agents:
        ev_succ = {}
        for s, t in model.relation(a):
            ev_succ.setdefault(s, []).append(t)
        edges = set()
        for i, (w, e) in enumerate(pairs):
            targets = ev_succ.get(e, ())
            for w2 in m.succ[a][w]:
                for e2 in targets:
                    j = index.get((w2, e2))
                    if j is not None:
                        edges.add((i, j))
        rels[a] = edges
    out = KripkeStructure(tuple(vals), rels, m.agents, m.fluents)
    return PointedKripke(out, index[(state.designated, model.designated)])


def apply_update(state: PointedKripke, model: UpdateModel) -> PointedKripke:
    """Product update followed by bisimulation contraction."""
    return bisim_contract(product_update(state, model))


def apply_update_p(p: Possibility, model: UpdateModel) -> Possibility:
    """Product update computed directly on a possibility.

    Only pairs reachable from (root, designated event) are built;
    preconditions and postconditions are evaluated on the possibility
    graph itself. The result is interned in the store of ``p``.
    """
    model.check_signature(p.fluents, p.agents)
    ev = _Evaluator()
    if not ev.holds(p, model.pre[model.designated]):
        raise NotExecutableError(f"{model.name} is not executable")
    ev_succ = {a: {} for a in p.agents}
    for a in p.agents:
        for s, t in model.relation(a):
            ev_succ[a].setdefault(s, []).append(t)

    root = (p, model.designated)
    index = {root: 0}
    order = [root]
    queue = deque([root])
    edges = {a: set() for a in p.agents}
    while queue:
        u, e = queue.popleft()
        i = index[(u, e)]
        for a in p.agents:
            for v in u.successors(a):
                for e2 in ev_succ[a].get(e, ()):
                    key = (v, e2)
                    j = index.get(key)
                    if j is None:
                        if not ev.holds(v, model.pre[e2]):
                            continue
                        j = index[key] = len(order)
                        order.append(key)
                        queue.append(key)
                    edges[a].add((i, j))
    vals = []
    for u, e in order:
        v = set(u.valuation)
        for f, phi in model.post[e].items():
            if ev.holds(u, phi):
                v.add(f)
            else:
                v.discard(f)
        vals.append(v)
    m = KripkeStructure(tuple(vals), edges, p.agents, p.fluents)
    return p.store.intern(PointedKripke(m, 0))


def update(state, model: UpdateModel):
    """Apply ``model`` to a PointedKripke or a Possibility."""
    if isinstance(state, Possibility):
        return apply_update_p(state, model)
    return apply_update(state, model)


def execute(state, action):
    """Apply an ActionSpec (compiled against ``state``) or an UpdateModel."""
    if isinstance(action, ActionSpec):
        if not is_executable(state, action):
            raise NotExecutableError(f"{action.name} is not executable")
        action = compile_action(action, state)
    return update(state, action)


__all__ = [
    "Observability", "ActionKind", "UpdateModel", "Observer", "ObservabilityMap", "ActionSpec",
    "skip_model", "holds", "is_executable", "compile_action", "product_update", "apply_update",
    "apply_update_p", "update", "execute",
]
