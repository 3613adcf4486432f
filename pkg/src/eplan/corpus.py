"""Random pointed structures and formula enumeration for property tests."""

from __future__ import annotations

import itertools
import random

from .kripke import KripkeStructure, PointedKripke
from .logic import (
    FALSE, TRUE, And, Atom, B, C, E, Implies, Not, Or, modal_depth,
)
from .update import ActionKind, ActionSpec, ObservabilityMap, holds

AGENTS = ("a", "b")
FLUENTS = ("p", "q", "r")


def _random_partition(rng, worlds):
    blocks = []
    for w in worlds:
        if blocks and rng.random() < 0.5:
            rng.choice(blocks).append(w)
        else:
            blocks.append([w])
    return blocks


def _relation(rng, n, frame):
    worlds = list(range(n))
    if frame == "s5":
        return {(u, v) for blk in _random_partition(rng, worlds) for u in blk for v in blk}
    if frame == "kd45":
        rel = set()
        for blk in _random_partition(rng, worlds):
            targets = rng.sample(blk, rng.randint(1, len(blk)))
            rel |= {(u, t) for u in blk for t in targets}
        return rel
    density = rng.choice((0.15, 0.3, 0.5))
    return {(u, v) for u in worlds for v in worlds if rng.random() < density}


def random_state(rng: random.Random, max_worlds=5, agents=AGENTS, fluents=FLUENTS, frame=None) -> PointedKripke:
    """A random pointed structure; ``frame`` is "s5", "kd45", "any" or None (mixed)."""
    n = rng.randint(1, max_worlds)
    vals = [{f for f in fluents if rng.random() < 0.5} for _ in range(n)]
    rels = {}
    for a in agents:
        kind = frame or rng.choice(("s5", "kd45", "any", "any"))
        rels[a] = _relation(rng, n, kind)
    m = KripkeStructure(tuple(vals), rels, agents, fluents)
    return PointedKripke(m, rng.randrange(n))


def state_corpus(n=1000, seed=0, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_state(rng, **kwargs) for _ in range(n)]


def _modal_ops(agents):
    ops = [lambda f, a=a: B(a, f) for a in agents]
    groups = [frozenset(g) for k in range(1, len(agents) + 1) for g in itertools.combinations(agents, k)]
    ops += [lambda f, g=g: E(g, f) for g in groups if len(g) > 1]
    ops += [lambda f, g=g: C(g, f) for g in groups]
    return ops


def enumerate_formulas(fluents=FLUENTS, agents=AGENTS, max_depth=3, per_level=400, seed=0) -> list:
    """Grammar-directed enumeration of formulas by modal depth.

    Depth 0 holds constants, literals and binary combinations of
    literals. Each further level applies every modal operator (and its
    negation, and its conjunction/disjunction with an atom) to formulas
    of the previous level; levels above ``per_level`` entries are
    thinned with a seeded shuffle.
    """
    rng = random.Random(seed)
    atoms = [Atom(f) for f in fluents]
    lits = atoms + [Not(a) for a in atoms]
    level = [TRUE, FALSE] + lits
    for x, y in itertools.combinations(lits, 2):
        level += [And(x, y), Or(x, y), Implies(x, y)]
    level = list(dict.fromkeys(level))
    levels = [level]
    ops = _modal_ops(agents)
    for _ in range(max_depth):
        nxt = []
        for f in levels[-1]:
            for op in ops:
                g = op(f)
                nxt += [g, Not(g), And(g, rng.choice(atoms)), Or(rng.choice(lits), g)]
        for op1, op2 in itertools.product(ops, repeat=2):
            # k-axiom shaped mixes of two modal formulas
            f1, f2 = rng.choice(levels[-1]), rng.choice(levels[-1])
            nxt.append(Implies(op1(f1), op2(f2)))
        nxt = list(dict.fromkeys(nxt))
        if len(nxt) > per_level:
            rng.shuffle(nxt)
            nxt = nxt[:per_level]
        levels.append(nxt)
    pool = [f for lvl in levels for f in lvl]
    assert all(modal_depth(f) <= max_depth for f in pool)
    return pool


def sample_formulas(rng: random.Random, pool, k=200) -> list:
    if len(pool) <= k:
        return list(pool)
    return rng.sample(pool, k)


def random_action(rng: random.Random, state, kinds=("ontic", "sensing", "announcement"),
                  groups=None) -> ActionSpec:
    """A random unguarded action that is executable in ``state``.

    ``groups`` maps agents to "full"/"partial"/"oblivious"; by default
    each agent is drawn at random (partial becomes full for ontic
    actions). Announcements pick a formula true at the designated world.
    """
    agents = list(state.agents)
    kind = ActionKind(rng.choice(kinds))
    if groups is None:
        groups = {a: rng.choice(("full", "partial", "oblivious")) for a in agents}
    if kind is ActionKind.ONTIC:
        groups = {a: ("full" if g == "partial" else g) for a, g in groups.items()}
    obs = ObservabilityMap.of(
        [a for a in agents if groups.get(a) == "full"],
        [a for a in agents if groups.get(a) == "partial"],
    )
    fl = rng.choice(state.fluents)
    if kind is ActionKind.ONTIC:
        picked = rng.sample(state.fluents, rng.randint(1, len(state.fluents)))
        effects = tuple((x, rng.random() < 0.5, None) for x in picked)
        return ActionSpec("o", kind, TRUE, effects=effects, observability=obs)
    if kind is ActionKind.SENSING:
        return ActionSpec("s", kind, TRUE, sensed=fl, observability=obs)
    phi = rng.choice([Atom(fl), B(agents[0], Atom(fl)), Or(Atom(fl), Atom(state.fluents[0]))])
    if not holds(state, phi):
        phi = Not(phi)
    return ActionSpec("a", kind, TRUE, announced=phi, observability=obs)
