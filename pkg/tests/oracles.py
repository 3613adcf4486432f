"""Independent reference implementations used only by the tests.

Nothing here calls into eplan's evaluators, refiners or search; they
work from the raw worlds/valuations/edges of a structure.
"""

from itertools import product

from eplan.logic import And, Atom, B, Bottom, C, E, Implies, Not, Or, Top


def _succ(m, agent, w):
    return [t for (s, t) in m.relations[agent] if s == w]


def naive_holds(m, w, f):
    """Truth of ``f`` at world ``w``, clause by clause.

    C is checked as E^k for k = 0..|S|: the sets E^k stabilise within
    |S| steps on a finite structure.
    """
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        return f.name in m.valuations[w]
    if isinstance(f, Not):
        return not naive_holds(m, w, f.arg)
    if isinstance(f, And):
        return naive_holds(m, w, f.left) and naive_holds(m, w, f.right)
    if isinstance(f, Or):
        return naive_holds(m, w, f.left) or naive_holds(m, w, f.right)
    if isinstance(f, Implies):
        return (not naive_holds(m, w, f.left)) or naive_holds(m, w, f.right)
    if isinstance(f, B):
        return all(naive_holds(m, t, f.arg) for t in _succ(m, f.agent, w))
    if isinstance(f, E):
        return all(naive_holds(m, w, B(a, f.arg)) for a in f.agents)
    if isinstance(f, C):
        memo = {}

        def e_k(world, k):
            key = (world, k)
            if key not in memo:
                if k == 0:
                    memo[key] = naive_holds(m, world, f.arg)
                else:
                    memo[key] = all(
                        e_k(t, k - 1) for a in f.agents for t in _succ(m, a, world)
                    )
            return memo[key]

        return all(e_k(w, k) for k in range(len(m.valuations) + 1))
    raise TypeError(f)


def naive_entails(state, f):
    return naive_holds(state.structure, state.designated, f)


def reach_closure(m, w, agents):
    """Reflexive-transitive closure from ``w`` over the union of ``agents``' edges."""
    seen = {w}
    changed = True
    while changed:
        changed = False
        for a in agents:
            for s, t in m.relations[a]:
                if s in seen and t not in seen:
                    seen.add(t)
                    changed = True
    return seen


def naive_bisimulation(m1, m2):
    """Greatest bisimulation between the worlds of two structures (pair set)."""
    agents = m1.agents
    rel = {
        (u, v)
        for u, v in product(range(len(m1.valuations)), range(len(m2.valuations)))
        if m1.valuations[u] == m2.valuations[v]
    }
    changed = True
    while changed:
        changed = False
        for u, v in list(rel):
            ok = True
            for a in agents:
                su, sv = _succ(m1, a, u), _succ(m2, a, v)
                if not all(any((x, y) in rel for y in sv) for x in su):
                    ok = False
                if not all(any((x, y) in rel for x in su) for y in sv):
                    ok = False
            if not ok:
                rel.discard((u, v))
                changed = True
    return rel


def naive_bisimilar(s1, s2):
    return (s1.designated, s2.designated) in naive_bisimulation(s1.structure, s2.structure)


def naive_class_count(state):
    """Number of bisimulation classes among worlds reachable from the designated one."""
    m = state.structure
    reach = reach_closure(m, state.designated, m.agents)
    rel = naive_bisimulation(m, m)
    classes = []
    for w in sorted(reach):
        if not any((w, c) in rel for c in classes):
            classes.append(w)
    return len(classes)


def naive_product(state, model):
    """Uncontracted product update as (worlds, valuations, edges, designated)."""
    m = state.structure
    worlds = [
        (w, e) for w in range(len(m.valuations)) for e in model.events
        if naive_holds(m, w, model.pre[e])
    ]
    vals = {}
    for w, e in worlds:
        v = set(m.valuations[w])
        for f, phi in model.post[e].items():
            if naive_holds(m, w, phi):
                v.add(f)
            else:
                v.discard(f)
        vals[(w, e)] = frozenset(v)
    edges = {
        a: {
            (x, y) for x in worlds for y in worlds
            if (x[0], y[0]) in m.relations[a] and (x[1], y[1]) in model.relation(a)
        }
        for a in m.agents
    }
    return worlds, vals, edges, (state.designated, model.designated)


def exhaustive_min_plan(task, max_len):
    """Length of the shortest executable sequence reaching the goal, or None.

    Plain level-by-level enumeration of every action sequence, no
    duplicate detection and no heuristics. State transitions reuse the
    library's update operator, which is checked separately.
    """
    from eplan.update import execute, holds, is_executable

    level = [task.initial]
    for length in range(max_len + 1):
        if any(holds(s, task.goal) for s in level):
            return length
        if length == max_len:
            return None
        level = [
            execute(s, g.action) for s in level for g in task.actions
            if is_executable(s, g.action)
        ]
    return None
