import random

import pytest

from eplan import NotExecutableError
from eplan.corpus import random_action, random_state
from eplan.kripke import (
    PointedKripke, canonical_digest, entails, pointed,
)
from eplan.logic import FALSE, TRUE, Atom, B, C, Not, Or
from eplan.possibility import from_kripke
from eplan.update import (
    ActionSpec, Observability, ObservabilityMap, Observer, UpdateModel,
    apply_update, apply_update_p, compile_action, execute, is_executable, product_update,
    skip_model,
)

from oracles import naive_bisimilar, naive_product

f = Atom("f")
ALL = frozenset("abc")


def sensing(full=(), partial=(), fluent="f", pre=TRUE):
    return ActionSpec("sense", "sensing", pre, sensed=fluent, observability=ObservabilityMap.of(full, partial))


def announce(phi, full=(), partial=(), pre=TRUE):
    return ActionSpec("tell", "announcement", pre, announced=phi, observability=ObservabilityMap.of(full, partial))


def test_skip_is_identity(coin):
    r = apply_update(coin, skip_model(coin.agents))
    assert naive_bisimilar(r, coin)
    assert canonical_digest(r) == canonical_digest(coin)


def test_public_announcement_on_coin(coin):
    pa = UpdateModel(("e",), {"e": f}, {}, {a: {("e", "e")} for a in coin.agents}, "e")
    r = apply_update(coin, pa)
    assert r.structure.n_worlds == 1
    assert entails(r, C(ALL, f))


def test_false_precondition_not_executable(coin):
    u = UpdateModel(("e",), {"e": FALSE}, {}, {}, "e")
    with pytest.raises(NotExecutableError):
        apply_update(coin, u)


def test_product_matches_naive_enumeration(small_corpus, rng):
    for s in small_corpus[:60]:
        act = random_action(rng, s)
        if not is_executable(s, act):
            continue
        model = compile_action(act, s)
        raw = product_update(s, model)
        worlds, vals, edges, designated = naive_product(s, model)
        assert raw.structure.n_worlds == len(worlds) <= s.structure.n_worlds * len(model.events)
        index = {p: i for i, p in enumerate(worlds)}
        expected = pointed(
            [vals[p] for p in worlds],
            {a: {(index[x], index[y]) for x, y in es} for a, es in edges.items()},
            index[designated], s.agents, s.fluents,
        )
        assert naive_bisimilar(raw, expected)
        assert naive_bisimilar(apply_update(s, model), expected)


def direct_ontic(state, assignments, pre):
    """Fully observant unconditional ontic effects applied world by world."""
    m = state.structure
    keep = [w for w in m.worlds if entails(PointedKripke(m, w), pre)]
    idx = {w: i for i, w in enumerate(keep)}
    vals = []
    for w in keep:
        v = set(m.valuations[w])
        for fl, val in assignments:
            (v.add if val else v.discard)(fl)
        vals.append(v)
    rels = {a: {(idx[x], idx[y]) for x, y in m.relations[a] if x in idx and y in idx} for a in m.agents}
    return pointed(vals, rels, idx[state.designated], m.agents, m.fluents)


def test_fully_observant_ontic_matches_direct_effects():
    rng = random.Random(5)
    done = 0
    while done < 3:
        s = random_state(rng)
        pre = Atom(rng.choice(s.fluents))
        if not entails(s, pre):
            continue
        assignments = [("p", True), ("r", False)]
        act = ActionSpec("set", "ontic", pre, effects=tuple((fl, v, None) for fl, v in assignments),
                         observability=ObservabilityMap.of(full=s.agents))
        r = execute(s, act)
        assert naive_bisimilar(r, direct_ontic(s, assignments, pre))
        done += 1


def test_sensing_collapses_sensor_only(coin):
    r = execute(coin, sensing(full=["a"]))
    assert entails(r, B("a", f))
    for i in ("b", "c"):
        for psi in (f, Not(f)):
            assert entails(r, B(i, psi)) == entails(coin, B(i, psi))
    assert is_executable(r, ActionSpec("x", "sensing", B("a", f), sensed="f"))


def test_partial_observer_learns_that_sensor_knows_whether(coin):
    r = execute(coin, announce(f, full=["a"], partial=["b"]))
    assert entails(r, B("b", Or(B("a", f), B("a", Not(f)))))
    assert not entails(r, B("b", f))
    assert not entails(r, B("c", Or(B("a", f), B("a", Not(f)))))


def test_sensing_designates_actual_value(coin):
    neg = PointedKripke(coin.structure, 1)
    model = compile_action(sensing(full=["a"]), neg)
    assert model.designated == "neg"
    assert entails(apply_update(neg, model), B("a", Not(f)))


def test_announcing_a_falsehood_is_not_executable(coin):
    neg = PointedKripke(coin.structure, 1)
    with pytest.raises(NotExecutableError):
        apply_update(neg, compile_action(announce(f, full=["a"]), neg))


def test_ontic_rejects_partial_observers():
    with pytest.raises(ValueError):
        ActionSpec("o", "ontic", effects=(("f", True, None),), observability=ObservabilityMap.of(["a"], ["b"]))
    with pytest.raises(ValueError):
        ActionSpec("o", "ontic", effects=(("f", True, None), ("f", False, None)))


def test_guarded_observers_resolve_at_state(coin):
    obs = ObservabilityMap((Observer("a", Observability.FULL, Not(f)), Observer("a", Observability.PARTIAL)))
    groups = obs.resolve(coin, coin.agents)
    assert groups == {"a": Observability.PARTIAL, "b": Observability.OBLIVIOUS, "c": Observability.OBLIVIOUS}


def test_conditional_effect(coin):
    act = ActionSpec("flip", "ontic", effects=(("f", False, Atom("f")),), observability=ObservabilityMap.of(coin.agents))
    r = execute(coin, act)
    assert entails(r, C(ALL, Not(f)))


def test_executability_shortcuts(coin):
    assert is_executable(coin, ActionSpec("t", "announcement", TRUE, announced=TRUE))
    neg = PointedKripke(coin.structure, 1)
    assert not is_executable(neg, ActionSpec("t", "announcement", f, announced=TRUE))


def test_representation_commutes(small_corpus):
    rng = random.Random(21)
    for s in small_corpus[:80]:
        act = random_action(rng, s)
        model = compile_action(act, s)
        via_kripke = apply_update(s, model)
        via_possibility = apply_update_p(from_kripke(s), model)
        assert canonical_digest(via_kripke) == via_possibility.digest
