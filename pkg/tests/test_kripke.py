import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eplan import UnknownSymbolError
from eplan.corpus import enumerate_formulas, random_state, sample_formulas
from eplan.kripke import (
    PointedKripke, bisim_contract, canonical_digest, classify_frame, dump, entails, pointed,
)
from eplan.logic import FALSE, TRUE, And, Atom, B, C, E, Implies, Not, Or
from eplan.update import ActionSpec, ObservabilityMap, apply_update, compile_action

from oracles import naive_class_count, naive_entails, naive_bisimilar, reach_closure

f = Atom("f")
AB = frozenset({"a", "b"})


def chain():
    # w0 -a-> w1 -b-> w2, f true at w0 and w1
    return pointed([{"f"}, {"f"}, set()], {"a": [(0, 1)], "b": [(1, 2)]}, 0, ("a", "b"), ("f",))


def test_single_reflexive_world():
    s = pointed([{"f"}], {"a": [(0, 0)]})
    assert entails(s, B("a", f))


def test_indistinguishable_worlds(coin):
    assert not entails(coin, B("a", f))
    assert entails(coin, Or(B("a", f), Not(B("a", f))))


def test_chain_common_vs_everybody():
    s = chain()
    # frozen from the naive evaluator
    assert naive_entails(s, C(AB, f)) is False
    assert naive_entails(s, E(AB, f)) is True
    assert entails(s, C(AB, f)) is False
    assert entails(s, E(AB, f)) is True


def test_common_includes_designated_world():
    # no edges at all: C reduces to the k=0 term
    s = pointed([set()], {"a": []}, agents=("a",), fluents=("f",))
    assert not entails(s, C(frozenset("a"), f))
    assert entails(s, E(frozenset("a"), f))


def test_unknown_symbol_rejected(coin):
    with pytest.raises(UnknownSymbolError):
        entails(coin, Atom("zzz"))
    with pytest.raises(UnknownSymbolError):
        entails(coin, B("zed", f))


def test_structure_validation():
    with pytest.raises(ValueError):
        pointed([set()], {"a": [(0, 3)]})
    with pytest.raises(ValueError):
        PointedKripke(chain().structure, 7)


def test_frame_identity_is_s5():
    s = pointed([{"f"}, set(), {"f"}], {"a": [(i, i) for i in range(3)], "b": [(i, i) for i in range(3)]})
    assert classify_frame(s.structure).label == "S5"


def test_frame_empty_relation_not_serial():
    s = pointed([set()], {"a": []})
    fc = classify_frame(s.structure)
    assert not fc.agents["a"].serial
    assert not fc.is_s5 and not fc.is_kd45


def test_frame_kd45_not_s5():
    s = pointed([set(), set()], {"a": [(0, 1), (1, 1)]})
    p = classify_frame(s.structure).agents["a"]
    assert (p.serial, p.transitive, p.euclidean, p.reflexive) == (True, True, True, False)
    assert classify_frame(s.structure).label == "KD45"


def test_contract_duplicates():
    s = pointed([{"f"}, {"f"}], {"a": [(0, 0), (1, 1), (0, 1), (1, 0)]})
    assert bisim_contract(s).structure.n_worlds == 1


def test_contract_minimal_keeps_size(coin):
    q = bisim_contract(coin)
    assert q.structure.n_worlds == 2
    assert bisim_contract(q) is q


def test_contract_doubled_model(coin):
    m = coin.structure
    rels = {}
    for a in m.agents:
        pairs = set(m.relations[a])
        rels[a] = pairs | {(s + 2, t + 2) for s, t in pairs}
    doubled = pointed(list(m.valuations) * 2, rels, 0, m.agents, m.fluents)
    assert naive_class_count(doubled) == 2
    q = bisim_contract(doubled)
    assert q.structure.n_worlds == 2
    assert dump(q) == dump(bisim_contract(coin))


def test_contract_drops_unreachable():
    s = pointed([{"f"}, set()], {"a": [(0, 0)], "b": [(1, 1)]})
    assert bisim_contract(s).structure.n_worlds == 1


def test_digest_permutation_invariant(rng):
    for _ in range(30):
        s = random_state(rng)
        m = s.structure
        perm = list(range(m.n_worlds))
        rng.shuffle(perm)
        vals = [None] * m.n_worlds
        for w, v in enumerate(m.valuations):
            vals[perm[w]] = v
        rels = {a: {(perm[x], perm[y]) for x, y in m.relations[a]} for a in m.agents}
        t = pointed(vals, rels, perm[s.designated], m.agents, m.fluents)
        assert canonical_digest(s) == canonical_digest(t)
        assert canonical_digest(s) == canonical_digest(bisim_contract(s))


def test_digest_equal_after_update_of_bisimilar_inputs(coin):
    m = coin.structure
    rels = {a: set(m.relations[a]) | {(s + 2, t + 2) for s, t in m.relations[a]} for a in m.agents}
    doubled = pointed(list(m.valuations) * 2, rels, 0, m.agents, m.fluents)
    act = ActionSpec("peek", "sensing", sensed="f", observability=ObservabilityMap.of(full=["a"], partial=["b"]))
    r1 = apply_update(coin, compile_action(act, coin))
    r2 = apply_update(doubled, compile_action(act, doubled))
    assert canonical_digest(r1) == canonical_digest(r2)


def test_digest_separates_non_bisimilar(small_corpus):
    by_digest = {}
    for s in small_corpus[:60]:
        by_digest.setdefault(canonical_digest(s), []).append(s)
    for group in by_digest.values():
        for other in group[1:]:
            assert naive_bisimilar(group[0], other)
    reps = [g[0] for g in by_digest.values()][:25]
    for i, x in enumerate(reps):
        for y in reps[i + 1:]:
            assert not naive_bisimilar(x, y)


def test_contract_matches_naive_refiner(small_corpus):
    for s in small_corpus:
        assert bisim_contract(s).structure.n_worlds == naive_class_count(s)
        assert naive_bisimilar(s, bisim_contract(s))


def test_dump_is_sorted():
    s = pointed([{"g", "f"}, set()], {"b": [(1, 0), (0, 1)], "a": [(0, 0)]})
    assert dump(s) == (
        "designated 0\nworld 0: f g\nworld 1:\n"
        "edge a 0 0\nedge b 0 1\nedge b 1 0\n"
    )


def test_oracle_agreement_sample(small_corpus, formula_pool):
    rng = random.Random(3)
    for s in small_corpus[:60]:
        for g in sample_formulas(rng, formula_pool, 60):
            assert entails(s, g) == naive_entails(s, g), (dump(s), str(g))


def test_common_knowledge_is_reachability(small_corpus, formula_pool):
    rng = random.Random(4)
    groups = [frozenset("a"), frozenset("b"), AB]
    for s in small_corpus:
        m = s.structure
        for phi in sample_formulas(rng, formula_pool, 10):
            grp = rng.choice(groups)
            expected = all(naive_entails(PointedKripke(m, w), phi) for w in reach_closure(m, s.designated, grp))
            assert entails(s, C(grp, phi)) == expected


# -- axiom correspondences --------------------------------------------------

SMALL_POOL = enumerate_formulas(per_level=40)
structures = st.builds(lambda seed: random_state(random.Random(seed)), st.integers(0, 10**6))


@given(structures, st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_axiom_k_valid(s, seed):
    rng = random.Random(seed)
    pool = SMALL_POOL
    phi, psi = rng.choice(pool), rng.choice(pool)
    for i in s.agents:
        k = Implies(And(B(i, phi), B(i, Implies(phi, psi))), B(i, psi))
        for w in s.structure.worlds:
            assert entails(PointedKripke(s.structure, w), k)


@given(structures)
@settings(max_examples=150, deadline=None)
def test_axiom_d_iff_serial(s):
    fc = classify_frame(s.structure)
    for i in s.agents:
        valid = all(entails(PointedKripke(s.structure, w), Not(B(i, FALSE))) for w in s.structure.worlds)
        assert valid == fc.agents[i].serial


@given(structures)
@settings(max_examples=150, deadline=None)
def test_axiom_t_on_reflexive(s):
    fc = classify_frame(s.structure)
    for i in s.agents:
        if fc.agents[i].reflexive:
            for phi in (Atom("p"), Not(Atom("q")), B("a", Atom("r")), TRUE):
                for w in s.structure.worlds:
                    assert entails(PointedKripke(s.structure, w), Implies(B(i, phi), phi))
