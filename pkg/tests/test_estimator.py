import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from eplan.epddl import load
from eplan.estimator import EpistemicPlanner, check_domain, check_problem


@pytest.fixture
def coin_paths(fixtures):
    return fixtures / "coin.epddl", fixtures / "coin-p1.epddl"


def test_params_round_trip():
    est = EpistemicPlanner(strategy="hbfs", max_depth=5)
    params = est.get_params()
    assert params["strategy"] == "hbfs" and params["max_depth"] == 5
    est.set_params(representation="possibility")
    assert clone(est).get_params() == est.get_params()


def test_fit_predict_score(coin_paths):
    est = EpistemicPlanner().fit(*coin_paths)
    assert est.predict() == ["open", "peek_a"]
    assert est.score() == 1.0
    assert est.score(["open"]) == 0.0
    assert len(est.transform()) == 3


def test_accepts_text_and_declarations(coin_paths):
    d_path, p_path = coin_paths
    est = EpistemicPlanner(representation="possibility").fit(d_path.read_text(), p_path.read_text())
    assert est.predict() == ["open", "peek_a"]
    d, p = load(*coin_paths)
    assert EpistemicPlanner().fit(d, p).predict() == ["open", "peek_a"]


def test_unfitted():
    with pytest.raises(NotFittedError):
        EpistemicPlanner().predict()


def test_no_plan_raises_on_predict(fixtures):
    est = EpistemicPlanner(max_depth=3).fit(fixtures / "secret.epddl", fixtures / "secret-p1.epddl")
    assert est.plan_ is None and est.score() == 0.0
    with pytest.raises(NotFittedError):
        est.predict()


def test_check_helpers(coin_paths, fixtures):
    d = check_domain(coin_paths[0])
    assert check_domain(d) is d
    p = check_problem(coin_paths[1], d)
    assert check_problem(p, d) is p
    with pytest.raises(TypeError):
        check_domain(42)
    other = check_domain(fixtures / "secret.epddl")
    with pytest.raises(ValueError):
        check_problem(p, other)


def test_invalid_param_surfaces_at_fit(coin_paths):
    with pytest.raises(ValueError):
        EpistemicPlanner(strategy="dfs").fit(*coin_paths)
