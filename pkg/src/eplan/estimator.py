"""scikit-learn style front door to the planner.

>>> planner = EpistemicPlanner(strategy="bfs").fit(domain_text, problem_text)
>>> planner.predict()
['open', 'peek_a']

``get_params``/``set_params``/``clone`` come from ``BaseEstimator``, so
planner configurations can be swept like any other estimator.
"""

from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .epddl import DomainDecl, ProblemDecl, parse_domain, parse_problem
from .search import SearchConfig, make_task, search, validate_plan


def _read(source):
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8"), str(source)
    return source, None


def check_domain(domain) -> DomainDecl:
    """Accept a DomainDecl, domain text, or a Path to a domain file."""
    if isinstance(domain, DomainDecl):
        return domain
    if isinstance(domain, (str, Path)):
        text, src = _read(domain)
        return parse_domain(text, src)
    raise TypeError(f"expected a DomainDecl, text or Path, got {type(domain).__name__}")


def check_problem(problem, domain: DomainDecl) -> ProblemDecl:
    if isinstance(problem, ProblemDecl):
        if problem.domain != domain:
            raise ValueError("problem was parsed against a different domain")
        return problem
    if isinstance(problem, (str, Path)):
        text, src = _read(problem)
        return parse_problem(text, domain, src)
    raise TypeError(f"expected a ProblemDecl, text or Path, got {type(problem).__name__}")


class EpistemicPlanner(BaseEstimator):
    """Plan for one E-PDDL problem.

    Parameters
    ----------
    representation : {"kripke", "possibility"}
    transition : {"standard", "custom"}
        ``custom`` also makes the domain's update-model schemas available.
    strategy : {"bfs", "hbfs"}
    max_depth, max_nodes : int
        Search budgets.
    prefer_deeper : bool
        Tie-break hbfs toward deeper nodes.

    Attributes
    ----------
    task_ : PlanningTask
    plan_ : Plan or None
    stats_ : SearchStats
    """

    def __init__(self, representation="kripke", transition="standard", strategy="bfs",
                 max_depth=20, max_nodes=1_000_000, prefer_deeper=False):
        self.representation = representation
        self.transition = transition
        self.strategy = strategy
        self.max_depth = max_depth
        self.max_nodes = max_nodes
        self.prefer_deeper = prefer_deeper

    def _config(self):
        return SearchConfig(
            representation=self.representation, transition=self.transition,
            strategy=self.strategy, max_depth=self.max_depth, max_nodes=self.max_nodes,
            prefer_deeper=self.prefer_deeper,
        )

    def fit(self, domain, problem):
        config = self._config()
        self.domain_ = check_domain(domain)
        self.problem_ = check_problem(problem, self.domain_)
        self.task_ = make_task(self.problem_, config.transition, config.representation)
        result = search(self.task_, config)
        self.plan_ = result.plan
        self.stats_ = result.stats
        self.result_ = result
        return self

    def predict(self):
        """The plan as a list of ground action names; raises if none exists."""
        check_is_fitted(self, "task_")
        if self.plan_ is None:
            raise NotFittedError("no plan was found within the search budget")
        return list(self.plan_.actions)

    def transform(self):
        """States visited along the plan, initial state first."""
        check_is_fitted(self, "task_")
        return self.result_.trajectory()

    def score(self, plan=None):
        """1.0 if ``plan`` (default: the found plan) reaches the goal, else 0.0."""
        check_is_fitted(self, "task_")
        if plan is None:
            if self.plan_ is None:
                return 0.0
            plan = self.plan_
        return float(validate_plan(self.task_, plan, self._config()).valid)
