"""Forward search over e-states.

States reached along different paths are identified by canonical
digest, which is sound because bisimilar states satisfy the same goals.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from .epddl import GroundAction, ProblemDecl, build_initial_state, ground
from .errors import EplanError, NotExecutableError
from .kripke import PointedKripke, canonical_digest
from .logic import Formula, conjuncts
from .possibility import Possibility, from_kripke
from .update import execute, holds, is_executable

log = logging.getLogger(__name__)

REPRESENTATIONS = ("kripke", "possibility")
TRANSITIONS = ("standard", "custom")
STRATEGIES = ("bfs", "hbfs")


@dataclass
class SearchConfig:
    representation: str = "kripke"
    transition: str = "standard"
    strategy: str = "bfs"
    max_depth: int = 20
    max_nodes: int = 1_000_000
    time_limit: Optional[float] = None
    prefer_deeper: bool = False
    prune_duplicates: bool = True

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"representation must be one of {REPRESENTATIONS}")
        if self.transition not in TRANSITIONS:
            raise ValueError(f"transition must be one of {TRANSITIONS}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    duplicates: int = 0
    max_depth: int = 0
    wall_time: float = 0.0
    exhausted: str = ""

    def as_text(self) -> str:
        lines = [
            f"expanded={self.expanded}",
            f"generated={self.generated}",
            f"duplicates={self.duplicates}",
            f"max_depth={self.max_depth}",
            f"wall_time={self.wall_time:.6f}",
        ]
        if self.exhausted:
            lines.append(f"exhausted={self.exhausted}")
        return "\n".join(lines) + "\n"


@dataclass(eq=False)
class SearchNode:
    digest: str
    state: Union[PointedKripke, Possibility]
    parent: Optional["SearchNode"] = None
    action: Optional[GroundAction] = None
    depth: int = 0

    def path(self):
        nodes = []
        node = self
        while node is not None:
            nodes.append(node)
            node = node.parent
        return nodes[::-1]


@dataclass(frozen=True)
class Plan:
    actions: tuple = ()

    def __len__(self):
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def as_text(self) -> str:
        if not self.actions:
            return "<empty>\n"
        return "\n".join(self.actions) + "\n"


@dataclass
class PlanningTask:
    """Everything search needs: initial e-state, ground actions and goal."""

    initial: Union[PointedKripke, Possibility]
    actions: list
    goal: Formula

    @property
    def goal_conjuncts(self):
        return conjuncts(self.goal)


def make_task(problem: ProblemDecl, transition="standard", representation="kripke") -> PlanningTask:
    actions = ground(problem.domain, problem)
    initial = build_initial_state(problem, actions)
    if transition == "standard":
        custom = [g.name for g in actions if g.is_custom]
        if custom:
            log.info("standard transition: ignoring %d custom update model(s)", len(custom))
        actions = [g for g in actions if not g.is_custom]
    if representation == "possibility":
        initial = from_kripke(initial)
    return PlanningTask(initial, actions, problem.goal)


def state_digest(state) -> str:
    if isinstance(state, Possibility):
        return state.digest
    return canonical_digest(state)


def successors(state, actions) -> list:
    """``(action, successor)`` for every executable action, in action order."""
    out = []
    for g in actions:
        if is_executable(state, g.action):
            out.append((g, execute(state, g.action)))
    return out


def goal_distance(state, goal_parts) -> int:
    """Number of top-level goal conjuncts not entailed by ``state``."""
    return sum(1 for g in goal_parts if not holds(state, g))


@dataclass
class SearchResult:
    plan: Optional[Plan]
    stats: SearchStats
    final: Optional[SearchNode] = None
    root: Optional[SearchNode] = None

    def __iter__(self):
        return iter((self.plan, self.stats))

    @property
    def solved(self):
        return self.plan is not None

    def trajectory(self):
        """States along the plan, starting from the initial state."""
        node = self.final if self.final is not None else self.root
        return [n.state for n in node.path()] if node is not None else []


def _as_task(problem, config):
    if isinstance(problem, PlanningTask):
        task = problem
        if config.representation == "possibility" and isinstance(task.initial, PointedKripke):
            task = PlanningTask(from_kripke(task.initial), task.actions, task.goal)
        elif config.representation == "kripke" and isinstance(task.initial, Possibility):
            raise ValueError("task holds a possibility but the kripke representation was requested")
        return task
    return make_task(problem, config.transition, config.representation)


def search(problem, config: SearchConfig = None) -> SearchResult:
    """Find a plan for ``problem`` (a ProblemDecl or PlanningTask).

    ``bfs`` returns a shortest plan. ``hbfs`` expands the node with the
    fewest unsatisfied goal conjuncts first; ties go to the shallower
    node (or deeper with ``prefer_deeper``), then to insertion order.
    """
    config = config or SearchConfig()
    task = _as_task(problem, config)
    stats = SearchStats()
    start = time.perf_counter()
    goal_parts = task.goal_conjuncts
    counter = itertools.count()

    root = SearchNode(state_digest(task.initial), task.initial)

    def done(plan_node, reason=""):
        stats.wall_time = time.perf_counter() - start
        stats.exhausted = reason
        if plan_node is None:
            return SearchResult(None, stats, None, root)
        plan = Plan(tuple(n.action.name for n in plan_node.path()[1:]))
        return SearchResult(plan, stats, plan_node, root)

    if holds(task.initial, task.goal):
        return done(root)

    best_depth = {root.digest: 0}
    if config.strategy == "bfs":
        frontier = deque([root])
        pop = frontier.popleft
        push = frontier.append
    else:
        heap = []
        sign = -1 if config.prefer_deeper else 1

        def push(node):
            h = goal_distance(node.state, goal_parts)
            heapq.heappush(heap, (h, sign * node.depth, next(counter), node))

        def pop():
            return heapq.heappop(heap)[-1]

        frontier = heap
        push(root)

    while frontier:
        node = pop()
        if node.depth >= config.max_depth:
            continue
        if config.prune_duplicates and best_depth.get(node.digest, node.depth) < node.depth:
            continue  # reopened later at a smaller depth
        if config.time_limit is not None and time.perf_counter() - start > config.time_limit:
            return done(None, "time")
        stats.expanded += 1
        for action, child_state in successors(node.state, task.actions):
            depth = node.depth + 1
            child = SearchNode(state_digest(child_state), child_state, node, action, depth)
            stats.generated += 1
            stats.max_depth = max(stats.max_depth, depth)
            if config.prune_duplicates:
                known = best_depth.get(child.digest)
                if known is not None and known <= depth:
                    stats.duplicates += 1
                    continue
                best_depth[child.digest] = depth
            if holds(child_state, task.goal):
                return done(child)
            if stats.generated >= config.max_nodes:
                return done(None, "nodes")
            push(child)
    return done(None, "depth" if stats.max_depth >= config.max_depth else "")


@dataclass
class ValidationResult:
    valid: bool
    trace: list = field(default_factory=list)
    failed_step: Optional[int] = None
    states: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


def validate_plan(problem, plan, config: SearchConfig = None) -> ValidationResult:
    """Re-execute ``plan`` step by step and check the goal at the end.

    Steps in the trace are numbered from 1.
    """
    config = config or SearchConfig()
    task = _as_task(problem, config)
    names = list(plan.actions if isinstance(plan, Plan) else plan)
    by_name = {g.name: g for g in task.actions}
    state = task.initial
    trace = []
    states = [state]
    for i, name in enumerate(names, 1):
        g = by_name.get(name)
        if g is None:
            raise EplanError(f"unknown action {name!r} at step {i}")
        if not is_executable(state, g.action):
            trace.append(f"step {i}: {name} not executable")
            return ValidationResult(False, trace, i, states)
        try:
            state = execute(state, g.action)
        except NotExecutableError as exc:
            trace.append(f"step {i}: {name} not executable ({exc})")
            return ValidationResult(False, trace, i, states)
        states.append(state)
        trace.append(f"step {i}: {name} ok")
    if holds(state, task.goal):
        trace.append("goal: satisfied")
        return ValidationResult(True, trace, None, states)
    trace.append("goal: not satisfied")
    return ValidationResult(False, trace, len(names) + 1, states)
