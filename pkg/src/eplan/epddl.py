"""E-PDDL front end: domain/problem parsing, grounding, initial e-state.

Domain files look like PDDL with three additions: an ``(:agents ...)``
section, ``:act-type``/``:observers``/``:p-observers`` on actions, and
``(:update-model ...)`` blocks for hand-written event models::

    (define (domain coin)
      (:agents a b c)
      (:predicates (opened) (heads) (key_a))
      (:action open
        :act-type ontic
        :precondition (key_a)
        :effect (opened)
        :observers (a b c)))

Schema bodies are stored as plain s-expressions (tuples of strings) and
are turned into formulas only when grounded.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Union

from .errors import GroundingError, InitialStateError, ParseError, UnknownSymbolError
from .kripke import KripkeStructure, PointedKripke
from .logic import (
    Atom, B, Formula, Not, Or, atoms_of, evaluate_propositional,
    format_formula, is_fluent_formula, read_formula,
)
from .sexpr import SList, Sym, dumps, from_plain, position, read_all, to_plain
from .update import ActionKind, ActionSpec, Observability, ObservabilityMap, Observer, UpdateModel

log = logging.getLogger(__name__)

EPDDL_VERSION = "0.1"
DEFAULT_GROUND_CAP = 100_000
MAX_INITIAL_FLUENTS = 20


# -- declarations -----------------------------------------------------------


@dataclass(frozen=True)
class ActionSchema:
    name: str
    kind: str
    parameters: tuple = ()
    precondition: object = "true"
    effect: object = None
    observers: tuple = ()
    p_observers: tuple = ()


@dataclass(frozen=True)
class UpdateModelSchema:
    name: str
    parameters: tuple
    events: tuple
    designated: str
    pre: tuple = ()
    post: tuple = ()
    accessibility: tuple = ()


@dataclass(frozen=True)
class DomainDecl:
    name: str
    agents: tuple
    types: tuple = ()
    constants: tuple = ()
    predicates: tuple = ()
    actions: tuple = ()
    update_models: tuple = ()

    @property
    def schemas(self):
        return self.actions + self.update_models

    def predicate(self, name):
        for p, params in self.predicates:
            if p == name:
                return params
        return None


@dataclass(frozen=True)
class Literal:
    fluent: str
    positive: bool = True


@dataclass(frozen=True)
class CommonFluent:
    formula: Formula


@dataclass(frozen=True)
class CommonBelief:
    agent: str
    formula: Formula


@dataclass(frozen=True)
class CommonWhether:
    agent: str
    formula: Formula


InitialStatement = Union[Literal, CommonFluent, CommonBelief, CommonWhether]


@dataclass(frozen=True)
class ProblemDecl:
    name: str
    domain: DomainDecl
    objects: tuple
    init: tuple
    goal: Formula
    fluents: tuple = field(default=(), compare=False, repr=False)

    @property
    def agents(self):
        return self.domain.agents


@dataclass(frozen=True)
class GroundAction:
    name: str
    schema: str
    args: tuple
    action: Union[ActionSpec, UpdateModel]

    @property
    def is_custom(self):
        return isinstance(self.action, UpdateModel)


# -- parsing helpers --------------------------------------------------------


def _fail(msg, node, source):
    line, col = position(node)
    raise ParseError(msg, line, col, source)


def _expect_list(node, what, source):
    if not isinstance(node, list):
        _fail(f"expected {what}", node, source)
    return node


def _typed_list(items, source, what="name"):
    """PDDL typed list ``a b - t c`` into ``[(a, t), (b, t), (c, 'object')]``."""
    out = []
    pending = []
    i = 0
    while i < len(items):
        tok = items[i]
        if isinstance(tok, list):
            _fail(f"expected a {what}", tok, source)
        if tok == "-":
            if i + 1 >= len(items) or isinstance(items[i + 1], list):
                _fail("expected a type after '-'", tok, source)
            if not pending:
                _fail("'-' without preceding names", tok, source)
            out.extend((p, str(items[i + 1])) for p in pending)
            pending = []
            i += 2
            continue
        pending.append(tok)
        i += 1
    out.extend((p, "object") for p in pending)
    return out


def _keyed(node, start, source):
    """Split ``:key value :key value`` pairs."""
    out = {}
    i = start
    while i < len(node):
        key = node[i]
        if isinstance(key, list) or not key.startswith(":"):
            _fail(f"expected a ':keyword', found {dumps(key)}", key, source)
        if i + 1 >= len(node):
            _fail(f"missing value for {key}", key, source)
        if str(key) in out:
            _fail(f"duplicate {key}", key, source)
        out[str(key)] = node[i + 1]
        i += 2
    return out


def _header(expr, kind, source):
    expr = _expect_list(expr, f"(define ({kind} NAME) ...)", source)
    if not expr or expr[0] != "define" or len(expr) < 2:
        _fail(f"expected (define ({kind} NAME) ...)", expr, source)
    head = expr[1]
    if not isinstance(head, list) or len(head) != 2 or head[0] != kind or isinstance(head[1], list):
        _fail(f"expected ({kind} NAME)", head, source)
    return str(head[1]), expr[2:]


def _single(text, source):
    exprs = read_all(text, source)
    if len(exprs) != 1:
        raise ParseError(f"expected one (define ...) form, found {len(exprs)}", 1, 1, source)
    return exprs[0]


def fluent_name(pred, args=()):
    return "_".join([str(pred)] + [str(a) for a in args])


class _Scope:
    """Names visible while checking or grounding one schema."""

    def __init__(self, domain, params=(), objects=(), binding=None, source=None):
        self.domain = domain
        self.source = source
        self.params = dict(params)
        self.binding = binding
        self.types = {a: "agent" for a in domain.agents}
        self.types.update(dict(domain.constants))
        self.types.update(dict(objects))

    def term(self, node):
        if isinstance(node, list):
            _fail("expected a term", node, self.source)
        name = str(node)
        if name.startswith("?"):
            if name not in self.params:
                _fail(f"undeclared parameter {name}", node, self.source)
            if self.binding is not None:
                return self.binding[name], self.params[name]
            return name, self.params[name]
        if name not in self.types:
            _fail(f"undeclared object {name}", node, self.source)
        return name, self.types[name]

    def agent(self, node):
        name, typ = self.term(node)
        if typ != "agent":
            _fail(f"type mismatch: {dumps(node)} is not an agent", node, self.source)
        return name

    def agent_names(self):
        names = set(self.domain.agents)
        if self.binding is None:
            names |= {p for p, t in self.params.items() if t == "agent"}
        return names

    def atom(self, node):
        if isinstance(node, list):
            if not node or isinstance(node[0], list):
                _fail("malformed atom", node, self.source)
            pred, args = node[0], node[1:]
        else:
            pred, args = node, []
            if self.domain.predicate(str(pred)) is None and self.binding is None and pred.startswith("?"):
                _fail(f"parameter {pred} used as a formula", node, self.source)
        sig = self.domain.predicate(str(pred))
        if sig is None:
            if not args and self.binding is not None:
                # a ground fluent written by name, e.g. key_a
                return str(pred)
            _fail(f"undeclared predicate {pred}", node, self.source)
        if len(args) != len(sig):
            _fail(f"predicate {pred} takes {len(sig)} argument(s), got {len(args)}", node, self.source)
        names = []
        for arg, (_, want) in zip(args, sig):
            name, typ = self.term(arg)
            if want != "object" and typ != want:
                _fail(f"type mismatch: {dumps(arg)} is {typ}, {pred} expects {want}", arg, self.source)
            names.append(name)
        return fluent_name(pred, names)

    def formula(self, node, fluents=None):
        try:
            return read_formula(
                node, fluents, self.agent_names(), self.source,
                atom_resolver=self.atom, agent_resolver=lambda n: self.agent(n),
            )
        except UnknownSymbolError as exc:
            line, col = position(node)
            raise ParseError(str(exc), line, col, self.source) from None


# -- domain -----------------------------------------------------------------


def _parse_params(node, domain_types, source):
    node = _expect_list(node, "a parameter list", source)
    params = _typed_list(node, source, "parameter")
    seen = set()
    for name, typ in params:
        if not name.startswith("?"):
            _fail(f"parameter {name} must start with '?'", name, source)
        if name in seen:
            _fail(f"duplicate parameter {name}", name, source)
        if typ not in domain_types:
            _fail(f"unknown type {typ}", name, source)
        seen.add(name)
    return tuple((str(n), t) for n, t in params)


def _effect_literals(node, source):
    """Ontic effect into ``[(atom_node, positive, condition_node)]``."""
    if isinstance(node, list) and node and node[0] == "and":
        parts = node[1:]
    else:
        parts = [node]
    out = []
    for part in parts:
        cond = None
        if isinstance(part, list) and part and part[0] == "when":
            if len(part) != 3:
                _fail("(when CONDITION LITERAL) expected", part, source)
            cond, part = part[1], part[2]
        positive = True
        if isinstance(part, list) and part and part[0] == "not":
            if len(part) != 2:
                _fail("(not ATOM) expected", part, source)
            positive, part = False, part[1]
        out.append((part, positive, cond))
    return out


def _observer_entries(node, source):
    node = _expect_list(node, "an observer list", source)
    out = []
    for item in node:
        if isinstance(item, list):
            if len(item) != 3 or item[0] != "when":
                _fail("observer must be an agent or (when CONDITION AGENT)", item, source)
            out.append((item[2], item[1]))
        else:
            out.append((item, None))
    return out


def _check_action(schema_node, domain, types, source):
    name = schema_node[1]
    if isinstance(name, list):
        _fail("action name expected", name, source)
    keys = _keyed(schema_node, 2, source)
    allowed = {":act-type", ":parameters", ":precondition", ":effect", ":observers", ":p-observers"}
    for k in keys:
        if k not in allowed:
            _fail(f"unknown action key {k}", schema_node, source)
    kind = keys.get(":act-type")
    if kind is None or kind not in ("ontic", "sensing", "announcement"):
        _fail(f"{name}: :act-type must be ontic, sensing or announcement", schema_node, source)
    params = _parse_params(keys.get(":parameters", SList()), types, source)
    scope = _Scope(domain, params, source=source)
    pre = keys.get(":precondition", Sym("true"))
    scope.formula(pre)
    if ":effect" not in keys:
        _fail(f"{name}: missing :effect", schema_node, source)
    eff = keys[":effect"]
    if kind == "ontic":
        seen = set()
        for atom, _, cond in _effect_literals(eff, source):
            f = scope.atom(atom)
            if f in seen:
                _fail(f"{name}: fluent assigned twice", atom, source)
            seen.add(f)
            if cond is not None:
                scope.formula(cond)
    elif kind == "sensing":
        scope.atom(eff)
    else:
        scope.formula(eff)
    observers = keys.get(":observers", SList())
    p_observers = keys.get(":p-observers", SList())
    if kind == "ontic" and len(_expect_list(p_observers, "an observer list", source)):
        _fail(f"{name}: ontic actions cannot have partial observers", p_observers, source)
    for obs in (observers, p_observers):
        for ag, guard in _observer_entries(obs, source):
            scope.agent(ag)
            if guard is not None:
                scope.formula(guard)
    return ActionSchema(
        str(name), str(kind), params, to_plain(pre), to_plain(eff),
        to_plain(observers), to_plain(p_observers),
    )


def _check_update_model(node, domain, types, source):
    name = node[1]
    if isinstance(name, list):
        _fail("update-model name expected", name, source)
    keys = _keyed(node, 2, source)
    allowed = {":parameters", ":events", ":designated", ":pre", ":post", ":accessibility"}
    for k in keys:
        if k not in allowed:
            _fail(f"unknown update-model key {k}", node, source)
    params = _parse_params(keys.get(":parameters", SList()), types, source)
    scope = _Scope(domain, params, source=source)
    if ":events" not in keys or ":designated" not in keys:
        _fail(f"{name}: :events and :designated are required", node, source)
    events = _expect_list(keys[":events"], "an event list", source)
    if not events or any(isinstance(e, list) for e in events):
        _fail(f"{name}: events must be a nonempty list of names", keys[":events"], source)
    if len(set(events)) != len(events):
        _fail(f"{name}: duplicate event", keys[":events"], source)

    def event(n):
        if isinstance(n, list) or n not in events:
            _fail(f"unknown event {dumps(n)}", n, source)
        return str(n)

    designated = event(keys[":designated"])
    pre = []
    for entry in _expect_list(keys.get(":pre", SList()), "a precondition list", source):
        if not isinstance(entry, list) or len(entry) != 2:
            _fail("(EVENT FORMULA) expected", entry, source)
        scope.formula(entry[1])
        pre.append((event(entry[0]), to_plain(entry[1])))
    post = []
    for entry in _expect_list(keys.get(":post", SList()), "a postcondition list", source):
        if not isinstance(entry, list) or not entry:
            _fail("(EVENT (ATOM FORMULA) ...) expected", entry, source)
        assigns = []
        for a in entry[1:]:
            if not isinstance(a, list) or len(a) != 2:
                _fail("(ATOM FORMULA) expected", a, source)
            scope.atom(a[0])
            scope.formula(a[1])
            assigns.append((to_plain(a[0]), to_plain(a[1])))
        post.append((event(entry[0]), tuple(assigns)))
    access = []
    for entry in _expect_list(keys.get(":accessibility", SList()), "an accessibility list", source):
        if not isinstance(entry, list) or not entry:
            _fail("(AGENT (E1 E2) ...) expected", entry, source)
        scope.agent(entry[0])
        pairs = []
        for pr in entry[1:]:
            if not isinstance(pr, list) or len(pr) != 2:
                _fail("(E1 E2) expected", pr, source)
            pairs.append((event(pr[0]), event(pr[1])))
        access.append((str(entry[0]), tuple(pairs)))
    return UpdateModelSchema(
        str(name), params, tuple(str(e) for e in events), designated,
        tuple(pre), tuple(post), tuple(access),
    )


def parse_domain(text: str, source: str = None) -> DomainDecl:
    name, body = _header(_single(text, source), "domain", source)
    agents, types, constants, predicates = None, ["agent", "object"], [], []
    action_nodes, model_nodes = [], []
    names = set()
    for section in body:
        section = _expect_list(section, "a domain section", source)
        if not section or isinstance(section[0], list):
            _fail("malformed section", section, source)
        key = section[0]
        if key == ":epddl":
            if len(section) != 2 or str(section[1]) != EPDDL_VERSION:
                _fail(f"unsupported E-PDDL version (supported: {EPDDL_VERSION})", section, source)
        elif key == ":requirements":
            pass
        elif key == ":agents":
            if agents is not None:
                _fail("duplicate :agents section", section, source)
            if len(section) == 1:
                _fail("the agent set must be nonempty", section, source)
            agents = []
            for a in section[1:]:
                if isinstance(a, list) or a in agents:
                    _fail("agents must be distinct names", a, source)
                agents.append(str(a))
        elif key == ":types":
            for t, _parent in _typed_list(section[1:], source, "type"):
                if t not in types:
                    types.append(str(t))
        elif key == ":constants":
            constants.extend(_typed_list(section[1:], source, "constant"))
        elif key == ":predicates":
            for p in section[1:]:
                if not isinstance(p, list) or not p or isinstance(p[0], list):
                    _fail("expected (PREDICATE ?param - type ...)", p, source)
                if any(q == p[0] for q, _ in predicates):
                    _fail(f"duplicate predicate {p[0]}", p, source)
                params = _parse_params(SList(p[1:], p.line, p.col), types, source)
                predicates.append((str(p[0]), tuple(t for _, t in params)))
        elif key in (":action", ":update-model"):
            if len(section) < 2 or isinstance(section[1], list):
                _fail(f"{key} needs a name", section, source)
            if section[1] in names:
                _fail(f"duplicate schema name {section[1]}", section, source)
            names.add(section[1])
            (action_nodes if key == ":action" else model_nodes).append(section)
        else:
            _fail(f"unknown domain section {key}", section, source)
    if agents is None:
        raise ParseError("missing (:agents ...) section", 1, 1, source)
    for c, t in constants:
        if t not in types:
            _fail(f"unknown type {t}", c, source)
    preds = tuple((p, tuple(("?", t) for t in ts)) for p, ts in predicates)
    decl = DomainDecl(
        str(name), tuple(agents), tuple(types),
        tuple((str(c), t) for c, t in constants), preds,
    )
    actions = tuple(_check_action(n, decl, types, source) for n in action_nodes)
    models = tuple(_check_update_model(n, decl, types, source) for n in model_nodes)
    return DomainDecl(decl.name, decl.agents, decl.types, decl.constants, preds, actions, models)


# -- problem ----------------------------------------------------------------


def _init_statement(node, scope, fluents, agents, source):
    def ff(n):
        f = scope.formula(n, fluents)
        if not is_fluent_formula(f):
            _fail("expected a fluent formula", n, source)
        return f

    if isinstance(node, list) and node and node[0] == "c":
        if len(node) != 3 or not isinstance(node[1], list):
            _fail("unsupported initial statement", node, source)
        group = {scope.agent(a) for a in node[1]}
        if group != set(agents):
            _fail("initial common-knowledge statements must range over all agents", node, source)
        body = node[2]
        if isinstance(body, list) and body and body[0] == "b":
            if len(body) != 3:
                _fail("unsupported initial statement", node, source)
            return CommonBelief(scope.agent(body[1]), ff(body[2]))
        if isinstance(body, list) and len(body) == 3 and body[0] == "or":
            f = scope.formula(body, fluents)
            left, right = f.left, f.right
            if isinstance(left, B) and isinstance(right, B) and left.agent == right.agent:
                if right.arg == Not(left.arg) and is_fluent_formula(left.arg):
                    return CommonWhether(left.agent, left.arg)
                if left.arg == Not(right.arg) and is_fluent_formula(right.arg):
                    return CommonWhether(left.agent, right.arg)
            _fail("unsupported initial statement", node, source)
        f = scope.formula(body, fluents)
        if not is_fluent_formula(f):
            _fail("unsupported initial statement", node, source)
        return CommonFluent(f)
    positive = True
    inner = node
    if isinstance(node, list) and node and node[0] == "not":
        if len(node) != 2:
            _fail("unsupported initial statement", node, source)
        positive, inner = False, node[1]
    if isinstance(inner, list) and inner and inner[0] in ("b", "e", "c", "and", "or", "imply", "not"):
        _fail("unsupported initial statement", node, source)
    f = scope.formula(inner, fluents)
    if not isinstance(f, Atom):
        _fail("unsupported initial statement", node, source)
    return Literal(f.name, positive)


def ground_fluents(domain: DomainDecl, objects) -> tuple:
    """Every ground instance of every predicate, in declaration order."""
    by_type = _objects_by_type(domain, objects)
    out = []
    for pred, params in domain.predicates:
        for args in itertools.product(*(by_type.get(t, ()) for _, t in params)):
            out.append(fluent_name(pred, args))
    return tuple(dict.fromkeys(out))


def _objects_by_type(domain, objects):
    by_type = {"agent": list(domain.agents)}
    everything = list(domain.agents)
    for name, typ in list(domain.constants) + list(objects):
        by_type.setdefault(typ, []).append(name)
        everything.append(name)
    by_type["object"] = everything
    return by_type


def parse_problem(text: str, domain: DomainDecl, source: str = None) -> ProblemDecl:
    name, body = _header(_single(text, source), "problem", source)
    objects, init_nodes, goal_node, dom_name = [], None, None, None
    for section in body:
        section = _expect_list(section, "a problem section", source)
        if not section or isinstance(section[0], list):
            _fail("malformed section", section, source)
        key = section[0]
        if key == ":domain":
            if len(section) != 2:
                _fail("(:domain NAME) expected", section, source)
            dom_name = str(section[1])
        elif key == ":objects":
            objects.extend(_typed_list(section[1:], source, "object"))
        elif key == ":init":
            init_nodes = section[1:]
        elif key == ":goal":
            if len(section) != 2:
                _fail("(:goal FORMULA) expected", section, source)
            goal_node = section[1]
        elif key == ":requirements":
            pass
        else:
            _fail(f"unknown problem section {key}", section, source)
    if dom_name is not None and dom_name != domain.name:
        raise ParseError(f"problem is for domain {dom_name}, not {domain.name}", 1, 1, source)
    if goal_node is None:
        raise ParseError("missing (:goal ...) section", 1, 1, source)
    known = set(domain.agents) | {c for c, _ in domain.constants}
    for o, t in objects:
        if t == "agent":
            _fail("agents are declared in the domain, not as objects", o, source)
        if t not in domain.types:
            _fail(f"unknown type {t}", o, source)
        if o in known:
            _fail(f"duplicate object {o}", o, source)
        known.add(o)
    objects = tuple((str(o), t) for o, t in objects)
    fluents = ground_fluents(domain, objects)
    scope = _Scope(domain, objects=objects, binding={}, source=source)
    init = tuple(
        _init_statement(n, scope, fluents, domain.agents, source) for n in (init_nodes or ())
    )
    goal = scope.formula(goal_node, fluents)
    return ProblemDecl(str(name), domain, objects, init, goal, fluents)


# -- pretty printing --------------------------------------------------------


def _typed(pairs):
    return " ".join(f"{n} - {t}" for n, t in pairs)


def format_domain(d: DomainDecl) -> str:
    lines = [f"(define (domain {d.name})", f"  (:epddl {EPDDL_VERSION})"]
    lines.append(f"  (:agents {' '.join(d.agents)})")
    extra = [t for t in d.types if t not in ("agent", "object")]
    if extra:
        lines.append(f"  (:types {' '.join(extra)})")
    if d.constants:
        lines.append(f"  (:constants {_typed(d.constants)})")
    preds = " ".join(
        "(" + " ".join([p] + [f"?x{i} - {t}" for i, (_, t) in enumerate(ps)]) + ")"
        for p, ps in d.predicates
    )
    lines.append(f"  (:predicates {preds})")
    for a in d.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :act-type {a.kind}")
        lines.append(f"    :parameters ({_typed(a.parameters)})")
        lines.append(f"    :precondition {dumps(a.precondition)}")
        lines.append(f"    :effect {dumps(a.effect)}")
        lines.append(f"    :observers {dumps(a.observers)}")
        lines.append(f"    :p-observers {dumps(a.p_observers)})")
    for u in d.update_models:
        lines.append(f"  (:update-model {u.name}")
        lines.append(f"    :parameters ({_typed(u.parameters)})")
        lines.append(f"    :events ({' '.join(u.events)})")
        lines.append(f"    :designated {u.designated}")
        lines.append(f"    :pre ({' '.join(dumps((e, f)) for e, f in u.pre)})")
        posts = " ".join(dumps((e,) + tuple(a)) for e, a in u.post)
        lines.append(f"    :post ({posts})")
        acc = " ".join(dumps((ag,) + pairs) for ag, pairs in u.accessibility)
        lines.append(f"    :accessibility ({acc}))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_initial(s: InitialStatement, agents) -> str:
    group = f"({' '.join(agents)})"
    if isinstance(s, Literal):
        return s.fluent if s.positive else f"(not {s.fluent})"
    if isinstance(s, CommonFluent):
        return f"(C {group} {format_formula(s.formula)})"
    if isinstance(s, CommonBelief):
        return f"(C {group} {format_formula(B(s.agent, s.formula))})"
    whether = Or(B(s.agent, s.formula), B(s.agent, Not(s.formula)))
    return f"(C {group} {format_formula(whether)})"


def format_problem(p: ProblemDecl) -> str:
    lines = [f"(define (problem {p.name})", f"  (:domain {p.domain.name})"]
    if p.objects:
        lines.append(f"  (:objects {_typed(p.objects)})")
    lines.append("  (:init")
    lines.extend(f"    {format_initial(s, p.agents)}" for s in p.init)
    lines.append("  )")
    lines.append(f"  (:goal {format_formula(p.goal)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


# -- grounding --------------------------------------------------------------


def _ground_action(schema: ActionSchema, scope: _Scope, fluents, name):
    pre = scope.formula(from_plain(schema.precondition), fluents)
    kwargs = {}
    if schema.kind == "ontic":
        effects = []
        for atom, positive, cond in _effect_literals(from_plain(schema.effect), None):
            effects.append(
                (scope.atom(atom), positive, None if cond is None else scope.formula(cond, fluents))
            )
        kwargs["effects"] = tuple(effects)
    elif schema.kind == "sensing":
        kwargs["sensed"] = scope.atom(from_plain(schema.effect))
    else:
        kwargs["announced"] = scope.formula(from_plain(schema.effect), fluents)
    entries = []
    for obs, group in ((schema.observers, Observability.FULL), (schema.p_observers, Observability.PARTIAL)):
        for ag, guard in _observer_entries(from_plain(obs), None):
            g = None if guard is None else scope.formula(guard, fluents)
            entries.append(Observer(scope.agent(ag), group, g))
    return ActionSpec(name, ActionKind(schema.kind), pre, observability=ObservabilityMap(tuple(entries)), **kwargs)


def _ground_model(schema: UpdateModelSchema, scope: _Scope, fluents, agents, name):
    pre = {e: scope.formula(from_plain(f), fluents) for e, f in schema.pre}
    post = {}
    for e, assigns in schema.post:
        post[e] = {scope.atom(from_plain(a)): scope.formula(from_plain(f), fluents) for a, f in assigns}
    rels = {}
    for ag, pairs in schema.accessibility:
        rels.setdefault(scope.agent(Sym(ag)), set()).update(pairs)
    for a in agents:
        # agents without an accessibility entry see the event as it is
        rels.setdefault(a, {(e, e) for e in schema.events})
    return UpdateModel(schema.events, pre, post, rels, schema.designated, name)


def ground(domain: DomainDecl, problem: ProblemDecl, cap: int = DEFAULT_GROUND_CAP) -> list:
    """Instantiate every schema over the typed objects, in declaration order."""
    by_type = _objects_by_type(domain, problem.objects)
    total = 0
    for s in domain.schemas:
        n = 1
        for _, t in s.parameters:
            n *= len(by_type.get(t, ()))
        total += n
    if total > cap:
        raise GroundingError(f"grounding would produce {total} actions (cap {cap})")
    out = []
    for s in domain.schemas:
        names = [p for p, _ in s.parameters]
        for args in itertools.product(*(by_type.get(t, ()) for _, t in s.parameters)):
            binding = dict(zip(names, args))
            scope = _Scope(domain, s.parameters, problem.objects, binding)
            gname = fluent_name(s.name, args)
            try:
                if isinstance(s, ActionSchema):
                    act = _ground_action(s, scope, problem.fluents, gname)
                else:
                    act = _ground_model(s, scope, problem.fluents, domain.agents, gname)
            except (ParseError, ValueError) as exc:
                raise GroundingError(f"cannot ground {gname}: {exc}") from None
            out.append(GroundAction(gname, s.name, tuple(args), act))
    return out


# -- initial state ----------------------------------------------------------


def mentioned_fluents(problem: ProblemDecl, actions) -> tuple:
    used = set(atoms_of(problem.goal))
    for s in problem.init:
        if isinstance(s, Literal):
            used.add(s.fluent)
        else:
            used |= atoms_of(s.formula)
    for g in actions:
        a = g.action
        if isinstance(a, UpdateModel):
            for e in a.events:
                used |= atoms_of(a.pre[e])
                for f, phi in a.post[e].items():
                    used.add(f)
                    used |= atoms_of(phi)
        else:
            used |= atoms_of(a.executability)
            for f, _, cond in a.effects:
                used.add(f)
                if cond is not None:
                    used |= atoms_of(cond)
            if a.sensed:
                used.add(a.sensed)
            if a.announced is not None:
                used |= atoms_of(a.announced)
            for ob in a.observability.entries:
                if ob.guard is not None:
                    used |= atoms_of(ob.guard)
    return tuple(f for f in problem.fluents if f in used)


def build_initial_state(problem: ProblemDecl, actions=None) -> PointedKripke:
    """The canonical finite model of the initial statements.

    Worlds range over valuations of the mentioned fluents that satisfy
    every common fluent statement; agent ``i`` relates ``w`` to ``w'``
    when ``w'`` satisfies every common belief of ``i`` and both agree on
    every formula ``i`` commonly knows whether.
    """
    if actions is None:
        actions = ground(problem.domain, problem)
    fluents = mentioned_fluents(problem, actions)
    if len(fluents) > MAX_INITIAL_FLUENTS:
        raise InitialStateError(
            f"{len(fluents)} fluents would need 2^{len(fluents)} worlds (limit 2^{MAX_INITIAL_FLUENTS})"
        )
    agents = problem.agents
    literals = {}
    for s in problem.init:
        if isinstance(s, Literal):
            if literals.get(s.fluent, s.positive) != s.positive:
                raise InitialStateError(f"contradictory initial literals for {s.fluent}")
            literals[s.fluent] = s.positive
    actual = frozenset(f for f, v in literals.items() if v)
    defaulted = [f for f in fluents if f not in literals]
    if defaulted:
        log.info("fluents false by default in the initial state: %s", " ".join(defaulted))

    constraints = [s.formula for s in problem.init if isinstance(s, CommonFluent)]
    worlds = []
    for bits in itertools.product((False, True), repeat=len(fluents)):
        v = frozenset(f for f, b in zip(fluents, bits) if b)
        if all(evaluate_propositional(c, v) for c in constraints):
            worlds.append(v)
    if actual not in worlds:
        raise InitialStateError("the designated valuation violates a common fluent statement")

    rels = {}
    for a in agents:
        beliefs = [s.formula for s in problem.init if isinstance(s, CommonBelief) and s.agent == a]
        whethers = [s.formula for s in problem.init if isinstance(s, CommonWhether) and s.agent == a]
        targets = [j for j, v in enumerate(worlds) if all(evaluate_propositional(b, v) for b in beliefs)]
        keys = [tuple(evaluate_propositional(f, v) for f in whethers) for v in worlds]
        rels[a] = {(i, j) for i in range(len(worlds)) for j in targets if keys[i] == keys[j]}
    m = KripkeStructure(tuple(worlds), rels, agents, fluents)
    return PointedKripke(m, worlds.index(actual))


def load(domain_path, problem_path):
    """Read and parse a domain/problem pair from disk."""
    with open(domain_path, encoding="utf-8") as fh:
        d = parse_domain(fh.read(), str(domain_path))
    with open(problem_path, encoding="utf-8") as fh:
        p = parse_problem(fh.read(), d, str(problem_path))
    return d, p


__all__ = [
    "ActionSchema", "UpdateModelSchema", "DomainDecl", "ProblemDecl", "GroundAction",
    "Literal", "CommonFluent", "CommonBelief", "CommonWhether", "InitialStatement",
    "parse_domain", "parse_problem", "format_domain", "format_problem", "ground",
    "ground_fluents", "mentioned_fluents", "build_initial_state", "load", "fluent_name",
]
