"""Multi-agent epistemic planning over Kripke structures and possibilities."""

from .errors import (
    EplanError, GroundingError, InitialStateError, NotExecutableError, ParseError,
    UnknownSymbolError,
)
from .logic import (
    FALSE, TRUE, And, Atom, B, Bottom, C, E, Formula, Implies, Not, Or, Signature, Top,
    format_formula, is_fluent_formula, modal_depth, parse_formula,
)
from .kripke import (
    FrameClass, KripkeStructure, PointedKripke, bisim_contract, canonical_digest,
    classify_frame, dump, entails, pointed,
)
from .possibility import Possibility, PossibilityStore, entails_p, from_kripke, to_kripke
from .update import (
    ActionKind, ActionSpec, Observability, ObservabilityMap, Observer, UpdateModel,
    apply_update, compile_action, is_executable, skip_model,
)
from .epddl import build_initial_state, ground, load, parse_domain, parse_problem
from .search import Plan, SearchConfig, SearchStats, search, successors, validate_plan
from .dot import emit_dot
from .estimator import EpistemicPlanner

__version__ = "0.1.0"

__all__ = [
    "EplanError",
    "GroundingError",
    "InitialStateError",
    "NotExecutableError",
    "ParseError",
    "UnknownSymbolError",
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "B",
    "Bottom",
    "C",
    "E",
    "Formula",
    "Implies",
    "Not",
    "Or",
    "Signature",
    "Top",
    "format_formula",
    "is_fluent_formula",
    "modal_depth",
    "parse_formula",
    "FrameClass",
    "KripkeStructure",
    "PointedKripke",
    "bisim_contract",
    "canonical_digest",
    "classify_frame",
    "dump",
    "entails",
    "pointed",
    "Possibility",
    "PossibilityStore",
    "entails_p",
    "from_kripke",
    "to_kripke",
    "ActionKind",
    "ActionSpec",
    "Observability",
    "ObservabilityMap",
    "Observer",
    "UpdateModel",
    "apply_update",
    "compile_action",
    "is_executable",
    "skip_model",
    "build_initial_state",
    "ground",
    "load",
    "parse_domain",
    "parse_problem",
    "Plan",
    "SearchConfig",
    "SearchStats",
    "search",
    "successors",
    "validate_plan",
    "emit_dot",
    "EpistemicPlanner",
]
