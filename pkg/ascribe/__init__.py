__version__ = "0.1.0"

from ascribe._src.config import config
from ascribe._src.terms import (
    Constant,
    Variable,
    Compound,
    Proposition,
    variables,
    is_ground,
    occurs,
    substitute,
    unify,
    negate,
    ground,
    parse_term,
    parse_proposition,
)
from ascribe._src.attitudes import (
    AttitudeType,
    BELIEF,
    GOAL,
    INTENTION,
    Attitude,
    formula_from_term,
    parse_formula,
    normalize_formula,
)
from ascribe._src.environments import (
    Status,
    ConsistencyError,
    DepthError,
    Viewpoint,
    BeliefStore,
    lookup,
    holds,
    assert_attitude,
    retract_attitude,
    entries,
    viewpoints,
    set_topic,
    add_stereotype,
    add_trust,
    is_trusted,
    inconsistencies,
    render,
    render_ascii,
    to_dict,
)
from ascribe._src.ascription import (
    Result,
    AscriptionOutcome,
    PreconditionError,
    ascribe,
    default_ascribe,
    stereotype_ascribe,
    accept_belief,
    ascribe_on_demand,
)
from ascribe._src.speech_acts import (
    ActClass,
    ActSchema,
    ActInstance,
    UnknownActError,
    CycleError,
    Felicity,
    resolve_preconditions,
    bind_conditions,
    check_felicity,
    speaker_effects,
    hearer_effects,
    speaker_update,
    hearer_update,
    define_act,
    check_library,
    default_library,
)
from ascribe._src.planner import (
    Operator,
    Step,
    CausalLink,
    Threat,
    Plan,
    SearchStatus,
    PlanningResult,
    LimitExceeded,
    threats,
    resolve_threat,
    search,
    plan,
    enumerate_plans,
)
from ascribe._src.simulation import (
    RecognitionResult,
    compile_formula,
    decompile,
    visible_facts,
    act_operators,
    accept_operators,
    simulate,
    simulate_search,
    ascribe_plan,
    candidate_goals,
    recognize,
)
from ascribe._src.grammar import ScenarioParseError
from ascribe._src.scenario import parse_scenario, parse_library, save_store, load_store
from ascribe._src.runner import Trace, RunResult, Runner, run, run_file, repl

from ascribe import utils

__all__ = [
    "config",
    "Constant",
    "Variable",
    "Compound",
    "Proposition",
    "variables",
    "is_ground",
    "occurs",
    "substitute",
    "unify",
    "negate",
    "ground",
    "parse_term",
    "parse_proposition",
    "AttitudeType",
    "BELIEF",
    "GOAL",
    "INTENTION",
    "Attitude",
    "formula_from_term",
    "parse_formula",
    "normalize_formula",
    "Status",
    "ConsistencyError",
    "DepthError",
    "Viewpoint",
    "BeliefStore",
    "lookup",
    "holds",
    "assert_attitude",
    "retract_attitude",
    "entries",
    "viewpoints",
    "set_topic",
    "add_stereotype",
    "add_trust",
    "is_trusted",
    "inconsistencies",
    "render",
    "render_ascii",
    "to_dict",
    "Result",
    "AscriptionOutcome",
    "PreconditionError",
    "ascribe",
    "default_ascribe",
    "stereotype_ascribe",
    "accept_belief",
    "ascribe_on_demand",
    "ActClass",
    "ActSchema",
    "ActInstance",
    "UnknownActError",
    "CycleError",
    "Felicity",
    "resolve_preconditions",
    "bind_conditions",
    "check_felicity",
    "speaker_effects",
    "hearer_effects",
    "speaker_update",
    "hearer_update",
    "define_act",
    "check_library",
    "default_library",
    "Operator",
    "Step",
    "CausalLink",
    "Threat",
    "Plan",
    "SearchStatus",
    "PlanningResult",
    "LimitExceeded",
    "threats",
    "resolve_threat",
    "search",
    "plan",
    "enumerate_plans",
    "RecognitionResult",
    "compile_formula",
    "decompile",
    "visible_facts",
    "act_operators",
    "accept_operators",
    "simulate",
    "simulate_search",
    "ascribe_plan",
    "candidate_goals",
    "recognize",
    "ScenarioParseError",
    "parse_scenario",
    "parse_library",
    "save_store",
    "load_store",
    "Trace",
    "RunResult",
    "Runner",
    "run",
    "run_file",
    "repl",
    "utils",
]
