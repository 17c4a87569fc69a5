import itertools
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from attr import attrib, attrs, evolve

from .ascription import ascribe, ascribe_on_demand
from .attitudes import (
    BELIEF,
    GOAL,
    INTENTION,
    Attitude,
    Formula,
    as_formula,
    formula_from_term,
    normalize_formula,
    substitute_formula,
)
from .environments import BeliefStore, IntoViewpoint, Status, Viewpoint, _address, _entry, entries, holds
from .planner import FINISH, START, LimitExceeded, Operator, Plan, PlanningResult, search
from .speech_acts import CONTENT, HEARER, SPEAKER, ActClass, ActInstance, ActLibrary, resolve_preconditions
from .terms import Compound, Constant, Proposition, parse_term, unify

logger = logging.getLogger(__name__)


def compile_formula(f, holder) -> Proposition:
    r"""Flat planner fact for a formula as seen by ``holder``.

    Examples:
        >>> compile_formula(Attitude(BELIEF, "s", Attitude(BELIEF, "h", Proposition("p"))), "s")
        believe(h, p)
    """
    if isinstance(holder, str):
        holder = Constant(holder)
    return Proposition(normalize_formula(as_formula(f), holder).as_term())


def decompile(fact: Proposition) -> Formula:
    """Inverse of :func:`compile_formula`, reserved functors become attitudes again."""
    return formula_from_term(fact.as_term())


def _trustworthy(agent: str) -> Proposition:
    return Proposition(Compound("trustworthy", (Constant(agent),)))


def visible_facts(store: BeliefStore, v: IntoViewpoint) -> FrozenSet[Proposition]:
    r"""Everything stored at ``v`` and below, as flat facts for the holder of ``v``.

    Entries of nested environments are wrapped in ``believe`` (or ``goal`` /
    ``intend``) for every hop below ``v``. Agents trusted at ``v`` show up as
    ``trustworthy(Agent)``.
    """
    v, _ = _address(store, v, BELIEF)
    holder = v.holder(store.owner)
    facts = set()
    for (kv, at), es in store.environments.items():
        if not v.is_prefix_of(kv):
            continue
        wrap = kv.agents[v.depth :]
        for e in es:
            f = e
            if at is not BELIEF:
                f = Attitude(at, kv.holder(store.owner), f)
                wrap = kv.agents[v.depth : -1] if kv.depth > v.depth else ()
            for agent in reversed(wrap):
                f = Attitude(BELIEF, agent, f)
            facts.add(compile_formula(f, holder))
    for tv, agent in store.trust:
        if tv == v:
            facts.add(_trustworthy(agent))
    return frozenset(facts)


def _dedupe(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


def act_operators(library: ActLibrary, speaker: str) -> List[Operator]:
    r"""Speech acts as planning operators for ``speaker``.

    Preconditions are the resolved act conditions. Add effects are what the
    speaker update derives (``believe(Hearer, C)`` per condition), the
    contents of the speaker's goal conditions for acts of the inform class,
    and ``performed(act)``.
    """
    s = Constant(speaker)
    operators = []
    for name in sorted(library):
        conditions = [substitute_formula({SPEAKER: s}, c) for c in resolve_preconditions(library, name)]
        pre = [compile_formula(c, s) for c in conditions]
        add = [compile_formula(Attitude(BELIEF, HEARER, c), s) for c in conditions]
        if library[name].act_class is ActClass.INFORM:
            for c in conditions:
                if isinstance(c, Attitude) and c.kind is GOAL and not c.negated and c.agent == s:
                    add.append(compile_formula(c.body, s))
        head = Compound(name, (s, HEARER, CONTENT))
        add.append(Proposition(Compound("performed", (head,))))
        operators.append(Operator(name, (s, HEARER, CONTENT), _dedupe(pre), _dedupe(add)))
    return operators


def accept_operators(facts: Iterable[Proposition], holder: str) -> List[Operator]:
    r"""Ground acceptance steps for beliefs of trusted agents visible in ``facts``.

    One ``accept_belief(holder, Agent, P)`` per ``believe(Agent, P)`` with
    ``trustworthy(Agent)`` among the facts and neither ``P`` nor its negation
    already believed.
    """
    facts = set(facts)
    h = Constant(holder)
    operators = []
    for fact in sorted(facts, key=str):
        f = decompile(fact)
        if not (isinstance(f, Attitude) and f.kind is BELIEF and not f.negated):
            continue
        if not isinstance(f.agent, Constant) or _trustworthy(f.agent.name) not in facts:
            continue
        content = compile_formula(f.body, h)
        if content in facts or content.negate() in facts:
            continue
        operators.append(
            Operator(
                "accept_belief",
                (h, f.agent, content.as_term()),
                [fact, _trustworthy(f.agent.name)],
                [content],
                mental=True,
            )
        )
    return operators


class _Ascriber:
    """Planner hook: default ascription steps for conditions unknown at ``v``.

    Every successful query extends ``self.store``. Answers are cached per
    condition so the search stays deterministic.
    """

    def __init__(self, store: BeliefStore, v: Viewpoint, max_depth: Optional[int]):
        self.store = store
        self.v = v
        self.max_depth = max_depth
        self.cache: Dict[Proposition, List[Operator]] = {}

    def __call__(self, q: Proposition) -> List[Operator]:
        if q not in self.cache:
            self.cache[q] = self._ascribe(q)
        return self.cache[q]

    def _ascribe(self, q: Proposition) -> List[Operator]:
        if self.v.depth == 0:
            return []
        f = decompile(q)
        if isinstance(f, Attitude) and not f.negated and f.kind is not BELIEF:
            return []
        if holds(self.store, self.v, BELIEF, f) is not Status.UNKNOWN:
            return []
        self.store, status = ascribe_on_demand(self.store, self.v, BELIEF, f, max_depth=self.max_depth)
        if status is not Status.HOLDS:
            return []
        owner = self.store.owner
        source, target = self.v.parent.holder(owner), self.v.holder(owner)
        logger.debug("ascribed %s from %s to %s while planning", q, source, target)
        return [
            Operator(
                "default_belief_ascription",
                (Constant(source), Constant(target), q.as_term()),
                add=[q],
                mental=True,
            )
        ]


def _operators(store: BeliefStore, holder: str, initial) -> List[Operator]:
    return (
        list(store.operators.values())
        + act_operators(store.act_library, holder)
        + accept_operators(initial, holder)
    )


def _goal_facts(goals, holder: str) -> List[Proposition]:
    return [compile_formula(_entry(g), holder) for g in goals]


def _wanted(goals: Sequence[Proposition], holder: str) -> List[Proposition]:
    return [compile_formula(Attitude(GOAL, holder, decompile(g)), holder) for g in goals]


def simulate_search(
    store: BeliefStore,
    v: IntoViewpoint,
    goals: Iterable,
    *,
    max_steps: Optional[int] = None,
    max_nodes: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> Tuple[BeliefStore, PlanningResult]:
    """Like :func:`simulate` but returns the full `PlanningResult`."""
    v, _ = _address(store, v, BELIEF)
    holder = v.holder(store.owner)
    goals = _goal_facts(goals, holder)
    initial = set(visible_facts(store, v)) | set(_wanted(goals, holder))
    hook = _Ascriber(store, v, max_depth)
    result = search(
        initial, goals, _operators(store, holder, initial), max_steps=max_steps, max_nodes=max_nodes, hook=hook
    )
    store = hook.store
    if result.plan is not None:
        store = ascribe_plan(store, v, result.plan, max_depth=max_depth)
    return store, result


def simulate(
    store: BeliefStore,
    v: IntoViewpoint,
    goals: Iterable,
    *,
    max_steps: Optional[int] = None,
    max_nodes: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> Tuple[BeliefStore, Optional[Plan]]:
    r"""Plan for the holder of ``v`` from what it is believed to believe.

    The initial state is :func:`visible_facts` at ``v`` plus the holder's
    goals. A condition unknown at ``v`` triggers an on-demand ascription; when
    that succeeds a mental ``default_belief_ascription`` step records the
    dependency. On success the plan is ascribed to the holder
    (:func:`ascribe_plan`).

    Returns:
        ``(store, plan)``, ``plan`` is ``None`` when no plan exists within the limits

    Raises:
        DepthError: from on-demand ascription
        LimitExceeded: from the search
    """
    store, result = simulate_search(store, v, goals, max_steps=max_steps, max_nodes=max_nodes, max_depth=max_depth)
    return store, result.plan


def achieved_goals(plan: Plan) -> List[Proposition]:
    """Goals the plan achieves with a step of the agent (not the initial state, not a mental step)."""
    goals = []
    for link in plan.links:
        if link.consumer != FINISH or link.producer == START:
            continue
        if plan.steps[link.producer].operator.mental:
            continue
        g = link.condition.substitute(plan.bindings)
        if g not in goals:
            goals.append(g)
    return sorted(goals, key=str)


def ascribe_plan(
    store: BeliefStore,
    v: IntoViewpoint,
    plan: Plan,
    goals: Optional[Iterable[Proposition]] = None,
    *,
    max_depth: Optional[int] = None,
) -> BeliefStore:
    r"""Ascribe a plan to the holder of ``v``.

    Non-mental steps enter the holder's intention space, the achieved goals
    (or ``goals`` when given) its goal space. Entries contradicted there are
    skipped.
    """
    v, _ = _address(store, v, BELIEF)
    for op in plan.actions():
        if op.mental:
            continue
        store, _ = ascribe(store, v, INTENTION, Proposition(op.head), max_depth=max_depth)
    if goals is None:
        goals = achieved_goals(plan)
    for g in goals:
        store, _ = ascribe(store, v, GOAL, decompile(g), max_depth=max_depth)
    return store


@attrs(frozen=True)
class RecognitionResult:
    r"""An explanation of an observed action.

    Args:
        plan: plan containing the observed step
        ascribed_goals: the candidate goals the plan achieves, as flat facts
        observed: the observed act or operator instance
    """

    plan: Plan = attrib()
    ascribed_goals: Tuple[Proposition, ...] = attrib(converter=tuple)
    observed: object = attrib()


def _observed_operator(store: BeliefStore, holder: str, observed) -> Operator:
    if isinstance(observed, str):
        observed = parse_term(observed, ground_context=True)
    if isinstance(observed, Proposition):
        observed = observed.as_term()
    if isinstance(observed, ActInstance) or (
        isinstance(observed, Compound) and observed.functor in store.act_library and len(observed.args) == 3
    ):
        act = observed if isinstance(observed, ActInstance) else ActInstance.from_term(observed)
        if act.speaker != holder:
            raise ValueError(f"observed act {act} is performed by {act.speaker}, not by {holder}")
        if act.schema not in store.act_library:
            raise ValueError(f"unknown act {act.schema}")
        (op,) = [o for o in act_operators(store.act_library, holder) if o.name == act.schema]
        return op.substitute({HEARER: Constant(act.hearer), CONTENT: act.content.as_term()})

    name = observed.functor if isinstance(observed, Compound) else getattr(observed, "name", None)
    if name not in store.operators:
        raise ValueError(f"unknown operator or act {observed}")
    op = store.operators[name]
    b = unify(op.head, observed)
    if b is None:
        raise ValueError(f"{observed} does not match operator {op}")
    return op.substitute(b)


def candidate_goals(store: BeliefStore, v: IntoViewpoint) -> List[Formula]:
    r"""Goals the holder of ``v`` may be pursuing.

    The goal space at ``v`` plus the goal members of every stereotype the
    holder is believed to fit.
    """
    v, _ = _address(store, v, BELIEF)
    holder = v.holder(store.owner)
    goals = list(entries(store, v, GOAL))
    source = v.parent if v.depth else v
    for name in sorted(store.stereotypes):
        isa = Proposition(Compound("isa", (Constant(holder), Constant(name))))
        if holds(store, source, BELIEF, isa) is not Status.HOLDS and holds(store, v, BELIEF, isa) is not Status.HOLDS:
            continue
        for at, f in store.stereotypes[name]:
            if at is GOAL and f not in goals:
                goals.append(f)
    return goals


def recognize(
    store: BeliefStore,
    v: IntoViewpoint,
    observed,
    *,
    max_steps: Optional[int] = None,
    max_nodes: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> Tuple[BeliefStore, Optional[RecognitionResult]]:
    r"""Explain an observed action of the holder of ``v`` by a plan serving its goals.

    Candidate goals not already achieved are tried in subsets, largest
    first. A subset is explained by a plan that contains the observed step
    and achieves all of it. Among explanations of the largest size the plan
    with fewest steps wins, then the lexicographically smallest action list.
    The winning plan and its goals are ascribed at ``v``.

    Returns:
        ``(store, result)``, ``result`` is ``None`` when nothing explains the observation
    """
    v, _ = _address(store, v, BELIEF)
    holder = v.holder(store.owner)
    observed_op = _observed_operator(store, holder, observed)
    marker = Proposition(Compound("observed", (observed_op.head,)))
    marked = evolve(observed_op, add=observed_op.add + (marker,))

    facts = visible_facts(store, v)
    candidates = [g for g in candidate_goals(store, v) if compile_formula(g, holder) not in facts]
    if not candidates:
        return store, None

    for size in range(len(candidates), 0, -1):
        found = []
        for subset in itertools.combinations(candidates, size):
            goals = _goal_facts(subset, holder)
            initial = set(facts) | set(_wanted(goals, holder))
            hook = _Ascriber(store, v, max_depth)
            operators = _operators(store, holder, initial) + [marked]
            try:
                result = search(
                    initial, goals + [marker], operators, max_steps=max_steps, max_nodes=max_nodes, hook=hook
                )
            except LimitExceeded:
                logger.info("recognition of %s for goals %s hit the node limit", observed_op, list(subset))
                continue
            if result.plan is not None:
                key = (result.plan.num_steps, tuple(repr(a) for a in result.plan.actions()))
                found.append((key, goals, result.plan, hook.store))
        if found:
            _, goals, plan, store = min(found, key=lambda x: x[0])
            store = ascribe_plan(store, v, plan, goals, max_depth=max_depth)
            return store, RecognitionResult(plan, goals, observed)
    return store, None
