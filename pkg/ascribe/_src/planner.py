import enum
import functools
import logging
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from attr import attrib, attrs, evolve

from .config import _resolve
from .terms import Bindings, Compound, Constant, Proposition, Term, Variable, substitute, unify, variables

logger = logging.getLogger(__name__)

START = 0
FINISH = 1


def _propositions(xs) -> Tuple[Proposition, ...]:
    return tuple(x if isinstance(x, Proposition) else Proposition(x) for x in xs)


@attrs(frozen=True, repr=False)
class Operator:
    r"""STRIPS operator over flat facts.

    Facts are propositions of either polarity. Adding ``p`` also removes
    ``not(p)`` from the state, so a state never holds both.

    Args:
        name: operator name
        params: head arguments, variables are schema parameters
        preconditions: facts required before the step
        add: facts true after the step
        delete: facts no longer true after the step
        mental: the step models reasoning by the planner's owner, not an action of the agent

    Examples:
        >>> Operator("buy", ["A", "X"], ["has(A, money)"], ["owns(A, X)"], ["has(A, money)"])
        buy(A, X)
    """

    name: str = attrib()
    params: Tuple[Term, ...] = attrib(default=(), converter=lambda ps: tuple(_param(p) for p in ps))
    preconditions: Tuple[Proposition, ...] = attrib(default=(), converter=_propositions)
    add: Tuple[Proposition, ...] = attrib(default=(), converter=_propositions)
    delete: Tuple[Proposition, ...] = attrib(default=(), converter=_propositions)
    mental: bool = attrib(default=False, converter=bool)

    def __attrs_post_init__(self):
        allowed = set()
        for p in self.params:
            allowed |= variables(p)
        for e in self.add + self.delete:
            extra = e.variables() - allowed
            if extra:
                raise ValueError(f"operator {self.name}: effect {e} uses {sorted(map(str, extra))} which are not parameters")

    def __repr__(self):
        return repr(self.head)

    @property
    def head(self) -> Term:
        if not self.params:
            return Constant(self.name)
        return Compound(self.name, self.params)

    def variables(self) -> FrozenSet[Variable]:
        vs = set()
        for p in self.params:
            vs |= variables(p)
        for f in self.preconditions + self.add + self.delete:
            vs |= f.variables()
        return frozenset(vs)

    def substitute(self, b: Bindings) -> "Operator":
        if not b:
            return self
        return Operator(
            self.name,
            [substitute(b, p) for p in self.params],
            [p.substitute(b) for p in self.preconditions],
            [p.substitute(b) for p in self.add],
            [p.substitute(b) for p in self.delete],
            self.mental,
        )

    def rename(self, suffix) -> "Operator":
        """Fresh copy of the variables, ``X`` becomes ``X#suffix``."""
        return self.substitute({v: Variable(f"{v.name}#{suffix}") for v in self.variables()})


def _param(p) -> Term:
    if isinstance(p, str):
        return Variable(p) if p[0].isupper() else Constant(p)
    return p


@attrs(frozen=True)
class Step:
    id: int = attrib()
    operator: Operator = attrib()


@attrs(frozen=True)
class CausalLink:
    r"""``producer`` establishes ``condition`` for ``consumer``, nothing may clobber it in between."""

    producer: int = attrib()
    condition: Proposition = attrib()
    consumer: int = attrib()


@attrs(frozen=True)
class Threat:
    link: CausalLink = attrib()
    step: int = attrib()
    effect: Proposition = attrib()


@attrs(frozen=True)
class Plan:
    r"""Partial-order plan.

    Step ``0`` is the start step (its add effects are the initial state) and
    step ``1`` the finish step (its preconditions are the goals).

    Args:
        steps: steps indexed by id
        orderings: pairs ``(a, b)`` meaning ``a`` before ``b``
        links: causal links
        bindings: idempotent variable bindings
        separations: pairs of terms that must never codesignate
        agenda: open ``(condition, consumer)`` pairs, the last one is refined first
    """

    steps: Tuple[Step, ...] = attrib()
    orderings: FrozenSet[Tuple[int, int]] = attrib(converter=frozenset)
    links: Tuple[CausalLink, ...] = attrib(default=())
    bindings: Dict[Variable, Term] = attrib(factory=dict)
    separations: Tuple[Tuple[Term, Term], ...] = attrib(default=())
    agenda: Tuple[Tuple[Proposition, int], ...] = attrib(default=())

    @classmethod
    def initial(cls, initial: Iterable, goals: Iterable) -> "Plan":
        initial = _sorted_facts(initial)
        goals = _sorted_facts(goals)
        start = Operator("start", add=initial)
        finish = Operator("finish", preconditions=goals)
        return cls(
            steps=(Step(START, start), Step(FINISH, finish)),
            orderings={(START, FINISH)},
            agenda=tuple((g, FINISH) for g in reversed(goals)),
        )

    @property
    def num_steps(self) -> int:
        """Steps other than start and finish."""
        return len(self.steps) - 2

    @functools.cached_property
    def _reach(self) -> Dict[int, FrozenSet[int]]:
        successors = {s.id: set() for s in self.steps}
        for a, b in self.orderings:
            successors[a].add(b)
        reach = {}
        for s in successors:
            seen = set()
            todo = list(successors[s])
            while todo:
                x = todo.pop()
                if x not in seen:
                    seen.add(x)
                    todo.extend(successors[x])
            reach[s] = frozenset(seen)
        return reach

    def precedes(self, a: int, b: int) -> bool:
        """Strict order: ``a`` is before ``b`` in every linearization."""
        return b in self._reach[a]

    def ground_operator(self, step_id: int) -> Operator:
        return self.steps[step_id].operator.substitute(self.bindings)

    def order(self) -> List[int]:
        """Topological order of all step ids, smallest id first among ready steps."""
        preds = {s.id: {a for a, b in self.orderings if b == s.id} for s in self.steps}
        done, order = set(), []
        while len(order) < len(self.steps):
            ready = [i for i in sorted(preds) if i not in done and preds[i] <= done]
            order.append(ready[0])
            done.add(ready[0])
        return order

    def actions(self) -> List[Operator]:
        r"""One linearization of the plan's actions, ground under the bindings."""
        return [self.ground_operator(i) for i in self.order() if i not in (START, FINISH)]

    @property
    def initial_state(self) -> Tuple[Proposition, ...]:
        return self.steps[START].operator.add

    @property
    def goals(self) -> Tuple[Proposition, ...]:
        return self.steps[FINISH].operator.preconditions

    def canonical(self):
        """Key identifying the plan's steps, links and ordering."""
        return (
            tuple(repr(self.ground_operator(s.id)) for s in self.steps),
            tuple(sorted((l.producer, str(l.condition.substitute(self.bindings)), l.consumer) for l in self.links)),
            tuple(sorted((a, b) for a in self._reach for b in self._reach[a])),
        )


def _sorted_facts(facts) -> Tuple[Proposition, ...]:
    return tuple(sorted(set(_propositions(facts)), key=str))


class SearchStatus(enum.Enum):
    FOUND = "found"
    NO_PLAN = "no-plan"
    STEP_LIMIT = "step-limit"

    def __repr__(self):
        return self.name


class PlanningResult(NamedTuple):
    plan: Optional[Plan]
    status: SearchStatus
    nodes: int


class LimitExceeded(ValueError):
    """The node budget ran out before the search finished."""

    def __init__(self, frontier: int, nodes: int):
        super().__init__(f"planner node limit exceeded after {nodes} nodes with {frontier} plans on the frontier")
        self.frontier = frontier
        self.nodes = nodes


Hook = Callable[[Proposition], Sequence[Operator]]


def _consistent(bindings: Bindings, separations) -> bool:
    return all(substitute(bindings, a) != substitute(bindings, b) for a, b in separations)


def _unify_facts(a: Proposition, b: Proposition, bindings: Bindings) -> Optional[Bindings]:
    return unify(a.as_term(), b.as_term(), bindings)


def _clobbers(op: Operator) -> Tuple[Proposition, ...]:
    # deleting p, adding not(p) and, for systematicity, adding p again
    return op.delete + tuple(a.negate() for a in op.add) + op.add


def threats(plan: Plan) -> List[Threat]:
    r"""Steps that may fall inside a causal link and touch its condition."""
    found = []
    for link in plan.links:
        for step in plan.steps:
            if step.id in (START, FINISH, link.producer, link.consumer):
                continue
            if plan.precedes(step.id, link.producer) or plan.precedes(link.consumer, step.id):
                continue
            for effect in _clobbers(step.operator):
                b = _unify_facts(effect, link.condition, plan.bindings)
                if b is not None and _consistent(b, plan.separations):
                    found.append(Threat(link, step.id, effect))
                    break
    return found


def _add_ordering(plan: Plan, a: int, b: int) -> Optional[FrozenSet[Tuple[int, int]]]:
    if a == b or plan.precedes(b, a):
        return None
    return plan.orderings | {(a, b)}


def resolve_threat(plan: Plan, threat: Threat) -> List[Plan]:
    r"""Children of a plan in which the threat is resolved.

    The branches are mutually exclusive. With ``(X1, t1) ... (Xk, tk)`` the
    bindings the threat needs, child ``i`` codesignates the first ``i - 1``
    pairs and separates pair ``i``. The last two children codesignate all of
    them and order the threat before the producer (promotion) or after the
    consumer (demotion). Inconsistent children are dropped.
    """
    link = threat.link
    needed = _unify_facts(threat.effect, link.condition, plan.bindings)
    if needed is None:
        return [plan]
    pairs = [(v, needed[v]) for v in sorted(needed, key=lambda v: v.name) if v not in plan.bindings]

    children = []
    bindings = plan.bindings
    for v, value in pairs:
        separations = plan.separations + ((v, value),)
        if _consistent(bindings, separations):
            children.append(evolve(plan, bindings=bindings, separations=separations))
        bindings = unify(v, value, bindings)
        if bindings is None or not _consistent(bindings, plan.separations):
            return children

    for a, b in [(threat.step, link.producer), (link.consumer, threat.step)]:
        orderings = _add_ordering(plan, a, b)
        if orderings is not None:
            children.append(evolve(plan, bindings=bindings, orderings=orderings))
    return children


def _establish(plan: Plan, operators: Sequence[Operator], bound: int, hook: Optional[Hook]):
    """Children closing the last open condition, and whether the step bound cut any off."""
    (q, consumer), rest = plan.agenda[-1], plan.agenda[:-1]
    children = []
    for step in plan.steps:
        if step.id in (consumer, FINISH) or plan.precedes(consumer, step.id):
            continue
        for effect in step.operator.add:
            b = _unify_facts(effect, q, plan.bindings)
            if b is None or not _consistent(b, plan.separations):
                continue
            orderings = _add_ordering(plan, step.id, consumer)
            if orderings is None:
                continue
            children.append(
                evolve(
                    plan,
                    bindings=b,
                    orderings=orderings,
                    links=plan.links + (CausalLink(step.id, q, consumer),),
                    agenda=rest,
                )
            )

    candidates = list(operators)
    if hook is not None:
        ground_q = q.substitute(plan.bindings)
        if ground_q.is_ground():
            candidates = sorted(candidates + list(hook(ground_q)), key=lambda o: (o.name, repr(o)))

    cutoff = False
    sid = len(plan.steps)
    for op in candidates:
        op = op.rename(sid)
        for effect in op.add:
            b = _unify_facts(effect, q, plan.bindings)
            if b is None or not _consistent(b, plan.separations):
                continue
            if plan.num_steps >= bound:
                cutoff = True
                continue
            children.append(
                evolve(
                    plan,
                    steps=plan.steps + (Step(sid, op),),
                    bindings=b,
                    orderings=plan.orderings | {(START, sid), (sid, FINISH), (sid, consumer)},
                    links=plan.links + (CausalLink(sid, q, consumer),),
                    agenda=rest + tuple((p, sid) for p in reversed(op.preconditions)),
                )
            )
    return children, cutoff


def _refine(plan: Plan, operators, bound, hook):
    """``(children, cutoff)``, or ``None`` when the plan is complete."""
    found = threats(plan)
    if found:
        return resolve_threat(plan, found[0]), False
    if not plan.agenda:
        return None
    return _establish(plan, operators, bound, hook)


def _walk(root: Plan, operators, bound: int, hook, max_nodes: int, nodes: int, collect: bool):
    """Depth-first search of the refinement tree, first child first."""
    stack = [root]
    complete = []
    cutoff = False
    while stack:
        plan = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise LimitExceeded(frontier=len(stack) + 1, nodes=nodes)
        refined = _refine(plan, operators, bound, hook)
        if refined is None:
            complete.append(plan)
            if not collect:
                break
            continue
        children, cut = refined
        cutoff = cutoff or cut
        stack.extend(reversed(children))
    return complete, cutoff, nodes


def _ground_leftovers(plan: Plan) -> Plan:
    free = set()
    for s in plan.steps:
        free |= s.operator.substitute(plan.bindings).variables()
    if not free:
        return plan
    bindings = dict(plan.bindings)
    for i, v in enumerate(sorted(free, key=lambda v: v.name)):
        base = v.name.split("#")[0].lower()
        fresh = {v: Constant(f"{base}_{i}")}
        for key in list(bindings):
            bindings[key] = substitute(fresh, bindings[key])
        bindings.update(fresh)
    return evolve(plan, bindings=bindings)


def _prepare(initial, goals, operators):
    root = Plan.initial(initial, goals)
    operators = sorted(operators, key=lambda o: (o.name, repr(o)))
    return root, operators


def search(
    initial: Iterable,
    goals: Iterable,
    operators: Sequence[Operator],
    *,
    max_steps: Optional[int] = None,
    max_nodes: Optional[int] = None,
    hook: Optional[Hook] = None,
) -> PlanningResult:
    r"""Systematic partial-order causal-link planning with iterative deepening.

    Open conditions are refined last-in first-out. Existing steps are tried as
    establishers first (by id), then new steps from operators sorted by name.
    The step bound grows from zero to ``max_steps``.

    Args:
        initial: facts true in the initial state
        goals: ground facts to achieve
        operators: available operators
        max_steps: overrides ``config("max_steps")``
        max_nodes: overrides ``config("max_nodes")``
        hook: called with each ground open condition, returns extra operators able to establish it

    Returns:
        `PlanningResult`. ``NO_PLAN`` means no plan exists at all, ``STEP_LIMIT``
        that none exists within ``max_steps`` steps.

    Raises:
        LimitExceeded: more than ``max_nodes`` plans were expanded
    """
    max_steps = _resolve("max_steps", max_steps)
    max_nodes = _resolve("max_nodes", max_nodes)
    root, operators = _prepare(initial, goals, operators)
    if any(not g.is_ground() for g in root.goals):
        raise ValueError(f"goals must be ground, got {list(root.goals)}")

    nodes = 0
    for bound in range(max_steps + 1):
        complete, cutoff, nodes = _walk(root, operators, bound, hook, max_nodes, nodes, collect=False)
        logger.debug("step bound %d: %d nodes expanded so far", bound, nodes)
        if complete:
            return PlanningResult(_ground_leftovers(complete[0]), SearchStatus.FOUND, nodes)
        if not cutoff:
            return PlanningResult(None, SearchStatus.NO_PLAN, nodes)
    return PlanningResult(None, SearchStatus.STEP_LIMIT, nodes)


def plan(
    initial: Iterable,
    goals: Iterable,
    operators: Sequence[Operator],
    *,
    max_steps: Optional[int] = None,
    max_nodes: Optional[int] = None,
    hook: Optional[Hook] = None,
) -> Optional[Plan]:
    r"""Plan achieving ``goals`` from ``initial``, or ``None``.

    Examples:
        >>> p = plan([], [], [])
        >>> p.num_steps
        0
    """
    return search(initial, goals, operators, max_steps=max_steps, max_nodes=max_nodes, hook=hook).plan


def enumerate_plans(
    initial: Iterable,
    goals: Iterable,
    operators: Sequence[Operator],
    *,
    max_steps: Optional[int] = None,
    max_nodes: Optional[int] = None,
) -> List[Plan]:
    """Every complete plan in the refinement tree bounded by ``max_steps``."""
    max_steps = _resolve("max_steps", max_steps)
    max_nodes = _resolve("max_nodes", max_nodes)
    root, operators = _prepare(initial, goals, operators)
    complete, _, _ = _walk(root, operators, max_steps, None, max_nodes, 0, collect=True)
    return complete
