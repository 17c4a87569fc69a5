import itertools
from collections import deque
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ascribe._src.ascription import ascribe
from ascribe._src.attitudes import BELIEF, GOAL, INTENTION, Attitude, Formula
from ascribe._src.environments import BeliefStore, ConsistencyError, DepthError, add_stereotype, add_trust, set_topic
from ascribe._src.planner import FINISH, START, Operator, Plan
from ascribe._src.terms import Compound, Constant, Proposition, Term, Variable

AGENTS = ("John", "Mary", "Sue")


def _choice(rng: np.random.Generator, xs: Sequence):
    return xs[int(rng.integers(len(xs)))]


def random_term(
    rng: np.random.Generator,
    depth: int = 2,
    constants: Sequence[str] = ("a", "b", "c"),
    functors: Sequence[str] = ("f", "g"),
    variables: Sequence[str] = (),
) -> Term:
    """Random term over the given symbols."""
    leaves = [Constant(c) for c in constants] + [Variable(v) for v in variables]
    if depth == 0 or rng.random() < 0.4:
        return _choice(rng, leaves)
    arity = int(rng.integers(1, 3))
    return Compound(_choice(rng, functors), tuple(random_term(rng, depth - 1, constants, functors, variables) for _ in range(arity)))


def random_proposition(rng: np.random.Generator) -> Proposition:
    """Ground proposition ``pred(arg)`` of random polarity."""
    body = Compound(_choice(rng, ("on", "round", "has")), (Constant(_choice(rng, ("world", "coffee", "car"))),))
    return Proposition(body, negated=bool(rng.random() < 0.3))


def random_formula(rng: np.random.Generator, agents: Sequence[str] = AGENTS, depth: int = 2) -> Formula:
    """Ground belief formula nested up to ``depth`` attitudes."""
    if depth == 0 or rng.random() < 0.5:
        return random_proposition(rng)
    f = Attitude(BELIEF, _choice(rng, agents), random_formula(rng, agents, depth - 1))
    if rng.random() < 0.15:
        f = f.negate()
    return f


def random_store(
    rng: np.random.Generator, size: int = 8, agents: Sequence[str] = AGENTS, owner: str = "System"
) -> BeliefStore:
    r"""Consistent store reached through ascriptions, with topics, trust and a stereotype."""
    store = BeliefStore(owner=owner)
    for _ in range(size):
        path = [_choice(rng, agents) for _ in range(int(rng.integers(0, 3)))]
        kind = _choice(rng, (BELIEF, BELIEF, BELIEF, GOAL, INTENTION))
        f = random_formula(rng, agents, depth=1) if kind is BELIEF else random_proposition(rng)
        try:
            store, _ = ascribe(store, path, kind, f)
        except (ConsistencyError, DepthError):
            continue
    if rng.random() < 0.5:
        store = set_topic(store, [_choice(rng, agents)], BELIEF, _choice(rng, ("weather", "kitchen")))
    if rng.random() < 0.5:
        store = add_trust(store, [], _choice(rng, agents))
    if rng.random() < 0.5:
        store = add_stereotype(store, "Doctor", [random_proposition(rng), (GOAL, random_proposition(rng))])
    return store


def random_domain(
    rng: np.random.Generator, num_facts: int = 6, num_operators: int = 4
) -> Tuple[List[Proposition], List[Proposition], List[Operator]]:
    r"""Ground STRIPS micro-domain ``(initial, goals, operators)``.

    Facts are ``p0 ... p{num_facts - 1}``. Every operator adds one or two
    facts and may need or delete others.
    """
    facts = [Proposition(f"p{i}") for i in range(num_facts)]

    def subset(lo, hi, exclude=()):
        pool = [f for f in facts if f not in exclude]
        k = min(int(rng.integers(lo, hi + 1)), len(pool))
        idx = rng.choice(len(pool), size=k, replace=False)
        return [pool[int(i)] for i in sorted(idx)]

    operators = []
    for i in range(num_operators):
        pre = subset(0, 2)
        add = subset(1, 2)
        delete = subset(0, 1, exclude=add)
        operators.append(Operator(f"op{i}", (), pre, add, delete))
    initial = subset(1, 3)
    goals = subset(1, 2)
    return initial, goals, operators


def apply_operator(state: FrozenSet[Proposition], op: Operator) -> Optional[FrozenSet[Proposition]]:
    """Successor state, ``None`` when a precondition is missing."""
    if not all(p in state for p in op.preconditions):
        return None
    removed = set(op.delete) | {a.negate() for a in op.add}
    return frozenset((set(state) - removed) | set(op.add))


def execute(initial: Iterable[Proposition], actions: Iterable[Operator]) -> Optional[FrozenSet[Proposition]]:
    state = frozenset(initial)
    for op in actions:
        state = apply_operator(state, op)
        if state is None:
            return None
    return state


def linearizations(plan: Plan) -> Iterator[List[int]]:
    """Every total order of the plan's action steps consistent with its orderings."""
    ids = [s.id for s in plan.steps if s.id not in (START, FINISH)]
    for order in itertools.permutations(ids):
        if all(not plan.precedes(b, a) for i, a in enumerate(order) for b in order[i + 1 :]):
            yield list(order)


def check_plan(plan: Plan) -> bool:
    r"""Independent validity check: every linearization reaches every goal.

    The plan must be ground.
    """
    for order in linearizations(plan):
        actions = [plan.ground_operator(i) for i in order]
        if any(op.variables() for op in actions):
            return False
        state = execute(plan.initial_state, actions)
        if state is None or not all(g in state for g in plan.goals):
            return False
    return True


def bfs_plan(
    initial: Iterable[Proposition], goals: Iterable[Proposition], operators: Sequence[Operator], max_length: int
) -> Optional[List[Operator]]:
    """Shortest action sequence reaching ``goals``, breadth first over states of ground operators."""
    goals = set(goals)
    start = frozenset(initial)
    queue = deque([(start, [])])
    seen = {start}
    while queue:
        state, actions = queue.popleft()
        if goals <= state:
            return actions
        if len(actions) == max_length:
            continue
        for op in operators:
            nxt = apply_operator(state, op)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, actions + [op]))
    return None
