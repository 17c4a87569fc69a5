import enum
from typing import FrozenSet, Union

from attr import attrib, attrs

from .terms import Bindings, Compound, Constant, Proposition, Term, Variable, parse_term, substitute, variables


class AttitudeType(enum.Enum):
    """Kind of attitude space. The value is the functor used in formulas."""

    BELIEF = "believe"
    GOAL = "goal"
    INTENTION = "intend"

    def __repr__(self):
        return self.name

    @property
    def order(self) -> int:
        return list(AttitudeType).index(self)


BELIEF = AttitudeType.BELIEF
GOAL = AttitudeType.GOAL
INTENTION = AttitudeType.INTENTION

ATTITUDE_FUNCTORS = {a.value: a for a in AttitudeType}


def _as_agent(agent) -> Term:
    if isinstance(agent, str):
        return Constant(agent)
    return agent


@attrs(frozen=True, repr=False)
class Attitude:
    r"""An attitude held by an agent towards a formula.

    Nested attitude formulas are meta-level values. They compile to terms
    with the reserved functors ``believe``, ``goal`` and ``intend`` so that the
    planner can treat them as flat facts.

    Args:
        kind: `AttitudeType`
        agent: agent term (a constant, or a role variable inside schemas)
        body: `Proposition` or `Attitude`
        negated: explicit negation of the whole attitude

    Examples:
        >>> Attitude(BELIEF, "S", Proposition("on(coffee, stove)"))
        believe(S, on(coffee, stove))

        >>> formula_from_term(parse_term("goal(Speaker, believe(Hearer, not(Proposition)))"))
        goal(Speaker, believe(Hearer, not(Proposition)))
    """

    kind: AttitudeType = attrib()
    agent: Term = attrib(converter=_as_agent)
    body: "Formula" = attrib()
    negated: bool = attrib(default=False, converter=bool)

    def __repr__(self):
        return repr(self.as_term())

    def as_term(self) -> Term:
        t = Compound(self.kind.value, (self.agent, self.body.as_term()))
        if self.negated:
            return Compound("not", (t,))
        return t

    def negate(self) -> "Attitude":
        return Attitude(self.kind, self.agent, self.body, not self.negated)

    def substitute(self, b: Bindings) -> "Formula":
        return formula_from_term(substitute(b, self.as_term()))

    def variables(self) -> FrozenSet[Variable]:
        return variables(self.as_term())

    def is_ground(self) -> bool:
        return not self.variables()

    def depth(self) -> int:
        return 1 + self.body.depth()


Formula = Union[Proposition, Attitude]


def formula_from_term(t: Term) -> Formula:
    """Read reserved attitude functors of arity two as `Attitude` wrappers."""
    negated = False
    while isinstance(t, Compound) and t.functor == "not" and len(t.args) == 1:
        t = t.args[0]
        negated = not negated
    if isinstance(t, Compound) and t.functor in ATTITUDE_FUNCTORS and len(t.args) == 2:
        return Attitude(ATTITUDE_FUNCTORS[t.functor], t.args[0], formula_from_term(t.args[1]), negated)
    return Proposition(t, negated)


def parse_formula(text: str, ground_context: bool = False) -> Formula:
    r"""Read an attitude formula from text.

    Examples:
        >>> parse_formula("believe(S, believe(H, not(p)))").depth()
        2
    """
    return formula_from_term(parse_term(text, ground_context))


def as_formula(x) -> Formula:
    if isinstance(x, (Proposition, Attitude)):
        return x
    if isinstance(x, str):
        return parse_formula(x)
    if hasattr(x, "as_proposition"):
        return x.as_proposition()
    return formula_from_term(x)


def substitute_formula(b: Bindings, f: Formula) -> Formula:
    return formula_from_term(substitute(b, f.as_term()))


def normalize_formula(f: Formula, holder: Term) -> Formula:
    r"""Canonical form of a formula as seen by ``holder``.

    ``believe(holder, F)`` collapses to ``F``, and ``believe(A, goal(A, F))``
    collapses to ``goal(A, F)``. Negated attitudes and the bodies of goals
    and intentions are left as written.

    Examples:
        >>> normalize_formula(parse_formula("believe(s, believe(h, believe(h, p)))"), Constant("s"))
        believe(h, p)
    """
    holder = _as_agent(holder)
    if isinstance(f, Proposition) or f.negated:
        return f
    if f.kind is BELIEF:
        if f.agent == holder:
            return normalize_formula(f.body, holder)
        body = normalize_formula(f.body, f.agent)
        if isinstance(body, Attitude) and not body.negated and body.kind is not BELIEF and body.agent == f.agent:
            return body
        return Attitude(BELIEF, f.agent, body)
    return f
