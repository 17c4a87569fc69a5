import dataclasses
import enum
import functools
import logging
import os
import warnings
from typing import Dict, List, Mapping, Optional, Tuple

from attr import attrib, attrs

from .ascription import AscriptionOutcome, Result, ascribe
from .attitudes import BELIEF, INTENTION, Attitude, Formula, as_formula, formula_from_term, substitute_formula
from .environments import BeliefStore, Status, Viewpoint, holds, retract_attitude
from .terms import Compound, Constant, Proposition, Term, Variable

logger = logging.getLogger(__name__)

SPEAKER = Variable("Speaker")
HEARER = Variable("Hearer")
CONTENT = Variable("Proposition")
ROLES = (SPEAKER, HEARER, CONTENT)


class ActClass(enum.Enum):
    QUESTION = "question"
    ANSWER = "answer"
    REQUEST = "request"
    INFORM = "inform"

    def __repr__(self):
        return self.name


class UnknownActError(ValueError):
    pass


class CycleError(ValueError):
    pass


def _conditions(conditions) -> Tuple[Formula, ...]:
    return tuple(as_formula(c) for c in conditions)


@attrs(frozen=True)
class ActSchema:
    r"""A speech act type.

    Preconditions are attitude formulas over the role variables ``Speaker``,
    ``Hearer`` and ``Proposition``. A schema with a parent inherits the
    parent's preconditions and may only add to them.

    Args:
        name: act name
        act_class: one of the four `ActClass` values
        parent: name of the more general act, if any
        preconditions: the conditions this schema adds
    """

    name: str = attrib()
    act_class: ActClass = attrib(converter=ActClass)
    parent: Optional[str] = attrib(default=None)
    preconditions: Tuple[Formula, ...] = attrib(default=(), converter=_conditions)

    def __attrs_post_init__(self):
        for c in self.preconditions:
            extra = c.variables() - set(ROLES)
            if extra:
                raise ValueError(
                    f"act {self.name}: condition {c} uses {sorted(map(str, extra))}, "
                    f"only Speaker, Hearer and Proposition are roles"
                )


ActLibrary = Mapping[str, ActSchema]


@dataclasses.dataclass(frozen=True)
class ActInstance:
    r"""A performance of a speech act.

    Examples:
        >>> act = ActInstance("inform", "S", "H", Proposition("on(coffee, stove)"))
        >>> act
        inform(S, H, on(coffee, stove))
    """
    schema: str
    speaker: str
    hearer: str
    content: Formula

    def __post_init__(self):
        object.__setattr__(self, "content", as_formula(self.content))
        if self.speaker == self.hearer:
            raise ValueError(f"{self.schema}: speaker and hearer must differ, got {self.speaker} twice")
        if not self.content.is_ground():
            raise ValueError(f"{self.schema}: content {self.content} is not ground")

    def __repr__(self):
        return repr(self.as_term())

    def as_term(self) -> Term:
        return Compound(self.schema, (Constant(self.speaker), Constant(self.hearer), self.content.as_term()))

    def as_proposition(self) -> Proposition:
        return Proposition(self.as_term())

    def bindings(self) -> Dict[Variable, Term]:
        return {SPEAKER: Constant(self.speaker), HEARER: Constant(self.hearer), CONTENT: self.content.as_term()}

    @classmethod
    def from_term(cls, t: Term) -> "ActInstance":
        if isinstance(t, Proposition):
            t = t.as_term()
        if not (isinstance(t, Compound) and len(t.args) == 3):
            raise ValueError(f"{t} is not an act instance act(Speaker, Hearer, Proposition)")
        speaker, hearer, content = t.args
        if not (isinstance(speaker, Constant) and isinstance(hearer, Constant)):
            raise ValueError(f"{t}: speaker and hearer must be agent symbols")
        return cls(t.functor, speaker.name, hearer.name, formula_from_term(content))


def resolve_preconditions(library: ActLibrary, act_name: str) -> List[Formula]:
    r"""Preconditions of an act including the inherited ones, parents first.

    Raises:
        UnknownActError: the act, or one of its ancestors, is not in the library
        CycleError: the inheritance chain loops

    Examples:
        >>> [str(c) for c in resolve_preconditions(default_library(), "inform")]
        ['believe(Speaker, Proposition)', 'goal(Speaker, believe(Hearer, Proposition))']
    """
    chain = []
    seen = set()
    name = act_name
    while name is not None:
        if name in seen:
            raise CycleError(f"act inheritance cycle through {name} (starting at {act_name})")
        if name not in library:
            raise UnknownActError(f"unknown act {name}" + (f" (ancestor of {act_name})" if name != act_name else ""))
        seen.add(name)
        chain.append(library[name])
        name = library[name].parent

    resolved = []
    for schema in reversed(chain):
        for c in schema.preconditions:
            if c not in resolved:
                resolved.append(c)
    return resolved


def bind_conditions(library: ActLibrary, act: ActInstance) -> List[Formula]:
    """Resolved preconditions with the roles of ``act`` filled in."""
    b = act.bindings()
    return [substitute_formula(b, c) for c in resolve_preconditions(library, act.schema)]


def speaker_viewpoint(store: BeliefStore, agent: str) -> Viewpoint:
    """The store root when the store belongs to ``agent``, else ``agent``'s environment."""
    if store.owner == agent:
        return Viewpoint()
    return Viewpoint([agent])


@attrs(frozen=True)
class Felicity:
    missing: Tuple[Formula, ...] = attrib(default=(), converter=tuple)

    @property
    def felicitous(self) -> bool:
        return not self.missing


def check_felicity(store: BeliefStore, act: ActInstance) -> Felicity:
    r"""Preconditions of ``act`` the speaker does not currently hold.

    Every condition is evaluated in the speaker's own environment, with a
    pure lookup.
    """
    v = speaker_viewpoint(store, act.speaker)
    missing = [c for c in bind_conditions(store.act_library, act) if holds(store, v, BELIEF, c) is not Status.HOLDS]
    return Felicity(missing)


def speaker_effects(library: ActLibrary, act: ActInstance) -> List[Formula]:
    """What performing ``act`` leads the speaker to hold: ``believe(S, believe(H, C))`` per condition."""
    return [Attitude(BELIEF, act.speaker, Attitude(BELIEF, act.hearer, c)) for c in bind_conditions(library, act)]


def hearer_effects(library: ActLibrary, act: ActInstance) -> List[Formula]:
    """What observing ``act`` leads the hearer to hold: ``believe(H, C)`` per condition."""
    return [Attitude(BELIEF, act.hearer, c) for c in bind_conditions(library, act)]


def speaker_update(
    store: BeliefStore, act: ActInstance, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, List[Tuple[Formula, AscriptionOutcome]]]:
    r"""Update the speaker's side after performing ``act``.

    For each resolved condition ``C`` the speaker comes to believe that the
    hearer believes ``C``. Blocked conditions are skipped and reported. The
    intention to perform the act is dropped, goals are left alone.

    Returns:
        ``(store, [(condition, outcome), ...])``

    Raises:
        UnknownActError: the act is not in the store's library
    """
    conditions = bind_conditions(store.act_library, act)
    v = speaker_viewpoint(store, act.speaker)
    target = v.extend(act.hearer)
    outcomes = []
    for c in conditions:
        store, outcome = ascribe(store, target, BELIEF, c, max_depth=max_depth)
        if outcome.result is Result.BLOCKED:
            logger.info("%s: %s not ascribed, %s is held", act, c, outcome.blocking_evidence)
        outcomes.append((c, outcome))
    store = retract_attitude(store, v, INTENTION, act)
    return store, outcomes


def hearer_update(
    store: BeliefStore, act: ActInstance, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, List[Tuple[Formula, AscriptionOutcome]]]:
    r"""Update the hearer's side after observing ``act``.

    For each resolved condition ``C`` the hearer comes to believe ``C``
    itself, one level less nested than the speaker side. The content of the
    act is not adopted, that takes :func:`accept_belief`.

    Returns:
        ``(store, [(condition, outcome), ...])``
    """
    conditions = bind_conditions(store.act_library, act)
    v = speaker_viewpoint(store, act.hearer)
    outcomes = []
    for c in conditions:
        store, outcome = ascribe(store, v, BELIEF, c, max_depth=max_depth)
        if outcome.result is Result.BLOCKED:
            logger.info("%s: %s not ascribed, %s is held", act, c, outcome.blocking_evidence)
        outcomes.append((c, outcome))
    return store, outcomes


def define_act(library: ActLibrary, schema: ActSchema) -> Dict[str, ActSchema]:
    old = library.get(schema.name)
    if old is not None and old.act_class is not schema.act_class:
        warnings.warn(
            f"act {schema.name} is redefined from class {old.act_class.value} to {schema.act_class.value}", stacklevel=2
        )
    library = dict(library)
    library[schema.name] = schema
    return library


def check_library(library: ActLibrary) -> None:
    """Resolve every act once, so that unknown parents and cycles surface early."""
    for name in sorted(library):
        resolve_preconditions(library, name)


def _library_path() -> str:
    return os.path.join(os.path.dirname(os.path.realpath(__file__)), "acts.scn")


@functools.lru_cache(maxsize=None)
def _default_library() -> Tuple[ActSchema, ...]:
    from .scenario import parse_library

    with open(_library_path(), "r") as f:
        schemas, _ = parse_library(f.read())
    return tuple(schemas)


def default_library() -> Dict[str, ActSchema]:
    r"""The shipped library: twenty acts, five in each class.

    Examples:
        >>> library = default_library()
        >>> len(library)
        20
        >>> library["correction"].parent
        'inform'
    """
    return {schema.name: schema for schema in _default_library()}
