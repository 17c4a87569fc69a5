import enum
import logging
from typing import List, Optional, Tuple

from attr import attrib, attrs

from .attitudes import BELIEF, AttitudeType, Formula
from .config import _resolve
from .environments import (
    BeliefStore,
    DepthError,
    IntoViewpoint,
    Status,
    Viewpoint,
    _address,
    _entry,
    assert_attitude,
    holds,
    is_trusted,
    lookup,
)
from .terms import Compound, Constant, Proposition

logger = logging.getLogger(__name__)


class Result(enum.Enum):
    ASCRIBED = "ascribed"
    BLOCKED = "blocked"
    ALREADY_HELD = "already-held"

    def __repr__(self):
        return self.name


@attrs(frozen=True)
class AscriptionOutcome:
    """What an ascription did, with the contrary entry when it was blocked."""

    result: Result = attrib(converter=Result)
    blocking_evidence: Optional[Formula] = attrib(default=None)

    def __attrs_post_init__(self):
        if self.result is Result.BLOCKED and self.blocking_evidence is None:
            raise ValueError("a blocked ascription must carry its blocking evidence")


class PreconditionError(ValueError):
    """A rule was applied while one of its preconditions is false."""

    def __init__(self, condition: str, message: str):
        super().__init__(message)
        self.condition = condition


def ascribe(
    store: BeliefStore, v: IntoViewpoint, at: AttitudeType, f, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, AscriptionOutcome]:
    r"""Push an entry into an environment unless contrary evidence is there.

    This is the unconditional half of every ascription rule: the caller is
    responsible for the source side.

    Returns:
        ``(store, outcome)``, the store is unchanged unless the outcome is ``ASCRIBED``
    """
    f = _entry(f)
    status, evidence = lookup(store, v, at, f)
    if status is Status.CONTRARY:
        logger.debug("ascription of %s to <%s> blocked by %s", f, Viewpoint(v), evidence)
        return store, AscriptionOutcome(Result.BLOCKED, evidence)
    if status is Status.HOLDS:
        return store, AscriptionOutcome(Result.ALREADY_HELD)
    store = assert_attitude(store, v, at, f, max_depth=max_depth)
    logger.debug("ascribed %s to <%s>", f, Viewpoint(v))
    return store, AscriptionOutcome(Result.ASCRIBED)


def default_ascribe(
    store: BeliefStore, source: IntoViewpoint, target_agent: str, p, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, AscriptionOutcome]:
    r"""Default ascription: what the source holder believes, the target believes too.

    Args:
        store: `BeliefStore`
        source: viewpoint whose holder believes ``p``
        target_agent: agent ``p`` is ascribed to, one level deeper than ``source``
        p: ground formula
        max_depth: overrides ``config("max_depth")``

    Returns:
        ``(store, outcome)``

    Raises:
        PreconditionError: ``p`` is not believed at ``source`` (``condition="held"``)

    Examples:
        >>> store = assert_attitude(BeliefStore(), "", BELIEF, "round(world)")
        >>> store, outcome = default_ascribe(store, "", "John", "round(world)")
        >>> outcome.result
        ASCRIBED
        >>> holds(store, "John", BELIEF, "round(world)")
        HOLDS
    """
    source, _ = _address(store, source, BELIEF)
    if target_agent == source.holder(store.owner):
        raise ValueError(f"cannot ascribe from {target_agent} to itself")
    f = _entry(p)
    if holds(store, source, BELIEF, f) is not Status.HOLDS:
        raise PreconditionError("held", f"{f} is not believed at <{source}>, nothing to ascribe")
    return ascribe(store, source.extend(target_agent), BELIEF, f, max_depth=max_depth)


def stereotype_ascribe(
    store: BeliefStore, source: IntoViewpoint, target_agent: str, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, List[Tuple[Formula, AscriptionOutcome]]]:
    r"""Ascribe every member of every stereotype the target is believed to fit.

    The target fits stereotype ``St`` when ``isa(target, St)`` is believed at
    ``source``. Each member goes through its own contrary-evidence test.

    Returns:
        ``(store, [(member, outcome), ...])`` in stereotype then member order
    """
    source, _ = _address(store, source, BELIEF)
    target = source.extend(target_agent)
    outcomes = []
    for name in sorted(store.stereotypes):
        isa = Proposition(Compound("isa", (Constant(target_agent), Constant(name))))
        if holds(store, source, BELIEF, isa) is not Status.HOLDS:
            continue
        for at, f in store.stereotypes[name]:
            store, outcome = ascribe(store, target, at, f, max_depth=max_depth)
            outcomes.append((f, outcome))
    return store, outcomes


def accept_belief(
    store: BeliefStore, acceptor: IntoViewpoint, source_agent: str, p, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, AscriptionOutcome]:
    r"""Adopt a belief communicated by a trusted agent.

    Preconditions, checked in this order:

    - ``belief``: the acceptor believes ``source_agent`` believes ``p``
    - ``no_contrary``: the acceptor does not believe the negation of ``p``
    - ``trust``: the acceptor believes ``source_agent`` is trustworthy

    Raises:
        PreconditionError: naming the first precondition that fails
    """
    acceptor, _ = _address(store, acceptor, BELIEF)
    f = _entry(p)
    if holds(store, acceptor.extend(source_agent), BELIEF, f) is not Status.HOLDS:
        raise PreconditionError("belief", f"<{acceptor}> does not believe {source_agent} believes {f}")
    if holds(store, acceptor, BELIEF, f) is Status.CONTRARY:
        raise PreconditionError("no_contrary", f"<{acceptor}> believes the contrary of {f}")
    if not is_trusted(store, acceptor, source_agent):
        raise PreconditionError("trust", f"<{acceptor}> does not trust {source_agent}")
    return ascribe(store, acceptor, BELIEF, f, max_depth=max_depth)


def ascribe_on_demand(
    store: BeliefStore, v: IntoViewpoint, at: AttitudeType, p, *, max_depth: Optional[int] = None
) -> Tuple[BeliefStore, Status]:
    r"""Look an entry up, ascending to enclosing environments when it is unknown.

    When ``p`` is unknown at ``v``, the nearest enclosing environment where it
    holds is searched for and ``p`` is default-ascribed back down one level at
    a time. Contrary evidence on the way stops the descent. Goals and
    intentions are only looked up, never ascribed.

    Returns:
        ``(store, status)`` where ``status`` is the answer at ``v`` afterwards

    Raises:
        DepthError: ``v`` is deeper than ``max_depth``
    """
    max_depth = _resolve("max_depth", max_depth)
    v, at = _address(store, v, at)
    if v.depth > max_depth:
        raise DepthError(f"viewpoint <{v}> is deeper than max_depth={max_depth}")
    status = holds(store, v, at, p)
    if at is not BELIEF or status is not Status.UNKNOWN or v.depth == 0:
        return store, status

    store, parent_status = ascribe_on_demand(store, v.parent, BELIEF, p, max_depth=max_depth)
    if parent_status is not Status.HOLDS:
        return store, Status.UNKNOWN
    store, outcome = ascribe(store, v, BELIEF, p, max_depth=max_depth)
    if outcome.result is Result.BLOCKED:
        return store, Status.UNKNOWN
    return store, Status.HOLDS
