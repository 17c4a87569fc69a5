import dataclasses
import enum
import json
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from attr import attrib, attrs, evolve

from .attitudes import BELIEF, GOAL, INTENTION, Attitude, AttitudeType, Formula, as_formula, parse_formula
from .config import _resolve
from .terms import Compound, Constant, Proposition, Variable

IntoViewpoint = Union[None, str, "Viewpoint", Iterable]


class Status(enum.Enum):
    """Tri-state answer of a lookup."""

    HOLDS = "holds"
    CONTRARY = "contrary"
    UNKNOWN = "unknown"

    def __repr__(self):
        return self.name


class ConsistencyError(ValueError):
    """An entry was asserted while its negation is present."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class DepthError(ValueError):
    """Nesting deeper than the configured ``max_depth``."""


@dataclasses.dataclass(init=False, frozen=True)
class Viewpoint:
    r"""Path of nested attitude spaces, starting from the store owner.

    Every hop but the last is a belief space. The empty viewpoint is the
    owner's own top-level environment.

    Args:
        hops: ``"John > Mary"``, a list of agent names (belief hops) or of
            ``(agent, AttitudeType)`` pairs

    Examples:
        >>> Viewpoint("John > Mary")
        Viewpoint(John > Mary)

        >>> Viewpoint("John > Mary").holder()
        'Mary'

        >>> Viewpoint().holder("System")
        'System'

        >>> Viewpoint([("John", GOAL), "Mary"])
        Traceback (most recent call last):
        ...
        ValueError: only belief spaces nest, found goal hop of John before the end of the viewpoint
    """
    hops: Tuple[Tuple[str, AttitudeType], ...]

    def __init__(self, hops: IntoViewpoint = ()):
        if hops is None:
            hops = ()
        if isinstance(hops, Viewpoint):
            hops = hops.hops
        elif isinstance(hops, str):
            names = [n.strip() for n in hops.split(">")] if hops.strip() else []
            if any(not n for n in names):
                raise ValueError(f'unable to convert string "{hops}" into a Viewpoint')
            hops = names

        normalized = []
        for hop in hops:
            if isinstance(hop, (str, Constant)):
                hop = (hop, BELIEF)
            agent, kind = hop
            if isinstance(agent, Constant):
                agent = agent.name
            if not isinstance(agent, str) or not agent:
                raise ValueError(f"agent must be a nonempty symbol, got {agent!r}")
            normalized.append((agent, AttitudeType(kind)))

        for agent, kind in normalized[:-1]:
            if kind is not BELIEF:
                raise ValueError(
                    f"only belief spaces nest, found {kind.value} hop of {agent} before the end of the viewpoint"
                )
        object.__setattr__(self, "hops", tuple(normalized))

    def __repr__(self):
        return f"Viewpoint({self})"

    def __str__(self):
        parts = []
        for agent, kind in self.hops:
            parts.append(agent if kind is BELIEF else f"{agent}:{kind.value}")
        return " > ".join(parts)

    @property
    def depth(self) -> int:
        return len(self.hops)

    @property
    def agents(self) -> Tuple[str, ...]:
        return tuple(agent for agent, _ in self.hops)

    def holder(self, owner: str = "System") -> str:
        """Agent holding the innermost environment."""
        if self.hops:
            return self.hops[-1][0]
        return owner

    def extend(self, agent: str, kind: AttitudeType = BELIEF) -> "Viewpoint":
        if self.hops and self.hops[-1][1] is not BELIEF:
            raise ValueError(f"cannot nest below the {self.hops[-1][1].value} space of {self.hops[-1][0]}")
        return Viewpoint(self.hops + ((agent, kind),))

    @property
    def parent(self) -> "Viewpoint":
        if not self.hops:
            raise ValueError("the top-level viewpoint has no parent")
        return Viewpoint(self.hops[:-1])

    def is_prefix_of(self, other: "Viewpoint") -> bool:
        return other.hops[: len(self.hops)] == self.hops

    def sort_key(self):
        return tuple((agent, kind.order) for agent, kind in self.hops)


EnvKey = Tuple[Viewpoint, AttitudeType]


def _env_sort_key(key: EnvKey):
    return (key[0].depth, key[0].sort_key(), key[1].order)


@attrs(frozen=True)
class BeliefStore:
    r"""The whole attitude state of one agent, by default the System.

    The store is an immutable value: every operation returns a new store and
    shares the untouched parts with the old one.

    Args:
        owner: the agent addressed by the empty viewpoint
        environments: ``(Viewpoint, AttitudeType) -> frozenset`` of entries, never empty
        topics: ``(Viewpoint, AttitudeType) -> label``
        stereotypes: ``name -> ((AttitudeType, Formula), ...)``
        act_library: ``name -> ActSchema``
        operators: ``name -> Operator``
        trust: set of ``(Viewpoint, agent)``, the holder of the viewpoint trusts the agent
    """

    owner: str = attrib(default="System")
    environments: Dict[EnvKey, FrozenSet[Formula]] = attrib(factory=dict)
    topics: Dict[EnvKey, str] = attrib(factory=dict)
    stereotypes: Dict[str, Tuple[Tuple[AttitudeType, Formula], ...]] = attrib(factory=dict)
    act_library: Dict[str, object] = attrib(factory=dict)
    operators: Dict[str, object] = attrib(factory=dict)
    trust: FrozenSet[Tuple[Viewpoint, str]] = attrib(factory=frozenset, converter=frozenset)

    def env(self, v: IntoViewpoint, at: AttitudeType) -> FrozenSet[Formula]:
        v, at = _address(self, v, at)
        return self.environments.get((v, at), frozenset())


def _entry(p) -> Formula:
    if isinstance(p, str):
        return parse_formula(p, ground_context=True)
    return as_formula(p)


def _address(store: BeliefStore, v: IntoViewpoint, at: AttitudeType) -> EnvKey:
    """Canonical environment key: belief hops only, no hop to the current holder."""
    v = Viewpoint(v)
    at = AttitudeType(at)
    agents = []
    holder = store.owner
    for agent, kind in v.hops:
        if agent != holder:
            agents.append(agent)
            holder = agent
        if kind is not BELIEF:
            if at not in (BELIEF, kind):
                raise ValueError(f"viewpoint {v} ends in a {kind.value} space, cannot address {at.value}")
            at = kind
    return Viewpoint(agents), at


def _agent_name(agent) -> str:
    if isinstance(agent, Variable):
        raise ValueError(f"attitude agent {agent} is not ground")
    return agent.name if isinstance(agent, Constant) else str(agent)


def _normalize(store: BeliefStore, v: Viewpoint, at: AttitudeType, f: Formula):
    """Flatten positive attitudes into the environment they talk about."""
    while at is BELIEF and isinstance(f, Attitude) and not f.negated:
        agent = _agent_name(f.agent)
        if agent != v.holder(store.owner):
            v = v.extend(agent)
        if f.kind is not BELIEF:
            at = f.kind
        f = f.body
    return v, at, f


def _lifts(v: Viewpoint, at: AttitudeType, f: Formula):
    """The same entry as written from each enclosing environment."""
    yield v, at, f
    while v.hops:
        f = Attitude(at, v.agents[-1], f)
        v = v.parent
        at = BELIEF
        yield v, at, f


def lookup(store: BeliefStore, v: IntoViewpoint, at: AttitudeType, p) -> Tuple[Status, Optional[Formula]]:
    r"""Tri-state lookup together with the contrary entry found, if any.

    Contrary evidence is an explicit negation: of the entry itself in its own
    environment, or of the entry as written from any enclosing environment.
    """
    v, at = _address(store, v, at)
    f = _entry(p)
    v, at, g = _normalize(store, v, at, f)
    if g in store.environments.get((v, at), ()):
        return Status.HOLDS, None
    for vk, atk, gk in _lifts(v, at, g):
        neg = gk.negate()
        if neg in store.environments.get((vk, atk), ()):
            return Status.CONTRARY, neg
    if isinstance(g, Attitude) and g.negated:
        status, _ = lookup(store, v, at, g.negate())
        if status is Status.HOLDS:
            return Status.CONTRARY, g.negate()
    return Status.UNKNOWN, None


def holds(store: BeliefStore, v: IntoViewpoint, at: AttitudeType, p) -> Status:
    r"""Whether an entry holds, is contradicted, or is unknown at an environment.

    This is a pure lookup, nothing is ascribed. Positive attitude formulas are
    read through the nesting: ``believe(John, p)`` at the top level holds when
    ``p`` is in John's environment.

    Args:
        store: `BeliefStore`
        v: viewpoint
        at: attitude space at that viewpoint
        p: formula, proposition, act instance or ground text

    Returns:
        `Status`

    Examples:
        >>> store = assert_attitude(BeliefStore(), "", BELIEF, "not(flat(world))")
        >>> holds(store, "", BELIEF, "flat(world)")
        CONTRARY

        >>> holds(BeliefStore(), "John", BELIEF, "round(world)")
        UNKNOWN
    """
    return lookup(store, v, at, p)[0]


def _check_depth(v: Viewpoint, f: Formula, max_depth: int):
    if v.depth + f.depth() > max_depth:
        raise DepthError(f"{f} at viewpoint <{v}> nests {v.depth + f.depth()} levels, more than max_depth={max_depth}")


def assert_attitude(
    store: BeliefStore, v: IntoViewpoint, at: AttitudeType, p, *, max_depth: Optional[int] = None
) -> BeliefStore:
    r"""Add an entry to an environment.

    Args:
        store: `BeliefStore`
        v: viewpoint
        at: attitude space
        p: ground formula (an act instance for intentions)
        max_depth: overrides ``config("max_depth")``

    Returns:
        the new store, the same store if the entry was already present

    Raises:
        ConsistencyError: the negation of the entry is present
        DepthError: the entry would be nested too deep
    """
    max_depth = _resolve("max_depth", max_depth)
    v, at = _address(store, v, at)
    f = _entry(p)
    if not f.is_ground():
        raise ValueError(f"stored entries must be ground, got {f}")
    _check_depth(v, f, max_depth)

    status, evidence = lookup(store, v, at, f)
    if status is Status.CONTRARY:
        raise ConsistencyError(
            f"cannot assert {f} in the {at.value} space at <{v}>: {evidence} is present", evidence=evidence
        )
    if status is Status.HOLDS:
        return store

    v, at, g = _normalize(store, v, at, f)
    _check_depth(v, g, max_depth)
    environments = dict(store.environments)
    environments[(v, at)] = environments.get((v, at), frozenset()) | {g}
    return evolve(store, environments=environments)


def retract_attitude(store: BeliefStore, v: IntoViewpoint, at: AttitudeType, p) -> BeliefStore:
    """Remove an entry. Retracting an absent entry returns the store unchanged."""
    v, at = _address(store, v, at)
    v, at, g = _normalize(store, v, at, _entry(p))
    entries = store.environments.get((v, at), frozenset())
    if g not in entries:
        return store
    environments = dict(store.environments)
    entries = entries - {g}
    if entries:
        environments[(v, at)] = entries
    else:
        del environments[(v, at)]
    return evolve(store, environments=environments)


def entries(store: BeliefStore, v: IntoViewpoint, at: AttitudeType) -> Tuple[Formula, ...]:
    return tuple(sorted(store.env(v, at), key=str))


def viewpoints(store: BeliefStore) -> List[Viewpoint]:
    keys = {v for v, _ in store.environments}
    return sorted(keys, key=lambda v: (v.depth, v.sort_key()))


def set_topic(store: BeliefStore, v: IntoViewpoint, at: AttitudeType, label: Optional[str]) -> BeliefStore:
    """Attach an inert topic label to an environment (``None`` removes it)."""
    key = _address(store, v, at)
    topics = dict(store.topics)
    if label is None:
        topics.pop(key, None)
    else:
        topics[key] = label
    return evolve(store, topics=topics)


def add_stereotype(store: BeliefStore, name: str, members: Iterable) -> BeliefStore:
    r"""Define (or replace) a stereotype.

    Args:
        store: `BeliefStore`
        name: stereotype symbol, as used in ``isa(Agent, Name)``
        members: formulas (beliefs) or ``(AttitudeType, formula)`` pairs
    """
    normalized = []
    for m in members:
        if isinstance(m, tuple):
            at, f = m
        else:
            at, f = BELIEF, m
        at, f = AttitudeType(at), _entry(f)
        if at is INTENTION:
            raise ValueError(f"stereotype {name} may only hold beliefs and goals, got intention {f}")
        if (at, f) not in normalized:
            normalized.append((at, f))
    stereotypes = dict(store.stereotypes)
    stereotypes[name] = tuple(normalized)
    return evolve(store, stereotypes=stereotypes)


def add_trust(store: BeliefStore, v: IntoViewpoint, agent: str) -> BeliefStore:
    """Record that the holder of ``v`` trusts ``agent``."""
    v, _ = _address(store, v, BELIEF)
    return evolve(store, trust=store.trust | {(v, str(agent))})


def is_trusted(store: BeliefStore, v: IntoViewpoint, agent: str) -> bool:
    v, _ = _address(store, v, BELIEF)
    if (v, str(agent)) in store.trust:
        return True
    trustworthy = Proposition(Compound("trustworthy", (Constant(str(agent)),)))
    return holds(store, v, BELIEF, trustworthy) is Status.HOLDS


def inconsistencies(store: BeliefStore) -> List[Tuple[Viewpoint, AttitudeType, Formula, Formula]]:
    """Every stored entry together with a contradicting entry, empty for a consistent store."""
    found = []
    for (v, at) in sorted(store.environments, key=_env_sort_key):
        for e in entries(store, v, at):
            for vk, atk, ek in _lifts(v, at, e):
                if ek.negate() in store.environments.get((vk, atk), ()):
                    found.append((v, at, e, ek.negate()))
    return found


def _children(store: BeliefStore, v: Viewpoint) -> List[str]:
    agents = {k.agents[v.depth] for k, _ in store.environments if k.depth > v.depth and v.is_prefix_of(k)}
    agents |= {k.agents[v.depth] for k, _ in store.topics if k.depth > v.depth and v.is_prefix_of(k)}
    return sorted(agents)


def _has_belief_content(store: BeliefStore, v: Viewpoint) -> bool:
    for key in list(store.environments) + list(store.topics):
        kv, kat = key
        if v.is_prefix_of(kv) and (kv.depth > v.depth or kat is BELIEF):
            return True
    return False


def _box(lines: List[str], holder: str, label: str, topic: Optional[str]) -> List[str]:
    inner = max([len(line) for line in lines] + [len(holder) + len(label) + 1, len(topic or "") + 1])
    top = "+" + (f"-{topic}" if topic else "").ljust(inner + 2, "-") + "+"
    body = [f"| {line.ljust(inner)} |" for line in lines]
    bottom = "+-" + holder + "-" * (inner - len(holder) - len(label)) + label + "-+"
    return [top] + body + [bottom]


def _render_box(store: BeliefStore, v: Viewpoint, at: AttitudeType) -> List[str]:
    lines = [str(e) for e in entries(store, v, at)]
    if at is BELIEF:
        for agent in _children(store, v):
            child = v.extend(agent)
            if _has_belief_content(store, child):
                lines += _render_box(store, child, BELIEF)
            for kind in (GOAL, INTENTION):
                if (child, kind) in store.environments or (child, kind) in store.topics:
                    lines += _render_box(store, child, kind)
    return _box(lines, v.holder(store.owner), at.value, store.topics.get((v, at)))


def render_ascii(store: BeliefStore, viewpoint: IntoViewpoint = None) -> str:
    r"""Nested boxes: holder bottom left, attitude bottom right, topic top left.

    Examples:
        >>> print(render_ascii(BeliefStore()))
        +----------------+
        +-System-believe-+
    """
    v, _ = _address(store, viewpoint, BELIEF)
    lines = _render_box(store, v, BELIEF)
    for kind in (GOAL, INTENTION):
        if (v, kind) in store.environments or (v, kind) in store.topics:
            lines += _render_box(store, v, kind)
    return "\n".join(lines)


def to_dict(store: BeliefStore) -> dict:
    keys = sorted(set(store.environments) | set(store.topics), key=_env_sort_key)
    return {
        "owner": store.owner,
        "environments": [
            {
                "viewpoint": list(v.agents),
                "attitude": at.value,
                "topic": store.topics.get((v, at)),
                "entries": [str(e) for e in entries(store, v, at)],
            }
            for v, at in keys
        ],
        "stereotypes": {
            name: [[at.value, str(f)] for at, f in members] for name, members in sorted(store.stereotypes.items())
        },
        "trust": sorted([list(v.agents), agent] for v, agent in store.trust),
        "acts": sorted(store.act_library),
        "operators": sorted(store.operators),
    }


def render(store: BeliefStore, format: str = "ascii", viewpoint: IntoViewpoint = None) -> str:
    r"""Deterministic text rendering of a store.

    Args:
        store: `BeliefStore`
        format: ``"ascii"`` boxes, ``"structured"`` (alias ``"dsl"``) scenario text, or ``"json"``
        viewpoint: for ``"ascii"`` only, draw the box of this viewpoint

    Returns:
        str
    """
    if format == "ascii":
        return render_ascii(store, viewpoint)
    if format in ("structured", "dsl"):
        from .scenario import save_store

        return save_store(store)
    if format == "json":
        return json.dumps(to_dict(store), indent=2, sort_keys=True)
    raise ValueError(f"unknown render format {format!r}, expected ascii, structured or json")
