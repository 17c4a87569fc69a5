import json
from typing import List, NamedTuple, Optional, Tuple

from attr import evolve
from lark import Token, Tree
from lark.exceptions import VisitError

from .attitudes import BELIEF, AttitudeType, Formula, formula_from_term
from .environments import (
    BeliefStore,
    Status,
    _env_sort_key,
    add_stereotype,
    add_trust,
    assert_attitude,
    entries,
    set_topic,
)
from .grammar import ScenarioParseError, parse_tree
from .planner import Operator
from .speech_acts import ActInstance, ActSchema, default_library, define_act
from .terms import Compound, Term, TermTransformer, ground

Path = Tuple[str, ...]


class DeclareAgent(NamedTuple):
    name: str


class Assert(NamedTuple):
    path: Path
    attitude: AttitudeType
    formula: Formula


class Retract(NamedTuple):
    path: Path
    attitude: AttitudeType
    formula: Formula


class SetTopic(NamedTuple):
    path: Path
    attitude: AttitudeType
    label: str


class Trust(NamedTuple):
    path: Path
    agent: str


class DefineStereotype(NamedTuple):
    owner: Optional[str]
    name: str
    members: Tuple[Tuple[AttitudeType, Formula], ...]


class Ascribe(NamedTuple):
    kind: str
    path: Path
    agent: Optional[str]
    formula: Optional[Formula]


class Perform(NamedTuple):
    side: str
    act: ActInstance


class Check(NamedTuple):
    act: ActInstance


class Simulate(NamedTuple):
    path: Path
    goals: Tuple[Formula, ...]


class Recognize(NamedTuple):
    path: Path
    observed: Term


class Show(NamedTuple):
    path: Optional[Path]
    format: Optional[str]


class Expect(NamedTuple):
    path: Path
    attitude: AttitudeType
    formula: Formula
    expected: Status


class LoadLibrary(NamedTuple):
    path: Optional[str]


class DefineAct(NamedTuple):
    schema: ActSchema


class DefineOperator(NamedTuple):
    operator: Operator


def _formula(t: Term) -> Formula:
    return formula_from_term(ground(t))


class ScenarioTransformer(TermTransformer):
    """Scenario parse tree to command tuples.

    Terms in stored positions are read in ground context, terms of ``act`` and
    ``operator`` definitions keep their variables.
    """

    def path(self, items):
        return tuple(str(x) for x in items)

    def block(self, items):
        return list(items)

    def member(self, items):
        if len(items) == 2:
            return AttitudeType(str(items[0])), _formula(items[1])
        return BELIEF, _formula(items[0])

    def agent(self, items):
        return DeclareAgent(str(items[0]))

    def attitude_cmd(self, items):
        at, path, t = items
        return Assert(path, AttitudeType(str(at)), _formula(t))

    def retract(self, items):
        at, path, t = items
        return Retract(path, AttitudeType(str(at)), _formula(t))

    def topic(self, items):
        at, path, label = items
        return SetTopic(path, AttitudeType(str(at)), str(label))

    def trust(self, items):
        path, agent = items
        return Trust(path, str(agent))

    def stereotype(self, items):
        symbols = [x for x in items if isinstance(x, Token)]
        members = tuple(x for x in items if not isinstance(x, Token))
        owner = str(symbols[0]) if len(symbols) == 2 else None
        return DefineStereotype(owner, str(symbols[-1]), members)

    def ascribe_default(self, items):
        path, agent, t = items
        return Ascribe("default", path, str(agent), _formula(t))

    def ascribe_stereotype(self, items):
        path, agent = items
        return Ascribe("stereotype", path, str(agent), None)

    def ascribe_accept(self, items):
        path, agent, t = items
        return Ascribe("accept", path, str(agent), _formula(t))

    def ascribe_demand(self, items):
        path, t = items
        return Ascribe("demand", path, None, _formula(t))

    def perform(self, items):
        side = str(items[0]) if len(items) == 2 else "both"
        return Perform(side, ActInstance.from_term(ground(items[-1])))

    def check(self, items):
        return Check(ActInstance.from_term(ground(items[0])))

    def simulate(self, items):
        path, goals = items
        return Simulate(path, tuple(_formula(g) for g in goals))

    def recognize(self, items):
        path, t = items
        return Recognize(path, ground(t))

    def show(self, items):
        path = next((x for x in items if isinstance(x, tuple)), None)
        fmt = next((str(x) for x in items if isinstance(x, Token)), None)
        return Show(path, fmt)

    def expect(self, items):
        path, at, t, status = items
        return Expect(path, AttitudeType(str(at)), _formula(t), Status(str(status)))

    def load_file(self, items):
        return LoadLibrary(json.loads(str(items[0])))

    def load_default(self, items):
        return LoadLibrary(None)

    def act_def(self, items):
        name, act_class = str(items[0]), str(items[1])
        parent = str(items[2]) if len(items) == 4 else None
        conditions = [formula_from_term(t) for t in items[-1]]
        return DefineAct(ActSchema(name, act_class, parent, conditions))

    def operator_def(self, items):
        head, pre, add = items[:3]
        delete = items[3] if len(items) == 4 else []
        if isinstance(head, Compound):
            name, params = head.functor, head.args
        else:
            name, params = head.name, ()
        return DefineOperator(Operator(name, params, pre, add, delete))


def _commands(tree: Tree) -> List[Tuple[int, Tree]]:
    return [(child.meta.line, child) for child in tree.children if isinstance(child, Tree)]


def parse_scenario_lines(text: str) -> List[Tuple[int, object]]:
    """Like :func:`parse_scenario`, each command paired with the line it starts on."""
    transformer = ScenarioTransformer()
    out = []
    for line, subtree in _commands(parse_tree(text)):
        try:
            out.append((line, transformer.transform(subtree)))
        except VisitError as e:
            meta = subtree.meta
            message = str(e.orig_exc)
            raise ScenarioParseError(meta.line, meta.column, [], message) from None
    return out


def parse_scenario(text: str) -> List[object]:
    r"""Read scenario text into a list of commands.

    Raises:
        ScenarioParseError: for any malformed input, located at the first error

    Examples:
        >>> parse_scenario("believe System: round(world)")
        [Assert(path=('System',), attitude=BELIEF, formula=round(world))]

        >>> parse_scenario("")
        []
    """
    return [command for _, command in parse_scenario_lines(text)]


def parse_library(text: str) -> Tuple[List[ActSchema], List[Operator]]:
    """Read a library file: ``act`` and ``operator`` definitions only."""
    schemas, operators = [], []
    for line, command in parse_scenario_lines(text):
        if isinstance(command, DefineAct):
            schemas.append(command.schema)
        elif isinstance(command, DefineOperator):
            operators.append(command.operator)
        else:
            raise ScenarioParseError(line, 1, ["act", "operator"], "a library may only define acts and operators")
    return schemas, operators


def _path(store: BeliefStore, v) -> str:
    return " > ".join((store.owner,) + v.agents)


def _block(xs) -> str:
    return "{" + "; ".join(str(x) for x in xs) + "}"


def format_act(schema: ActSchema) -> str:
    isa = f" isa {schema.parent}" if schema.parent else ""
    return f"act {schema.name} class {schema.act_class.value}{isa} pre {_block(schema.preconditions)}"


def format_operator(op: Operator) -> str:
    line = f"operator {op.head!r} pre {_block(op.preconditions)} add {_block(op.add)}"
    if op.delete:
        line += f" del {_block(op.delete)}"
    return line


def save_store(store: BeliefStore) -> str:
    r"""Scenario text that rebuilds ``store`` with :func:`load_store`.

    Examples:
        >>> save_store(BeliefStore())
        'agent System\n'
    """
    lines = [f"agent {store.owner}"]

    library = dict(store.act_library)
    defaults = default_library()
    if all(library.get(name) == schema for name, schema in defaults.items()):
        lines.append("load default")
        library = {name: s for name, s in library.items() if name not in defaults}
    lines += [format_act(library[name]) for name in sorted(library)]
    lines += [format_operator(store.operators[name]) for name in sorted(store.operators)]

    for name in sorted(store.stereotypes):
        members = "; ".join(f"{at.value} {f}" for at, f in store.stereotypes[name])
        lines.append(f"stereotype {name} {{{members}}}")

    for v, at in sorted(store.environments, key=_env_sort_key):
        for e in entries(store, v, at):
            lines.append(f"{at.value} {_path(store, v)}: {e}")
    for v, at in sorted(store.topics, key=_env_sort_key):
        lines.append(f"topic {at.value} {_path(store, v)}: {store.topics[(v, at)]}")
    for v, agent in sorted(store.trust, key=lambda x: (x[0].depth, x[0].sort_key(), x[1])):
        lines.append(f"trust {_path(store, v)}: {agent}")
    return "\n".join(lines) + "\n"


def _viewpoint(store: BeliefStore, path: Path):
    if path[0] != store.owner:
        raise ValueError(f"path {' > '.join(path)} does not start at the store owner {store.owner}")
    return path[1:]


def load_store(text: str) -> BeliefStore:
    r"""Inverse of :func:`save_store`.

    Raises:
        ScenarioParseError: malformed text
        ValueError: a command that does not describe store contents
    """
    store = None
    for line, command in parse_scenario_lines(text):
        if store is None:
            if not isinstance(command, DeclareAgent):
                raise ValueError(f"line {line}: a saved store starts with 'agent <owner>'")
            store = BeliefStore(owner=command.name)
        elif isinstance(command, Assert):
            store = assert_attitude(store, _viewpoint(store, command.path), command.attitude, command.formula)
        elif isinstance(command, SetTopic):
            store = set_topic(store, _viewpoint(store, command.path), command.attitude, command.label)
        elif isinstance(command, Trust):
            store = add_trust(store, _viewpoint(store, command.path), command.agent)
        elif isinstance(command, DefineStereotype):
            store = add_stereotype(store, command.name, command.members)
        elif isinstance(command, LoadLibrary) and command.path is None:
            library = dict(store.act_library)
            library.update(default_library())
            store = evolve(store, act_library=library)
        elif isinstance(command, DefineAct):
            store = evolve(store, act_library=define_act(store.act_library, command.schema))
        elif isinstance(command, DefineOperator):
            operators = dict(store.operators)
            operators[command.operator.name] = command.operator
            store = evolve(store, operators=operators)
        else:
            raise ValueError(f"line {line}: {type(command).__name__} does not describe store contents")
    if store is None:
        raise ValueError("empty text, a saved store starts with 'agent <owner>'")
    return store
