import hashlib
import json
import logging
import os
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

from attr import evolve

from .ascription import accept_belief, ascribe_on_demand, default_ascribe, stereotype_ascribe
from .attitudes import BELIEF
from .config import config as get_config
from .environments import (
    BeliefStore,
    Viewpoint,
    add_stereotype,
    add_trust,
    assert_attitude,
    holds,
    render,
    retract_attitude,
    set_topic,
)
from .grammar import ScenarioParseError
from .planner import LimitExceeded
from .scenario import (
    Ascribe,
    Assert,
    Check,
    DeclareAgent,
    DefineAct,
    DefineOperator,
    DefineStereotype,
    Expect,
    LoadLibrary,
    Perform,
    Recognize,
    Retract,
    SetTopic,
    Show,
    Simulate,
    Trust,
    parse_library,
    parse_scenario_lines,
    save_store,
)
from .simulation import recognize, simulate_search
from .speech_acts import check_felicity, default_library, define_act, hearer_update, speaker_update

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SYSTEM = "System"

EXIT_OK = 0
EXIT_EXPECTATION = 1
EXIT_PARSE = 2
EXIT_LIMIT = 3

_OPTIONS = ("max_depth", "max_steps", "max_nodes", "default_library")


class Trace:
    """Ordered list of JSON-ready event dicts."""

    def __init__(self):
        self.events: List[dict] = []

    def record(self, event: dict) -> dict:
        event = {"index": len(self.events), **event}
        self.events.append(event)
        return event

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "events": self.events}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class RunResult(NamedTuple):
    store: BeliefStore
    trace: Trace
    status: int
    stores: Dict[str, BeliefStore]
    output: List[str]


def digest(store: BeliefStore) -> str:
    """sha256 of the saved form of a store."""
    return hashlib.sha256(save_store(store).encode("utf-8")).hexdigest()


def _outcome(outcome) -> dict:
    d = {"result": outcome.result.value}
    if outcome.blocking_evidence is not None:
        d["evidence"] = str(outcome.blocking_evidence)
    return d


def _outcomes(pairs) -> List[dict]:
    return [{"formula": str(f), **_outcome(o)} for f, o in pairs]


def _plan(plan) -> Optional[List[str]]:
    if plan is None:
        return None
    return [repr(op) for op in plan.actions()]


class Runner:
    r"""Executes scenario commands against one store per agent.

    The ``System`` store always exists, ``agent`` declares further stores.
    The first element of a viewpoint path names the store. Acts and operators
    are shared by every store.

    Args:
        config: overrides of the configuration options for this run only
        base_dir: directory that ``load "<file>"`` paths are relative to
    """

    def __init__(self, config: Optional[dict] = None, base_dir: Optional[str] = None):
        config = dict(config or {})
        for name in config:
            if name not in _OPTIONS:
                raise ValueError(f"Unknown configuration option: {name}")
        self.options = {name: config.get(name, get_config(name)) for name in _OPTIONS}
        self.base_dir = base_dir
        self.library = default_library() if self.options["default_library"] else {}
        self.operators = {}
        self.stores: Dict[str, BeliefStore] = {}
        self.trace = Trace()
        self.output: List[str] = []
        self.failed = False
        self.limit_exceeded = False
        self.fatal = False
        self._declare(SYSTEM)

    @property
    def status(self) -> int:
        if self.fatal:
            return EXIT_PARSE
        if self.limit_exceeded:
            return EXIT_LIMIT
        if self.failed:
            return EXIT_EXPECTATION
        return EXIT_OK

    def result(self) -> RunResult:
        return RunResult(self.stores[SYSTEM], self.trace, self.status, dict(self.stores), list(self.output))

    def _declare(self, name: str):
        if name not in self.stores:
            self.stores[name] = BeliefStore(owner=name, act_library=dict(self.library), operators=dict(self.operators))

    def _share(self):
        for name, store in self.stores.items():
            self.stores[name] = evolve(store, act_library=dict(self.library), operators=dict(self.operators))

    def _locate(self, path) -> Tuple[str, Viewpoint]:
        if not path:
            return SYSTEM, Viewpoint()
        if path[0] not in self.stores:
            raise ValueError(f"unknown agent {path[0]}, declare it with 'agent {path[0]}'")
        return path[0], Viewpoint(path[1:])

    def _store_of(self, agent: str) -> str:
        return agent if agent in self.stores else SYSTEM

    def _digests(self) -> Dict[str, str]:
        return {name: digest(store) for name, store in sorted(self.stores.items())}

    def _emit(self, text: str):
        self.output.append(text)

    def execute(self, command, line: Optional[int] = None) -> dict:
        """Run one command and record its event."""
        before = self._digests()
        event = {"command": type(command).__name__}
        if line is not None:
            event["line"] = line
        try:
            event.update(self._dispatch(command))
            event.setdefault("status", "ok")
        except LimitExceeded as e:
            self.limit_exceeded = True
            event.update(status="limit-exceeded", error=str(e), frontier=e.frontier, nodes=e.nodes)
            logger.warning("%s: %s", event["command"], e)
        except (ScenarioParseError, OSError) as e:
            self.fatal = True
            event.update(status="fatal", error=str(e))
            logger.error("%s: %s", event["command"], e)
        except ValueError as e:
            self.failed = True
            event.update(status="error", error=f"{type(e).__name__}: {e}")
            logger.warning("%s: %s", event["command"], e)
        after = self._digests()
        changed = {name: d for name, d in after.items() if before.get(name) != d}
        if changed:
            event["state"] = changed
        return self.trace.record(event)

    def _dispatch(self, command) -> dict:
        opts = self.options
        depth = opts["max_depth"]

        if isinstance(command, DeclareAgent):
            self._declare(command.name)
            return {"agent": command.name}

        if isinstance(command, (Assert, Retract)):
            owner, v = self._locate(command.path)
            if isinstance(command, Assert):
                store = assert_attitude(self.stores[owner], v, command.attitude, command.formula, max_depth=depth)
            else:
                store = retract_attitude(self.stores[owner], v, command.attitude, command.formula)
            self.stores[owner] = store
            return {"store": owner, "viewpoint": str(v), "attitude": command.attitude.value, "formula": str(command.formula)}

        if isinstance(command, SetTopic):
            owner, v = self._locate(command.path)
            self.stores[owner] = set_topic(self.stores[owner], v, command.attitude, command.label)
            return {"store": owner, "viewpoint": str(v), "label": command.label}

        if isinstance(command, Trust):
            owner, v = self._locate(command.path)
            self.stores[owner] = add_trust(self.stores[owner], v, command.agent)
            return {"store": owner, "viewpoint": str(v), "agent": command.agent}

        if isinstance(command, DefineStereotype):
            owner = command.owner or SYSTEM
            if owner not in self.stores:
                raise ValueError(f"unknown agent {owner}")
            self.stores[owner] = add_stereotype(self.stores[owner], command.name, command.members)
            return {"store": owner, "stereotype": command.name, "members": len(command.members)}

        if isinstance(command, Ascribe):
            return self._ascribe(command)

        if isinstance(command, Perform):
            return self._perform(command)

        if isinstance(command, Check):
            felicity = check_felicity(self.stores[self._store_of(command.act.speaker)], command.act)
            missing = [str(c) for c in felicity.missing]
            self._emit(f"{command.act}: " + ("felicitous" if felicity.felicitous else "missing " + "; ".join(missing)))
            return {"act": repr(command.act), "felicitous": felicity.felicitous, "missing": missing}

        if isinstance(command, Simulate):
            owner, v = self._locate(command.path)
            store, result = simulate_search(
                self.stores[owner],
                v,
                command.goals,
                max_steps=opts["max_steps"],
                max_nodes=opts["max_nodes"],
                max_depth=depth,
            )
            self.stores[owner] = store
            actions = _plan(result.plan)
            self._emit(f"plan: {actions}" if actions is not None else f"no plan ({result.status.value})")
            return {
                "store": owner,
                "viewpoint": str(v),
                "goals": [str(g) for g in command.goals],
                "search": result.status.value,
                "nodes": result.nodes,
                "plan": actions,
            }

        if isinstance(command, Recognize):
            owner, v = self._locate(command.path)
            store, result = recognize(
                self.stores[owner],
                v,
                command.observed,
                max_steps=opts["max_steps"],
                max_nodes=opts["max_nodes"],
                max_depth=depth,
            )
            self.stores[owner] = store
            event = {"store": owner, "viewpoint": str(v), "observed": repr(command.observed)}
            if result is None:
                self._emit("not recognized")
                return {**event, "goals": None, "plan": None}
            goals = [str(g) for g in result.ascribed_goals]
            self._emit(f"recognized goals {goals} with plan {_plan(result.plan)}")
            return {**event, "goals": goals, "plan": _plan(result.plan)}

        if isinstance(command, Show):
            owner, v = self._locate(command.path)
            text = render(self.stores[owner], command.format or "ascii", viewpoint=v)
            self._emit(text)
            return {"store": owner, "output": text}

        if isinstance(command, Expect):
            owner, v = self._locate(command.path)
            actual = holds(self.stores[owner], v, command.attitude, command.formula)
            passed = actual is command.expected
            if not passed:
                self.failed = True
                logger.warning("expectation failed: %s is %s, expected %s", command.formula, actual.value, command.expected.value)
            return {
                "store": owner,
                "viewpoint": str(v),
                "attitude": command.attitude.value,
                "formula": str(command.formula),
                "expected": command.expected.value,
                "actual": actual.value,
                "status": "passed" if passed else "failed",
            }

        if isinstance(command, LoadLibrary):
            return self._load(command)

        if isinstance(command, DefineAct):
            self.library = define_act(self.library, command.schema)
            self._share()
            return {"act": command.schema.name}

        if isinstance(command, DefineOperator):
            self.operators[command.operator.name] = command.operator
            self._share()
            return {"operator": command.operator.name}

        raise ValueError(f"unsupported command {command!r}")

    def _ascribe(self, command: Ascribe) -> dict:
        owner, v = self._locate(command.path)
        store = self.stores[owner]
        depth = self.options["max_depth"]
        event = {"store": owner, "viewpoint": str(v), "rule": command.kind}
        if command.kind == "default":
            store, outcome = default_ascribe(store, v, command.agent, command.formula, max_depth=depth)
            event.update(agent=command.agent, formula=str(command.formula), **_outcome(outcome))
        elif command.kind == "stereotype":
            store, outcomes = stereotype_ascribe(store, v, command.agent, max_depth=depth)
            event.update(agent=command.agent, outcomes=_outcomes(outcomes))
        elif command.kind == "accept":
            store, outcome = accept_belief(store, v, command.agent, command.formula, max_depth=depth)
            event.update(agent=command.agent, formula=str(command.formula), **_outcome(outcome))
        else:
            store, status = ascribe_on_demand(store, v, BELIEF, command.formula, max_depth=depth)
            event.update(formula=str(command.formula), answer=status.value)
        self.stores[owner] = store
        return event

    def _perform(self, command: Perform) -> dict:
        act = command.act
        depth = self.options["max_depth"]
        event = {"act": repr(act), "side": command.side}
        if command.side in ("speaker", "both"):
            owner = self._store_of(act.speaker)
            felicity = check_felicity(self.stores[owner], act)
            if not felicity.felicitous:
                logger.warning("%s is performed infelicitously, missing %s", act, list(felicity.missing))
            event["felicitous"] = felicity.felicitous
            self.stores[owner], outcomes = speaker_update(self.stores[owner], act, max_depth=depth)
            event["speaker"] = {"store": owner, "outcomes": _outcomes(outcomes)}
        if command.side in ("hearer", "both"):
            owner = self._store_of(act.hearer)
            self.stores[owner], outcomes = hearer_update(self.stores[owner], act, max_depth=depth)
            event["hearer"] = {"store": owner, "outcomes": _outcomes(outcomes)}
        return event

    def _load(self, command: LoadLibrary) -> dict:
        if command.path is None:
            self.library.update(default_library())
            self._share()
            return {"library": "default"}
        path = command.path
        if self.base_dir is not None and not os.path.isabs(path):
            path = os.path.join(self.base_dir, path)
        with open(path, "r") as f:
            schemas, operators = parse_library(f.read())
        for schema in schemas:
            self.library[schema.name] = schema
        for op in operators:
            self.operators[op.name] = op
        self._share()
        return {"library": command.path, "acts": len(schemas), "operators": len(operators)}

    def run(self, commands: Iterable) -> RunResult:
        for item in commands:
            line, command = item if isinstance(item, tuple) and not hasattr(item, "_fields") else (None, item)
            self.execute(command, line)
            if self.fatal:
                break
        return self.result()


def run(
    commands, config: Optional[dict] = None, base_dir: Optional[str] = None, libraries: Iterable[str] = ()
) -> RunResult:
    r"""Execute a scenario.

    Args:
        commands: scenario text, or a list of parsed commands
        config: overrides of ``max_depth``, ``max_steps``, ``max_nodes`` and ``default_library`` for this run
        base_dir: directory for relative ``load`` paths
        libraries: library files loaded before the first command

    Returns:
        `RunResult` with the System store, the trace, the exit status, every store and the printed output.
        The exit status is 0 when all expectations pass and no command failed, 1 otherwise, 2 for
        syntax or file errors and 3 when the planner ran out of nodes.

    Examples:
        >>> result = run("believe System: round(world)\nexpect System believe round(world) is holds")
        >>> result.status
        0
    """
    runner = Runner(config, base_dir)
    for path in libraries:
        runner.execute(LoadLibrary(os.path.abspath(path)))
        if runner.fatal:
            return runner.result()
    if isinstance(commands, str):
        try:
            commands = parse_scenario_lines(commands)
        except ScenarioParseError as e:
            runner.fatal = True
            runner.trace.record({"command": "parse", "status": "fatal", "error": str(e), "line": e.line, "column": e.column})
            return runner.result()
    return runner.run(commands)


def run_file(path: str, config: Optional[dict] = None, libraries: Iterable[str] = ()) -> RunResult:
    """Execute a scenario file, relative ``load`` paths resolve next to it."""
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        runner = Runner(config)
        runner.fatal = True
        runner.trace.record({"command": "read", "status": "fatal", "error": str(e)})
        return runner.result()
    return run(text, config, base_dir=os.path.dirname(os.path.abspath(path)), libraries=libraries)


def _balanced(text: str) -> bool:
    depth = 0
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        depth += line.count("{") - line.count("}")
    return depth <= 0


def repl(
    lines: Iterable[str],
    write: Callable[[str], None] = print,
    config: Optional[dict] = None,
    libraries: Iterable[str] = (),
) -> Runner:
    r"""Interactive loop over ``lines``, one command per line.

    A line that opens a brace block continues until the block is closed.
    Syntax errors are reported and skipped, the session goes on.
    """
    runner = Runner(config, base_dir=os.getcwd())
    for path in libraries:
        event = runner.execute(LoadLibrary(os.path.abspath(path)))
        if runner.fatal:
            write(f"error: {event['error']}")
            runner.fatal = False
    buffer = ""
    for line in lines:
        buffer += line if line.endswith("\n") else line + "\n"
        if not _balanced(buffer):
            continue
        text, buffer = buffer, ""
        try:
            commands = parse_scenario_lines(text)
        except ScenarioParseError as e:
            write(f"error: {e}")
            continue
        for _, command in commands:
            n = len(runner.output)
            event = runner.execute(command)
            runner.fatal = False
            for out in runner.output[n:]:
                write(out)
            if event["status"] not in ("ok", "passed"):
                write(f"{event['status']}: {event.get('error', event.get('actual', ''))}")
    return runner
