import pytest

import ascribe as asc
from ascribe._src.scenario import (
    Ascribe,
    Assert,
    DeclareAgent,
    DefineAct,
    DefineOperator,
    DefineStereotype,
    Expect,
    LoadLibrary,
    Perform,
    Recognize,
    Show,
    Simulate,
    parse_scenario_lines,
)
from ascribe.utils import random_store


def test_parse_assert():
    (command,) = asc.parse_scenario("believe System: round(world)")
    assert command == Assert(("System",), asc.BELIEF, asc.Proposition("round(world)"))


def test_parse_empty():
    assert asc.parse_scenario("") == []
    assert asc.parse_scenario("\n\n# only a comment\n") == []


def test_parse_error_is_located():
    with pytest.raises(asc.ScenarioParseError) as e:
        asc.parse_scenario("believe System round(world)")
    assert (e.value.line, e.value.column) == (1, 16)

    with pytest.raises(asc.ScenarioParseError) as e:
        asc.parse_scenario("agent John\nexpect John believe p is maybe\n")
    assert e.value.line == 2


def test_parse_commands():
    text = """
agent S
goal S > H: believe(S, on(coffee, stove))
stereotype Doctor {
    isa(pneumonia, bacteria);
    goal cured(patient)
}
ascribe default System to John: round(world)
ascribe stereotype System to John
ascribe accept H from S: on(coffee, stove)
perform speaker inform(S, H, on(coffee, stove))
perform inform(S, H, on(coffee, stove))
simulate System > John achieving {round(world), has(John, car)}
recognize System > S observing inform(S, H, on(coffee, stove))
show System > John json
show
expect System > John believe round(world) is unknown
load default
load "extra.scn"
"""
    lines = parse_scenario_lines(text)
    commands = [c for _, c in lines]
    assert [line for line, _ in lines][:3] == [2, 3, 4]

    assert commands[0] == DeclareAgent("S")
    assert commands[1] == Assert(
        ("S", "H"), asc.GOAL, asc.parse_formula("believe(S, on(coffee, stove))", ground_context=True)
    )
    assert commands[2] == DefineStereotype(
        None,
        "Doctor",
        (
            (asc.BELIEF, asc.Proposition("isa(pneumonia, bacteria)")),
            (asc.GOAL, asc.Proposition("cured(patient)")),
        ),
    )
    assert commands[3] == Ascribe("default", ("System",), "John", asc.Proposition("round(world)"))
    assert commands[4] == Ascribe("stereotype", ("System",), "John", None)
    assert commands[5].kind == "accept"
    inform = asc.ActInstance("inform", "S", "H", asc.Proposition("on(coffee, stove)"))
    assert commands[6] == Perform("speaker", inform)
    assert commands[7] == Perform("both", inform)
    assert commands[8] == Simulate(
        ("System", "John"),
        (asc.Proposition("round(world)"), asc.parse_formula("has(John, car)", ground_context=True)),
    )
    assert isinstance(commands[9], Recognize)
    assert asc.ActInstance.from_term(commands[9].observed) == inform
    assert commands[10] == Show(("System", "John"), "json")
    assert commands[11] == Show(None, None)
    assert commands[12] == Expect(("System", "John"), asc.BELIEF, asc.Proposition("round(world)"), asc.Status.UNKNOWN)
    assert commands[13] == LoadLibrary(None)
    assert commands[14] == LoadLibrary("extra.scn")


def test_parse_definitions():
    text = """
act remark class inform isa inform pre {believe(Speaker, relevant(Proposition))}
operator buy(A, X) pre {has(A, money)} add {owns(A, X)} del {has(A, money)}
operator nap pre {} add {rested}
"""
    act, buy, nap = asc.parse_scenario(text)
    assert isinstance(act, DefineAct)
    assert act.schema.parent == "inform"
    assert [str(c) for c in act.schema.preconditions] == ["believe(Speaker, relevant(Proposition))"]

    assert isinstance(buy, DefineOperator)
    assert buy.operator.params == (asc.Variable("A"), asc.Variable("X"))
    assert [str(d) for d in buy.operator.delete] == ["has(A, money)"]
    assert nap.operator.params == ()
    assert repr(nap.operator) == "nap"


def test_invalid_definition_is_a_parse_error():
    with pytest.raises(asc.ScenarioParseError) as e:
        asc.parse_scenario("agent S\noperator buy(A) pre {} add {owns(A, X)}\n")
    assert e.value.line == 2


def test_parse_library():
    schemas, operators = asc.parse_library(
        "act nod class answer pre {}\noperator nap pre {} add {rested}\n"
    )
    assert [s.name for s in schemas] == ["nod"]
    assert [o.name for o in operators] == ["nap"]

    with pytest.raises(asc.ScenarioParseError):
        asc.parse_library("believe System: round(world)")


def test_save_empty_store():
    assert asc.save_store(asc.BeliefStore()) == "agent System\n"
    assert asc.load_store("agent System\n") == asc.BeliefStore()


def test_save_and_load_store():
    inform = asc.ActInstance("inform", "S", "H", asc.Proposition("on(coffee, stove)"))
    store = asc.BeliefStore(owner="S", act_library=asc.default_library())
    store = asc.assert_attitude(store, "", asc.BELIEF, "on(coffee, stove)")
    store = asc.assert_attitude(store, "", asc.GOAL, "believe(H, on(coffee, stove))")
    store = asc.assert_attitude(store, "", asc.INTENTION, inform)
    store, _ = asc.speaker_update(store, inform)
    store = asc.set_topic(store, "H", asc.BELIEF, "kitchen")
    store = asc.add_trust(store, "", "H")

    text = asc.save_store(store)
    assert text.splitlines()[:2] == ["agent S", "load default"]
    assert "goal S > H > S: believe(H, on(coffee, stove))" in text.splitlines()
    assert asc.load_store(text) == store
    assert asc.save_store(asc.load_store(text)) == text


def test_save_custom_acts_and_operators():
    library = asc.define_act(asc.default_library(), asc.ActSchema("nod", "answer"))
    buy = asc.Operator("buy", ["A", "X"], ["has(A, money)"], ["owns(A, X)"], ["has(A, money)"])
    store = asc.BeliefStore(act_library=library, operators={"buy": buy})
    text = asc.save_store(store)
    assert "act nod class answer pre {}" in text
    assert "operator buy(A, X) pre {has(A, money)} add {owns(A, X)} del {has(A, money)}" in text
    assert asc.load_store(text) == store


def test_random_stores_round_trip(rng):
    for _ in range(100):
        store = random_store(rng)
        assert asc.load_store(asc.save_store(store)) == store


def test_load_store_errors():
    with pytest.raises(ValueError):
        asc.load_store("believe System: round(world)\n")
    with pytest.raises(ValueError):
        asc.load_store("agent System\nbelieve John: round(world)\n")
    with pytest.raises(ValueError):
        asc.load_store("agent System\nshow\n")
    with pytest.raises(ValueError):
        asc.load_store("")


def test_keywords_inside_blocks_are_terms():
    (simulate,) = asc.parse_scenario("simulate System achieving {x; goal(S, y)}")
    assert simulate.goals == (asc.Proposition("x"), asc.parse_formula("goal(S, y)", ground_context=True))

    act, op = asc.parse_scenario(
        "act plea class request pre {believe(Speaker, p), goal(Speaker, q); believe(Hearer, r)}\n"
        "operator ask(A) pre {x; goal(A, y)} add {believe(A, y); goal(A, z)}\n"
    )
    assert [str(c) for c in act.schema.preconditions][1] == "goal(Speaker, q)"
    assert len(op.operator.preconditions) == 2
    assert len(asc.default_library()) == 20


def test_parser_never_crashes(rng):
    vocabulary = [
        "believe", "goal", "intend", "agent", "ascribe", "default", "to", "from", "stereotype", "simulate",
        "achieving", "act", "class", "pre", "operator", "add", "del", "expect", "is", "holds", "show", "json",
        "load", "System", "John", "p", "X", "{", "}", "(", ")", ",", ";", ":", ">", "\n", '"a.scn"', "#",
    ]
    for _ in range(200):
        size = int(rng.integers(1, 15))
        text = " ".join(vocabulary[int(i)] for i in rng.integers(len(vocabulary), size=size))
        try:
            asc.parse_scenario(text)
        except asc.ScenarioParseError:
            pass
