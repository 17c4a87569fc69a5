import pytest

import ascribe as asc
from ascribe.utils import random_store


def test_viewpoint():
    v = asc.Viewpoint("John > Mary")
    assert v.agents == ("John", "Mary")
    assert v.depth == 2
    assert v.holder() == "Mary"
    assert v.parent == asc.Viewpoint(["John"])
    assert str(v) == "John > Mary"
    assert asc.Viewpoint() == asc.Viewpoint("") == asc.Viewpoint(None)
    assert asc.Viewpoint().holder("System") == "System"
    assert asc.Viewpoint("John").is_prefix_of(v)


def test_viewpoint_errors():
    with pytest.raises(ValueError):
        asc.Viewpoint("John > > Mary")
    with pytest.raises(ValueError):
        asc.Viewpoint([("John", asc.GOAL), "Mary"])
    with pytest.raises(ValueError):
        asc.Viewpoint().parent
    with pytest.raises(ValueError):
        asc.Viewpoint([("John", asc.GOAL)]).extend("Mary")


def test_assert_and_holds():
    store = asc.BeliefStore()
    store = asc.assert_attitude(store, "", asc.BELIEF, "round(world)")
    assert asc.holds(store, "", asc.BELIEF, "round(world)") is asc.Status.HOLDS
    assert asc.holds(store, "", asc.BELIEF, "not(round(world))") is asc.Status.CONTRARY
    assert asc.holds(store, "", asc.BELIEF, "flat(world)") is asc.Status.UNKNOWN
    # lookup never ascribes
    assert asc.holds(store, "John", asc.BELIEF, "round(world)") is asc.Status.UNKNOWN
    assert asc.holds(store, "", asc.GOAL, "round(world)") is asc.Status.UNKNOWN


def test_assert_is_idempotent():
    store = asc.assert_attitude(asc.BeliefStore(), "John", asc.BELIEF, "round(world)")
    assert asc.assert_attitude(store, "John", asc.BELIEF, "round(world)") is store


def test_assert_contrary_raises():
    store = asc.assert_attitude(asc.BeliefStore(), "", asc.BELIEF, "not(round(world))")
    with pytest.raises(asc.ConsistencyError) as e:
        asc.assert_attitude(store, "", asc.BELIEF, "round(world)")
    assert e.value.evidence == asc.Proposition("not(round(world))")


def test_assert_requires_ground():
    with pytest.raises(ValueError):
        asc.assert_attitude(asc.BeliefStore(), "", asc.BELIEF, asc.Proposition("on(X, stove)"))


def test_depth_limit():
    with pytest.raises(asc.DepthError):
        asc.assert_attitude(asc.BeliefStore(), "A > B > C", asc.BELIEF, "p", max_depth=2)
    with pytest.raises(asc.DepthError):
        asc.assert_attitude(asc.BeliefStore(), "A", asc.BELIEF, "believe(B, believe(C, p))", max_depth=2)


def test_retract_inverts_assert():
    store = asc.assert_attitude(asc.BeliefStore(), "", asc.BELIEF, "round(world)")
    store2 = asc.assert_attitude(store, "John", asc.BELIEF, "round(world)")
    assert asc.retract_attitude(store2, "John", asc.BELIEF, "round(world)") == store
    # absent entries are ignored
    assert asc.retract_attitude(store, "John", asc.BELIEF, "flat(world)") is store


def test_nested_attitudes_are_flattened():
    store = asc.assert_attitude(asc.BeliefStore(owner="S"), "", asc.BELIEF, "believe(H, believe(S, on(coffee, stove)))")
    assert asc.entries(store, "H > S", asc.BELIEF) == (asc.Proposition("on(coffee, stove)"),)
    assert asc.holds(store, "H", asc.BELIEF, "believe(S, on(coffee, stove))") is asc.Status.HOLDS

    store = asc.assert_attitude(store, "", asc.BELIEF, "goal(H, has(H, car))")
    assert asc.entries(store, "H", asc.GOAL) == (asc.parse_proposition("has(H, car)", ground_context=True),)

    # a negated attitude stays where it was asserted and contradicts the inner entry
    store = asc.assert_attitude(store, "", asc.BELIEF, "not(believe(H, round(world)))")
    assert asc.holds(store, "", asc.BELIEF, "not(believe(H, round(world)))") is asc.Status.HOLDS
    assert asc.entries(store, "H", asc.BELIEF) == ()
    assert asc.holds(store, "H", asc.BELIEF, "round(world)") is asc.Status.CONTRARY


def test_path_through_owner_collapses():
    store = asc.assert_attitude(asc.BeliefStore(), "System > John", asc.BELIEF, "p")
    assert asc.holds(store, "John", asc.BELIEF, "p") is asc.Status.HOLDS
    assert asc.holds(store, "John > John", asc.BELIEF, "p") is asc.Status.HOLDS


def test_goal_viewpoint():
    store = asc.assert_attitude(asc.BeliefStore(), [("John", asc.GOAL)], asc.BELIEF, "owns(John, car)")
    assert asc.holds(store, "John", asc.GOAL, "owns(John, car)") is asc.Status.HOLDS
    with pytest.raises(ValueError):
        asc.holds(store, [("John", asc.GOAL)], asc.INTENTION, "owns(John, car)")


def test_topics_and_trust():
    store = asc.set_topic(asc.BeliefStore(), "John", asc.BELIEF, "weather")
    assert store.topics[(asc.Viewpoint("John"), asc.BELIEF)] == "weather"
    assert asc.set_topic(store, "John", asc.BELIEF, None).topics == {}

    assert not asc.is_trusted(store, "John", "Mary")
    assert asc.is_trusted(asc.add_trust(store, "John", "Mary"), "John", "Mary")
    store = asc.assert_attitude(store, "John", asc.BELIEF, "trustworthy(Mary)")
    assert asc.is_trusted(store, "John", "Mary")


def test_stereotype_members():
    store = asc.add_stereotype(asc.BeliefStore(), "Doctor", ["isa(pneumonia, bacteria)", (asc.GOAL, "cured(patient)")])
    assert store.stereotypes["Doctor"] == (
        (asc.BELIEF, asc.Proposition("isa(pneumonia, bacteria)")),
        (asc.GOAL, asc.Proposition("cured(patient)")),
    )
    with pytest.raises(ValueError):
        asc.add_stereotype(store, "Doctor", [(asc.INTENTION, "cure(patient)")])


def test_render_empty():
    assert asc.render(asc.BeliefStore()) == "+----------------+\n+-System-believe-+"


def test_render_nested():
    store = asc.assert_attitude(asc.BeliefStore(), "", asc.BELIEF, "round(world)")
    store = asc.assert_attitude(store, "John", asc.BELIEF, "round(world)")
    assert asc.render(store) == "\n".join(
        [
            "+------------------+",
            "| round(world)     |",
            "| +--------------+ |",
            "| | round(world) | |",
            "| +-John-believe-+ |",
            "+-System---believe-+",
        ]
    )


def test_render_is_deterministic(rng):
    store = random_store(rng, size=10)
    assert asc.render(store) == asc.render(store)
    assert asc.render(store, "json") == asc.render(store, "json")
    assert asc.to_dict(store)["owner"] == "System"


def test_random_stores_are_consistent(rng):
    for _ in range(100):
        store = random_store(rng)
        assert asc.inconsistencies(store) == []
        for v, at in store.environments:
            assert store.environments[(v, at)]
