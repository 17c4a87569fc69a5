import itertools

import pytest

import ascribe as asc
from ascribe.utils import random_formula, random_store

P = asc.Proposition("on(coffee, stove)")


@pytest.fixture
def round_world():
    return asc.assert_attitude(asc.BeliefStore(), "", asc.BELIEF, "round(world)")


def test_default_ascribe(round_world):
    store, outcome = asc.default_ascribe(round_world, "", "John", "round(world)")
    assert outcome.result is asc.Result.ASCRIBED
    assert asc.holds(store, "John", asc.BELIEF, "round(world)") is asc.Status.HOLDS
    assert asc.holds(store, "", asc.BELIEF, "round(world)") is asc.Status.HOLDS

    store2, outcome = asc.default_ascribe(store, "", "John", "round(world)")
    assert outcome.result is asc.Result.ALREADY_HELD
    assert store2 is store


def test_default_ascribe_blocked(round_world):
    store = asc.assert_attitude(round_world, "John", asc.BELIEF, "not(round(world))")
    store2, outcome = asc.default_ascribe(store, "", "John", "round(world)")
    assert outcome.result is asc.Result.BLOCKED
    assert outcome.blocking_evidence == asc.Proposition("not(round(world))")
    assert store2 == store


def test_default_ascribe_preconditions(round_world):
    with pytest.raises(asc.PreconditionError) as e:
        asc.default_ascribe(round_world, "", "John", "flat(world)")
    assert e.value.condition == "held"
    with pytest.raises(ValueError):
        asc.default_ascribe(round_world, "John", "John", "round(world)")


def test_blocked_outcome_needs_evidence():
    with pytest.raises(ValueError):
        asc.AscriptionOutcome(asc.Result.BLOCKED)


@pytest.fixture
def doctor():
    store = asc.add_stereotype(
        asc.BeliefStore(), "Doctor", ["isa(pneumonia, bacteria)", "treatment(bacteria, anti-biotics)"]
    )
    return asc.assert_attitude(store, "", asc.BELIEF, "isa(John, Doctor)")


def test_stereotype_ascribe(doctor):
    store, outcomes = asc.stereotype_ascribe(doctor, "", "John")
    assert [(str(f), o.result) for f, o in outcomes] == [
        ("isa(pneumonia, bacteria)", asc.Result.ASCRIBED),
        ("treatment(bacteria, anti-biotics)", asc.Result.ASCRIBED),
    ]
    assert asc.holds(store, "John", asc.BELIEF, "treatment(bacteria, anti-biotics)") is asc.Status.HOLDS


def test_stereotype_ascribe_blocks_per_member(doctor):
    doctor = asc.assert_attitude(doctor, "John", asc.BELIEF, "not(isa(pneumonia, bacteria))")
    store, outcomes = asc.stereotype_ascribe(doctor, "", "John")
    assert [o.result for _, o in outcomes] == [asc.Result.BLOCKED, asc.Result.ASCRIBED]
    assert asc.holds(store, "John", asc.BELIEF, "isa(pneumonia, bacteria)") is asc.Status.CONTRARY


def test_stereotype_ascribe_no_fit(doctor):
    store, outcomes = asc.stereotype_ascribe(doctor, "", "Mary")
    assert outcomes == []
    assert store is doctor


def test_stereotype_goals(doctor):
    doctor = asc.add_stereotype(doctor, "Doctor", [(asc.GOAL, "cured(patient)")])
    store, _ = asc.stereotype_ascribe(doctor, "", "John")
    assert asc.holds(store, "John", asc.GOAL, "cured(patient)") is asc.Status.HOLDS


@pytest.mark.parametrize("belief,contrary,trust", list(itertools.product([False, True], repeat=3)))
def test_accept_belief(belief, contrary, trust):
    store = asc.BeliefStore(owner="H")
    if belief:
        store = asc.assert_attitude(store, "S", asc.BELIEF, P)
    if contrary:
        store = asc.assert_attitude(store, "", asc.BELIEF, P.negate())
    if trust:
        store = asc.add_trust(store, "", "S")

    if belief and not contrary and trust:
        store, outcome = asc.accept_belief(store, "", "S", P)
        assert outcome.result is asc.Result.ASCRIBED
        assert asc.holds(store, "", asc.BELIEF, P) is asc.Status.HOLDS
    else:
        with pytest.raises(asc.PreconditionError) as e:
            asc.accept_belief(store, "", "S", P)
        expected = "belief" if not belief else "no_contrary" if contrary else "trust"
        assert e.value.condition == expected


def test_ascribe_on_demand(round_world):
    store, status = asc.ascribe_on_demand(round_world, "John", asc.BELIEF, "round(world)")
    assert status is asc.Status.HOLDS
    assert asc.entries(store, "John", asc.BELIEF) == (asc.Proposition("round(world)"),)


def test_ascribe_on_demand_chains_levels(round_world):
    store, status = asc.ascribe_on_demand(round_world, "John > Mary", asc.BELIEF, "round(world)")
    assert status is asc.Status.HOLDS
    assert asc.entries(store, "John", asc.BELIEF) == (asc.Proposition("round(world)"),)
    assert asc.entries(store, "John > Mary", asc.BELIEF) == (asc.Proposition("round(world)"),)


def test_ascribe_on_demand_unknown(round_world):
    store, status = asc.ascribe_on_demand(round_world, "John > Mary", asc.BELIEF, "flat(world)")
    assert status is asc.Status.UNKNOWN
    assert store == round_world


def test_ascribe_on_demand_blocked(round_world):
    store = asc.assert_attitude(round_world, "A > B", asc.BELIEF, "not(round(world))")
    store2, status = asc.ascribe_on_demand(store, "A > B > C", asc.BELIEF, "round(world)")
    assert status is asc.Status.UNKNOWN
    assert asc.entries(store2, "A > B > C", asc.BELIEF) == ()
    assert asc.entries(store2, "A > B", asc.BELIEF) == (asc.Proposition("not(round(world))"),)


def test_ascribe_on_demand_depth():
    with pytest.raises(asc.DepthError):
        asc.ascribe_on_demand(asc.BeliefStore(), "A > B > C", asc.BELIEF, "p", max_depth=2)


def test_ascribe_on_demand_never_ascribes_goals(rng):
    for _ in range(100):
        store = random_store(rng)
        store = asc.assert_attitude(store, "", asc.GOAL, "wins(System)")
        for path in ["John", "John > Mary", "Sue"]:
            for at in (asc.GOAL, asc.INTENTION):
                f = random_formula(rng, depth=0)
                store2, _ = asc.ascribe_on_demand(store, path, at, f)
                assert store2 is store
            store2, status = asc.ascribe_on_demand(store, path, asc.GOAL, "wins(System)")
            assert store2 is store
            assert status is asc.Status.UNKNOWN


def test_default_ascribe_is_monotone(rng):
    for _ in range(100):
        store = random_store(rng)
        for v, at in list(store.environments):
            if at is not asc.BELIEF:
                continue
            for e in asc.entries(store, v, at):
                if not isinstance(e, asc.Proposition):
                    continue
                new, outcome = asc.default_ascribe(store, v, "Mary" if v.holder() != "Mary" else "John", e)
                for key, es in store.environments.items():
                    assert es <= new.environments[key]
                if outcome.result is asc.Result.BLOCKED:
                    assert new == store


def test_ascribe_twice_is_idempotent(rng):
    agents = ["John", "Mary", "Sue"]
    for _ in range(100):
        store = random_store(rng)
        path = [agents[int(i)] for i in rng.integers(3, size=int(rng.integers(0, 3)))]
        at = [asc.BELIEF, asc.GOAL][int(rng.integers(2))]
        f = random_formula(rng, depth=1) if at is asc.BELIEF else asc.utils.random_proposition(rng)
        try:
            once, first = asc.ascribe(store, path, at, f)
        except (asc.ConsistencyError, asc.DepthError):
            continue
        twice, second = asc.ascribe(once, path, at, f)
        assert twice == once
        if first.result is asc.Result.ASCRIBED:
            assert second.result is asc.Result.ALREADY_HELD
        else:
            assert second.result is first.result
            assert once == store
