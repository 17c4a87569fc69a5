import pytest

import ascribe as asc


def test_config():
    assert asc.config("max_depth") == 5
    asc.config("max_depth", 3)
    assert asc.config("max_depth") == 3

    assert asc.config("max_steps") == 8
    asc.config("max_steps", 2)
    assert asc.config("max_steps") == 2

    with pytest.raises(ValueError):
        asc.config("this is not a valid name", 1)

    with pytest.raises(ValueError):
        asc.config("this is not a valid name")


def test_config_is_reset_between_tests():
    assert asc.config("max_depth") == 5
    assert asc.config("max_steps") == 8


def test_limit_reaches_depth_check():
    store = asc.BeliefStore()
    asc.config("max_depth", 1)
    with pytest.raises(asc.DepthError):
        asc.assert_attitude(store, "John > Mary", asc.BELIEF, asc.Proposition("p"))
    # an explicit keyword overrides the global option
    store = asc.assert_attitude(store, "John > Mary", asc.BELIEF, asc.Proposition("p"), max_depth=2)
    assert asc.holds(store, "John > Mary", asc.BELIEF, asc.Proposition("p")) is asc.Status.HOLDS
