import itertools

import pytest

import ascribe as asc
from ascribe.utils import random_term


def test_parse():
    t = asc.parse_term("on(coffee, stove)")
    assert t == asc.Compound("on", (asc.Constant("coffee"), asc.Constant("stove")))
    assert repr(t) == "on(coffee, stove)"

    assert asc.parse_term("X") == asc.Variable("X")
    assert asc.parse_term("John", ground_context=True) == asc.Constant("John")
    assert asc.is_ground(asc.parse_term("isa(John, Doctor)", ground_context=True))
    assert not asc.is_ground(asc.parse_term("isa(John, Doctor)"))


def test_invalid_symbols():
    with pytest.raises(ValueError):
        asc.Constant("")
    with pytest.raises(ValueError):
        asc.Compound("f", ())


def test_unify():
    X, Y = asc.Variable("X"), asc.Variable("Y")
    assert asc.unify(asc.parse_term("on(X, stove)"), asc.parse_term("on(coffee, stove)")) == {X: asc.Constant("coffee")}
    assert asc.unify(asc.parse_term("on(X, stove)"), asc.parse_term("on(coffee, table)")) is None
    assert asc.unify(asc.parse_term("on(X, Y)"), asc.parse_term("in(coffee, stove)")) is None
    assert asc.unify(asc.parse_term("f(a)"), asc.parse_term("f(a, b)")) is None
    assert asc.unify(asc.parse_term("f(a)"), asc.parse_term("f(a)")) == {}

    b = asc.unify(asc.parse_term("f(X, Y)"), asc.parse_term("f(Y, a)"))
    assert asc.substitute(b, X) == asc.Constant("a")
    assert asc.substitute(b, Y) == asc.Constant("a")


def test_occurs_check():
    X = asc.Variable("X")
    assert asc.occurs(X, asc.parse_term("f(g(X))"))
    assert asc.unify(X, asc.parse_term("f(X)")) is None
    assert asc.unify(asc.parse_term("g(X, X)"), asc.parse_term("g(Y, f(Y))")) is None


def test_unifier_is_idempotent():
    b = asc.unify(asc.parse_term("f(X, g(Y), Z)"), asc.parse_term("f(g(Z), X, a)"))
    assert b is not None
    for v, t in b.items():
        assert asc.substitute(b, t) == t


def test_substitute_chain():
    X, Y, Z = asc.Variable("X"), asc.Variable("Y"), asc.Variable("Z")
    b = {X: asc.parse_term("f(Y)"), Y: Z, Z: asc.Constant("a")}
    assert asc.substitute(b, asc.parse_term("g(X, W)")) == asc.parse_term("g(f(a), W)")

    with pytest.raises(ValueError):
        asc.substitute({X: asc.parse_term("f(Y)"), Y: X}, X)


def test_unifier_is_most_general(rng):
    # any other unifier over a small constant set factors through the mgu
    constants = [asc.Constant(c) for c in "abc"]
    for _ in range(50):
        a = random_term(rng, depth=2, constants="ab", functors="fg", variables="XY")
        b = random_term(rng, depth=2, constants="ab", functors="fg", variables="YZ")
        mgu = asc.unify(a, b)
        vs = sorted(asc.variables(a) | asc.variables(b), key=lambda v: v.name)
        for values in itertools.product(constants, repeat=len(vs)):
            theta = dict(zip(vs, values))
            if asc.substitute(theta, a) == asc.substitute(theta, b):
                assert mgu is not None
                for v in vs:
                    assert asc.substitute(theta, asc.substitute(mgu, v)) == theta[v]


def test_unifier_is_sound(rng):
    unified = 0
    for _ in range(200):
        a = random_term(rng, depth=3, variables="XY")
        instance = rng.random() < 0.5
        if instance:
            theta = {v: random_term(rng, depth=1) for v in asc.variables(a)}
            b = asc.substitute(theta, a)
        else:
            b = random_term(rng, depth=3, variables="YZ")
        mgu = asc.unify(a, b)
        if mgu is None:
            assert not instance
            continue
        unified += 1
        assert asc.substitute(mgu, a) == asc.substitute(mgu, b)
    assert unified >= 50


def test_proposition():
    p = asc.Proposition("not(not(isa(car, wreck)))")
    assert not p.negated
    assert p == asc.Proposition("isa(car, wreck)")

    q = asc.Proposition("on(coffee, stove)", negated=True)
    assert repr(q) == "not(on(coffee, stove))"
    assert q.as_term() == asc.parse_term("not(on(coffee, stove))")
    assert asc.Proposition(q) == q
    assert asc.Proposition(q, negated=True) == q.negate()


def test_negate_involution(rng):
    for _ in range(100):
        p = asc.utils.random_proposition(rng)
        assert asc.negate(asc.negate(p)) == p
        assert asc.negate(p) != p
        assert asc.negate(p).body == p.body
