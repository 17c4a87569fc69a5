import dataclasses
from typing import Dict, FrozenSet, Iterator, Optional, Tuple, Union

from lark import Transformer

from .grammar import parse_tree

Term = Union["Constant", "Variable", "Compound"]
Bindings = Dict["Variable", Term]
IntoTerm = Union[str, Term]
IntoProposition = Union[str, Term, "Proposition"]


@dataclasses.dataclass(frozen=True)
class Constant:
    r"""Ground symbol, also used as a zero-arity atom.

    Examples:
        >>> Constant("stove")
        stove
    """
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValueError(f"constant name must be a nonempty string, got {self.name!r}")

    def __repr__(self):
        return self.name


@dataclasses.dataclass(frozen=True)
class Variable:
    r"""Schema variable. Lexically a symbol starting with an uppercase letter.

    Examples:
        >>> Variable("Speaker")
        Speaker
    """
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValueError(f"variable name must be a nonempty string, got {self.name!r}")

    def __repr__(self):
        return self.name


@dataclasses.dataclass(frozen=True)
class Compound:
    r"""Functor applied to an ordered, fixed list of arguments.

    Examples:
        >>> Compound("on", (Constant("coffee"), Constant("stove")))
        on(coffee, stove)
    """
    functor: str
    args: Tuple[Term, ...]

    def __post_init__(self):
        if not isinstance(self.functor, str) or not self.functor:
            raise ValueError(f"functor must be a nonempty string, got {self.functor!r}")
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) == 0:
            raise ValueError(f"compound {self.functor} needs at least one argument, use a Constant instead")

    def __repr__(self):
        return f"{self.functor}({', '.join(repr(a) for a in self.args)})"


def variables(t: Term) -> FrozenSet[Variable]:
    """Variables occurring in a term."""
    return frozenset(_iter_variables(t))


def _iter_variables(t: Term) -> Iterator[Variable]:
    if isinstance(t, Variable):
        yield t
    elif isinstance(t, Compound):
        for a in t.args:
            yield from _iter_variables(a)


def is_ground(t: Term) -> bool:
    return next(_iter_variables(t), None) is None


def occurs(v: Variable, t: Term) -> bool:
    if v == t:
        return True
    if isinstance(t, Compound):
        return any(occurs(v, a) for a in t.args)
    return False


def substitute(b: Bindings, t: Term) -> Term:
    r"""Apply bindings to a term.

    Bound variables are followed to a fixpoint, so a chained (non idempotent)
    substitution is normalized on the fly. Unbound variables stay in place.

    Args:
        b: mapping from `Variable` to `Term`
        t: the term

    Returns:
        the substituted term

    Examples:
        >>> X, Y = Variable("X"), Variable("Y")
        >>> substitute({X: Y, Y: Constant("a")}, X)
        a
    """
    if not b:
        return t
    return _substitute(b, t, ())


def _substitute(b, t, seen):
    if isinstance(t, Variable):
        if t in b:
            if t in seen:
                raise ValueError(f"cyclic bindings through variable {t}")
            return _substitute(b, b[t], seen + (t,))
        return t
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_substitute(b, a, seen) for a in t.args))
    return t


def unify(a: Term, b: Term, start: Optional[Bindings] = None) -> Optional[Bindings]:
    r"""Most general unifier of two terms, extending ``start``.

    The result is idempotent: every value is already fully substituted. The
    occurs-check is always on.

    Args:
        a: first term
        b: second term
        start: idempotent bindings to extend (not modified)

    Returns:
        new bindings, or ``None`` when the terms do not unify

    Examples:
        >>> X = Variable("X")
        >>> unify(parse_term("on(X, stove)"), parse_term("on(coffee, stove)"))
        {X: coffee}

        >>> unify(parse_term("f(X)"), X) is None
        True
    """
    bindings = dict(start) if start else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = substitute(bindings, x)
        y = substitute(bindings, y)
        if x == y:
            continue
        if isinstance(x, Variable):
            if not _bind(bindings, x, y):
                return None
        elif isinstance(y, Variable):
            if not _bind(bindings, y, x):
                return None
        elif (
            isinstance(x, Compound)
            and isinstance(y, Compound)
            and x.functor == y.functor
            and len(x.args) == len(y.args)
        ):
            stack.extend(reversed(list(zip(x.args, y.args))))
        else:
            return None
    return bindings


def _bind(bindings: Bindings, v: Variable, t: Term) -> bool:
    if occurs(v, t):
        return False
    single = {v: t}
    for key in list(bindings):
        bindings[key] = substitute(single, bindings[key])
    bindings[v] = t
    return True


@dataclasses.dataclass(init=False, frozen=True)
class Proposition:
    r"""Atom with an explicit polarity.

    The body never carries an outer ``not``: nested negations are folded into
    the polarity when the proposition is built.

    Args:
        body: a term, the text of a term, or another proposition
        negated: flips the polarity of ``body``

    Examples:
        >>> Proposition("not(not(isa(car, wreck)))")
        isa(car, wreck)

        >>> Proposition("on(coffee, stove)", negated=True)
        not(on(coffee, stove))
    """
    body: Term
    negated: bool

    def __init__(self, body: IntoProposition, negated: bool = False):
        if isinstance(body, str):
            body = parse_term(body)
        if isinstance(body, Proposition):
            negated = negated != body.negated
            body = body.body
        while isinstance(body, Compound) and body.functor == "not" and len(body.args) == 1:
            body = body.args[0]
            negated = not negated
        if not isinstance(body, (Constant, Variable, Compound)):
            raise ValueError(f"unable to convert {body!r} into a Proposition")
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "negated", bool(negated))

    def __repr__(self):
        if self.negated:
            return f"not({self.body!r})"
        return repr(self.body)

    def as_term(self) -> Term:
        if self.negated:
            return Compound("not", (self.body,))
        return self.body

    def negate(self) -> "Proposition":
        return Proposition(self.body, not self.negated)

    def substitute(self, b: Bindings) -> "Proposition":
        return Proposition(substitute(b, self.as_term()))

    def variables(self) -> FrozenSet[Variable]:
        return variables(self.body)

    def is_ground(self) -> bool:
        return is_ground(self.body)

    def depth(self) -> int:
        return 0


def negate(p):
    r"""Flip the polarity of a proposition (or attitude formula).

    Examples:
        >>> negate(Proposition("on(coffee, stove)"))
        not(on(coffee, stove))

        >>> negate(negate(Proposition("p")))
        p
    """
    return p.negate()


def ground(t: Term) -> Term:
    """Read every variable as a constant of the same name."""
    if isinstance(t, Variable):
        return Constant(t.name)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(ground(a) for a in t.args))
    return t


class TermTransformer(Transformer):
    def atom(self, items):
        (name,) = items
        name = str(name)
        if name[0].isupper():
            return Variable(name)
        return Constant(name)

    def compound(self, items):
        return Compound(str(items[0]), tuple(items[1:]))


def parse_term(text: str, ground_context: bool = False) -> Term:
    r"""Read a term from text.

    Lowercase-initial symbols are constants and functors, uppercase-initial
    symbols are variables. In a ground context uppercase symbols are read as
    constants instead, which is how stored attitudes name agents such as
    ``John``.

    Examples:
        >>> parse_term("isa(John, Doctor)")
        isa(John, Doctor)

        >>> variables(parse_term("isa(John, Doctor)", ground_context=True))
        frozenset()
    """
    term = TermTransformer().transform(parse_tree(text, start="term"))
    if ground_context:
        term = ground(term)
    return term


def parse_proposition(text: str, ground_context: bool = False) -> Proposition:
    return Proposition(parse_term(text, ground_context))
