"""
Hypothesis strategies for bodies, properties, words and traces.
"""

from fractions import Fraction

import hypothesis.strategies as st

from ltl4c.syntax import (
    TRUE,
    And,
    Comparison,
    Finally,
    Globally,
    Next,
    Not,
    Or,
    Predicate,
    Property,
    QuantifierKind,
    QuantifierTuple,
    Until,
    subformulas,
)
from ltl4c.trace import Event, Trace

PROPOSITIONS = (Predicate("a"), Predicate("b"), Predicate("c"))

KEYS = ("k0", "k1", "k2")
VARIABLES = ("x0", "x1", "x2")
GUARDED = ("p", "q", "r")
DOMAIN = ("0", "1")


def has_next(formula):
    return any(isinstance(node, Next) for node in subformulas(formula))


def bodies(atoms=PROPOSITIONS, depth=4, with_next=True):
    """Bodies of bounded depth built from primitive and derived operators"""
    leaves = st.sampled_from((TRUE,) + tuple(atoms))
    if depth == 0:
        return leaves
    sub = bodies(atoms, depth - 1, with_next)
    pairs = st.tuples(sub, sub)
    options = [
        leaves,
        sub.map(Not),
        pairs.map(lambda pair: And(*pair)),
        pairs.map(lambda pair: Or(*pair)),
        pairs.map(lambda pair: Until(*pair)),
        sub.map(Finally),
        sub.map(Globally),
    ]
    if with_next:
        options.append(sub.map(Next))
    return st.one_of(options)


def letters(atoms=PROPOSITIONS):
    return st.frozensets(st.sampled_from(atoms))


def words(atoms=PROPOSITIONS, min_size=0, max_size=7):
    return st.lists(letters(atoms), min_size=min_size, max_size=max_size)


@st.composite
def quantifiers(draw, position):
    kind = draw(st.sampled_from(QuantifierKind))
    cmp = draw(st.sampled_from(Comparison))
    if kind is QuantifierKind.PERCENTAGE:
        constant = draw(st.sampled_from([Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)]))
    else:
        constant = draw(st.integers(min_value=0, max_value=3))
    return QuantifierTuple(kind, cmp, constant, VARIABLES[position], KEYS[position])


@st.composite
def properties(draw, max_prefix=2, depth=3):
    """Canonical properties over keys k0..k2; bodies use f and one predicate per bound variable"""
    size = draw(st.integers(min_value=0, max_value=max_prefix))
    prefix = tuple(draw(quantifiers(position)) for position in range(size))
    atoms = [Predicate("f")]
    atoms += [Predicate(name, (VARIABLES[position],)) for position, name in enumerate(GUARDED[:size])]
    return Property(prefix, draw(bodies(tuple(atoms), depth)))


@st.composite
def events(draw, index):
    bindings = {}
    for key in KEYS + GUARDED:
        value = draw(st.sampled_from(DOMAIN + (None,)))
        if value is not None:
            bindings[key] = value
    flags = frozenset({"f"}) if draw(st.booleans()) else frozenset()
    return Event(index, bindings, flags)


@st.composite
def traces(draw, max_events=8):
    size = draw(st.integers(min_value=0, max_value=max_events))
    return Trace([draw(events(index)) for index in range(size)])
