from hypothesis import given, settings

from ltl4c.fltl import (
    FALSE_DNF,
    TRUE_DNF,
    NLit,
    NRelease,
    NStep,
    NUntil,
    accepts_empty,
    dnf_and,
    fltl_eval,
    fltl_progress_eval,
    initial_residual,
    progress,
    simplify,
    to_nnf,
)
from ltl4c.syntax import TRUE, Finally, Globally, Next, Not, Until, parse_property, substitute
from ltl4c.trace import make_event
from strategies import PROPOSITIONS, bodies, words

a, b, c = PROPOSITIONS


def test_next_on_last_position_is_false():
    assert fltl_eval(Next(a), [{a}]) is False
    assert fltl_eval(Not(Next(a)), [{a}]) is True
    assert fltl_eval(Next(a), [set(), {a}]) is True


def test_until_with_witness():
    assert fltl_eval(Until(b, c), [{b}, {b}, {c}]) is True
    assert fltl_eval(Until(b, c), [{b}, set(), {c}]) is False
    assert fltl_eval(Until(b, c), [{b}, {b}]) is False


def test_globally_without_violation():
    assert fltl_eval(Globally(a), [{a}, {a}]) is True
    assert fltl_eval(Not(Until(TRUE, Not(a))), [{a}, {a}]) is True
    assert fltl_eval(Globally(a), [{a}, set()]) is False


def test_empty_word():
    assert fltl_eval(TRUE, []) is True
    assert fltl_eval(a, []) is False
    assert fltl_eval(Not(a), []) is True
    assert fltl_eval(Next(TRUE), []) is False
    assert fltl_eval(Finally(a), []) is False
    assert fltl_eval(Globally(a), []) is True


def test_ground_predicates_on_events():
    body = parse_property("forall s : socket(s) => G (receive(s) -> F respond(s))").inner
    ground = substitute(body, {"s": "7"})
    answered = [make_event(0, {"socket": 7, "receive": 7}), make_event(1, {"socket": 7, "respond": 7})]
    pending = [make_event(0, {"socket": 7, "respond": 7}), make_event(1, {"socket": 7, "receive": 7})]
    other = [make_event(0, {"socket": 7, "receive": 8})]
    assert fltl_eval(ground, answered) is True
    assert fltl_eval(ground, pending) is False
    assert fltl_eval(ground, other) is True


def test_nnf_pushes_negation():
    assert to_nnf(Not(Until(a, b))) == NRelease(NLit(a, False), NLit(b, False))
    assert to_nnf(Until(a, b)) == NUntil(NLit(a, True), NLit(b, True))


def test_progression_steps():
    residual = initial_residual(Next(a))
    after = progress(residual, {b}.__contains__)
    assert NStep(True) in next(iter(after))
    assert accepts_empty(after) is False
    assert progress(after, {a}.__contains__) == TRUE_DNF
    assert progress(initial_residual(a), set().__contains__) == FALSE_DNF


def test_contradictions_are_dropped():
    # weak and strong step obligations cannot share a clause
    assert dnf_and(frozenset({frozenset({NStep(True)})}), frozenset({frozenset({NStep(False)})})) == FALSE_DNF
    assert simplify(frozenset({frozenset({NLit(a, True), NLit(a, False)})})) == FALSE_DNF
    assert simplify(frozenset({frozenset({NLit(a, True)}), frozenset({NLit(a, True), NLit(b, True)})})) == \
        frozenset({frozenset({NLit(a, True)})})


def test_weak_next_at_the_end():
    residual = progress(initial_residual(Not(Next(a))), set().__contains__)
    assert accepts_empty(residual) is True
    assert progress(progress(initial_residual(Next(TRUE)), set().__contains__), set().__contains__) == TRUE_DNF


@settings(max_examples=400, deadline=None)
@given(bodies(depth=4), words(max_size=6))
def test_progression_agrees_with_direct_evaluation(body, word):
    assert fltl_progress_eval(body, word) == fltl_eval(body, word)
