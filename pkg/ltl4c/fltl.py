"""
Finite-trace LTL (FLTL).
A direct recursive evaluator used as oracle, and formula progression over a
disjunctive normal form whose value on the empty remainder is syntactic.
"""

from dataclasses import dataclass
from functools import reduce

from ltl4c.syntax import And, Next, Not, Predicate, TrueConst, Until


def letter_holds(letter):
    """Predicate test for a word position: an Event, or a set of true atoms"""
    if hasattr(letter, "holds"):
        return letter.holds
    return letter.__contains__


def fltl_eval(formula, word):
    """Evaluate a ground body on a finite word under FLTL semantics"""
    word = list(word)
    n = len(word)
    tests = [letter_holds(letter) for letter in word]
    memo = {}

    def ev(node, i):
        key = (node, i)
        if key in memo:
            return memo[key]
        if isinstance(node, TrueConst):
            result = True
        elif isinstance(node, Not):
            result = not ev(node.operand, i)
        elif isinstance(node, And):
            result = ev(node.left, i) and ev(node.right, i)
        elif i >= n:
            # atoms, X and U are false on the empty suffix
            result = False
        elif isinstance(node, Predicate):
            result = bool(tests[i](node))
        elif isinstance(node, Next):
            result = i + 1 < n and ev(node.operand, i + 1)
        elif isinstance(node, Until):
            result = False
            for j in range(i, n):
                if ev(node.right, j):
                    result = True
                    break
                if not ev(node.left, j):
                    break
        else:
            raise ValueError(f"Unsupported formula node: {node!r}")
        memo[key] = result
        return result

    return ev(formula, 0)


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NTrue:
    pass


@dataclass(frozen=True)
class NFalse:
    pass


@dataclass(frozen=True)
class NLit:
    atom: Predicate
    positive: bool


@dataclass(frozen=True)
class NAnd:
    left: object
    right: object


@dataclass(frozen=True)
class NOr:
    left: object
    right: object


@dataclass(frozen=True)
class NNext:
    """Strong next needs a further position; weak next also holds at the end"""
    operand: object
    strong: bool


@dataclass(frozen=True)
class NUntil:
    left: object
    right: object


@dataclass(frozen=True)
class NRelease:
    left: object
    right: object


@dataclass(frozen=True)
class NStep:
    """Strong: the remainder is non-empty. Weak: the remainder is empty."""
    strong: bool


def to_nnf(formula, positive=True):
    if isinstance(formula, TrueConst):
        return NTrue() if positive else NFalse()
    if isinstance(formula, Predicate):
        return NLit(formula, positive)
    if isinstance(formula, Not):
        return to_nnf(formula.operand, not positive)
    if isinstance(formula, And):
        left, right = to_nnf(formula.left, positive), to_nnf(formula.right, positive)
        return NAnd(left, right) if positive else NOr(left, right)
    if isinstance(formula, Next):
        return NNext(to_nnf(formula.operand, positive), strong=positive)
    if isinstance(formula, Until):
        left, right = to_nnf(formula.left, positive), to_nnf(formula.right, positive)
        return NUntil(left, right) if positive else NRelease(left, right)
    raise ValueError(f"Unsupported formula node: {formula!r}")


# ---------------------------------------------------------------------------
# Residuals: a frozenset of clauses, each a frozenset of obligations
# ---------------------------------------------------------------------------

TRUE_DNF = frozenset({frozenset()})
FALSE_DNF = frozenset()


def _consistent(clause):
    steps = set()
    for ob in clause:
        if isinstance(ob, NLit) and NLit(ob.atom, not ob.positive) in clause:
            return False
        if isinstance(ob, NStep):
            steps.add(ob.strong)
    return len(steps) < 2


def simplify(clauses):
    """Drop contradictory clauses and clauses subsumed by a smaller one"""
    kept = []
    for clause in sorted((c for c in clauses if _consistent(c)), key=len):
        if not any(k <= clause for k in kept):
            kept.append(clause)
    return frozenset(kept)


def dnf_or(a, b):
    return simplify(a | b)


def dnf_and(a, b):
    return simplify(frozenset(x | y for x in a for y in b))


def expand(nnf):
    """DNF of an NNF formula; temporal nodes and literals stay as obligations"""
    if isinstance(nnf, NTrue):
        return TRUE_DNF
    if isinstance(nnf, NFalse):
        return FALSE_DNF
    if isinstance(nnf, NAnd):
        return dnf_and(expand(nnf.left), expand(nnf.right))
    if isinstance(nnf, NOr):
        return dnf_or(expand(nnf.left), expand(nnf.right))
    return frozenset({frozenset({nnf})})


def initial_residual(formula):
    return expand(to_nnf(formula))


def _progress_obligation(ob, holds):
    if isinstance(ob, NLit):
        return TRUE_DNF if bool(holds(ob.atom)) == ob.positive else FALSE_DNF
    if isinstance(ob, NNext):
        if ob.strong:
            return dnf_and(expand(ob.operand), frozenset({frozenset({NStep(True)})}))
        return dnf_or(expand(ob.operand), frozenset({frozenset({NStep(False)})}))
    if isinstance(ob, NUntil):
        self_dnf = frozenset({frozenset({ob})})
        return dnf_or(_progress_nnf(ob.right, holds),
                      dnf_and(_progress_nnf(ob.left, holds), self_dnf))
    if isinstance(ob, NRelease):
        self_dnf = frozenset({frozenset({ob})})
        return dnf_and(_progress_nnf(ob.right, holds),
                       dnf_or(_progress_nnf(ob.left, holds), self_dnf))
    if isinstance(ob, NStep):
        return TRUE_DNF if ob.strong else FALSE_DNF
    raise ValueError(f"Unsupported obligation: {ob!r}")


def _progress_nnf(nnf, holds):
    return progress(expand(nnf), holds)


def progress(residual, holds):
    """Residual obligation after consuming one position whose atoms satisfy holds"""
    result = FALSE_DNF
    for clause in residual:
        acc = TRUE_DNF
        for ob in clause:
            acc = dnf_and(acc, _progress_obligation(ob, holds))
            if not acc:
                break
        result = dnf_or(result, acc)
        if result == TRUE_DNF:
            break
    return result


def _empty_ok(ob):
    if isinstance(ob, NLit):
        return not ob.positive
    if isinstance(ob, (NNext, NStep)):
        return not ob.strong
    return isinstance(ob, NRelease)


def accepts_empty(residual):
    """FLTL value of a residual on the empty remainder"""
    return any(all(_empty_ok(ob) for ob in clause) for clause in residual)


def fltl_progress_eval(formula, word):
    """FLTL value computed by progression; agrees with fltl_eval"""
    residual = reduce(lambda r, letter: progress(r, letter_holds(letter)), word, initial_residual(formula))
    return accepts_empty(residual)
