"""
Property language: AST, parser and pretty printer.
A property is a prefix of counting quantifiers followed by a quantifier-free LTL body.
"""

import logging
import operator
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ltl4c.errors import (
    ConstraintRangeError,
    NonCanonicalError,
    PropertySyntaxError,
    UnboundVariableError,
)

logger = logging.getLogger('ltl4c.syntax')


# ---------------------------------------------------------------------------
# Quantifiers
# ---------------------------------------------------------------------------

class QuantifierKind(Enum):
    PERCENTAGE = "forall"
    INSTANCE = "exists"


class Comparison(Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="

    def holds(self, left, right):
        return _COMPARATORS[self](left, right)


_COMPARATORS = {
    Comparison.LT: operator.lt,
    Comparison.LE: operator.le,
    Comparison.GT: operator.gt,
    Comparison.GE: operator.ge,
    Comparison.EQ: operator.eq,
}


@dataclass(frozen=True)
class QuantifierTuple:
    """One counting quantifier: kind, constraint, bound variable and guard key"""
    kind: QuantifierKind
    cmp: Comparison
    constant: Fraction | int
    variable: str
    predicate_key: str

    @property
    def is_percentage(self):
        return self.kind is QuantifierKind.PERCENTAGE

    def describe(self):
        return f"{self.kind.value}[{self.cmp.value}{format_constant(self.constant)}] {self.variable}"


# ---------------------------------------------------------------------------
# Quantifier-free body. Only the primitive nodes are stored; the derived
# operators below build their desugared form.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class Predicate(Formula):
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


TRUE = TrueConst()
FALSE = Not(TRUE)


def Or(left, right):
    return Not(And(Not(left), Not(right)))


def Implies(left, right):
    return Not(And(left, Not(right)))


def Finally(operand):
    return Until(TRUE, operand)


def Globally(operand):
    return Not(Finally(Not(operand)))


@dataclass(frozen=True)
class Property:
    """Canonical property: quantifier prefix (outermost first) and body"""
    prefix: tuple
    inner: Formula

    @property
    def keys(self):
        return tuple(q.predicate_key for q in self.prefix)

    @property
    def variables(self):
        return tuple(q.variable for q in self.prefix)

    def __str__(self):
        return pretty_print(self)


def subformulas(formula):
    """All distinct subformulas in post-order (children before parents)"""
    seen = {}

    def visit(node):
        if node in seen:
            return
        if isinstance(node, (Not, Next)):
            visit(node.operand)
        elif isinstance(node, (And, Until)):
            visit(node.left)
            visit(node.right)
        seen[node] = None

    visit(formula)
    return list(seen)


def atoms_of(formula):
    """Distinct predicates of a body, in first-occurrence order"""
    return tuple(node for node in subformulas(formula) if isinstance(node, Predicate))


def substitute(formula, mapping):
    """Replace variable arguments by the values in mapping"""
    if isinstance(formula, Predicate):
        return Predicate(formula.name, tuple(mapping.get(arg, arg) for arg in formula.args))
    if isinstance(formula, Not):
        return Not(substitute(formula.operand, mapping))
    if isinstance(formula, Next):
        return Next(substitute(formula.operand, mapping))
    if isinstance(formula, And):
        return And(substitute(formula.left, mapping), substitute(formula.right, mapping))
    if isinstance(formula, Until):
        return Until(substitute(formula.left, mapping), substitute(formula.right, mapping))
    return formula


def is_canonical(prop):
    """True when every quantifier is in the prefix and the body is quantifier-free"""
    return all(isinstance(q, QuantifierTuple) for q in prop.prefix) and all(
        isinstance(node, (TrueConst, Predicate, Not, And, Next, Until)) for node in subformulas(prop.inner)
    )


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

KEYWORDS = {"forall", "exists", "true", "false", "X", "F", "G", "U"}

_TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SPACE", r"[ \t\r]+"),
    ("NUMBER", r"-?\d+(?:\.\d+)?(?:/\d+)?%?"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"=>|->|&&|\|\||<=|>=|==|≤|≥|[<>=!()\[\]:,]"),
    ("ERROR", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))

_CMP_TOKENS = {
    "<": Comparison.LT,
    "<=": Comparison.LE,
    "≤": Comparison.LE,
    ">": Comparison.GT,
    ">=": Comparison.GE,
    "≥": Comparison.GE,
    "=": Comparison.EQ,
    "==": Comparison.EQ,
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text):
    """Split property text into tokens, dropping whitespace and # comments"""
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind in ("SPACE", "COMMENT"):
            continue
        if kind == "ERROR":
            raise PropertySyntaxError(f"unexpected character {value!r}", line, column)
        if kind == "IDENT" and value in KEYWORDS:
            kind = "KEYWORD"
        tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, text):
        if self.peek().text == text and self.peek().kind in ("OP", "KEYWORD"):
            return self.advance()
        return None

    def expect(self, text):
        token = self.accept(text)
        if token is None:
            found = self.peek()
            raise PropertySyntaxError(f"expected {text!r}, found {found.text or 'end of input'!r}",
                                      found.line, found.column)
        return token

    def expect_ident(self, what):
        token = self.peek()
        if token.kind != "IDENT":
            raise PropertySyntaxError(f"expected {what}, found {token.text or 'end of input'!r}",
                                      token.line, token.column)
        return self.advance()

    # property ::= quantifier* body
    def parse(self):
        prefix = []
        while self.peek().kind == "KEYWORD" and self.peek().text in ("forall", "exists"):
            prefix.append(self.parse_quantifier(prefix))
        inner = self.parse_implication()
        if self.peek().kind != "EOF":
            token = self.peek()
            if token.text in ("forall", "exists"):
                raise NonCanonicalError("quantifiers must precede the quantifier-free body",
                                        token.line, token.column)
            raise PropertySyntaxError(f"unexpected {token.text!r}", token.line, token.column)
        return Property(tuple(prefix), inner)

    def parse_quantifier(self, bound):
        keyword = self.advance()
        kind = QuantifierKind(keyword.text)
        if self.accept("["):
            cmp_token = self.advance()
            if cmp_token.text not in _CMP_TOKENS:
                raise PropertySyntaxError(f"expected a comparison, found {cmp_token.text!r}",
                                          cmp_token.line, cmp_token.column)
            cmp = _CMP_TOKENS[cmp_token.text]
            number = self.advance()
            if number.kind != "NUMBER":
                raise PropertySyntaxError(f"expected a constant, found {number.text!r}",
                                          number.line, number.column)
            constant = _parse_constant(kind, number)
            self.expect("]")
        elif kind is QuantifierKind.PERCENTAGE:
            cmp, constant = Comparison.EQ, Fraction(1)
        else:
            cmp, constant = Comparison.GE, 1

        variable = self.expect_ident("a variable name")
        if variable.text in (q.variable for q in bound):
            raise PropertySyntaxError(f"variable {variable.text!r} is bound twice",
                                      variable.line, variable.column)
        self.expect(":")
        key = self.expect_ident("a guard predicate")
        self.expect("(")
        guard_var = self.expect_ident("the bound variable")
        if guard_var.text != variable.text:
            raise PropertySyntaxError(f"guard must be applied to {variable.text!r}",
                                      guard_var.line, guard_var.column)
        self.expect(")")
        self.expect("=>")
        return QuantifierTuple(kind, cmp, constant, variable.text, key.text)

    # implication ::= disjunction ('->' implication)?
    def parse_implication(self):
        left = self.parse_disjunction()
        if self.accept("->"):
            return Implies(left, self.parse_implication())
        return left

    def parse_disjunction(self):
        left = self.parse_conjunction()
        while self.accept("||"):
            left = Or(left, self.parse_conjunction())
        return left

    def parse_conjunction(self):
        left = self.parse_until()
        while self.accept("&&"):
            left = And(left, self.parse_until())
        return left

    # until ::= unary ('U' until)?
    def parse_until(self):
        left = self.parse_unary()
        if self.accept("U"):
            return Until(left, self.parse_until())
        return left

    def parse_unary(self):
        if self.accept("!"):
            return Not(self.parse_unary())
        if self.accept("X"):
            return Next(self.parse_unary())
        if self.accept("F"):
            return Finally(self.parse_unary())
        if self.accept("G"):
            return Globally(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        token = self.peek()
        if token.kind == "KEYWORD" and token.text in ("forall", "exists"):
            raise NonCanonicalError("quantifier under a temporal or boolean operator",
                                    token.line, token.column)
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.accept("("):
            inner = self.parse_implication()
            self.expect(")")
            return inner
        if token.kind == "IDENT":
            self.advance()
            args = []
            if self.accept("("):
                if not self.accept(")"):
                    args.append(self.expect_ident("an argument").text)
                    while self.accept(","):
                        args.append(self.expect_ident("an argument").text)
                    self.expect(")")
            return Predicate(token.text, tuple(args))
        raise PropertySyntaxError(f"unexpected {token.text or 'end of input'!r}", token.line, token.column)


def _parse_constant(kind, token):
    text = token.text
    try:
        if text.endswith("%"):
            value = Fraction(text[:-1]) / 100
        else:
            value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise PropertySyntaxError(f"bad constant {text!r}", token.line, token.column) from None

    if kind is QuantifierKind.PERCENTAGE:
        if not 0 <= value <= 1:
            raise ConstraintRangeError(f"percentage constant {text} outside [0,1]", token.line, token.column)
        return value
    if value < 0 or value.denominator != 1 or text.endswith("%"):
        raise ConstraintRangeError(f"instance constant {text} must be a non-negative integer",
                                   token.line, token.column)
    return int(value)


def _check_bound(prop):
    bound = set(prop.variables)
    for atom in atoms_of(prop.inner):
        for arg in atom.args:
            if arg not in bound:
                raise UnboundVariableError(f"variable {arg!r} in {atom.name}(...) is not bound by a quantifier")


def parse_property(text):
    """Parse property text into its canonical AST"""
    prop = _Parser(text).parse()
    _check_bound(prop)
    logger.debug(f"Parsed property with {len(prop.prefix)} quantifiers")
    return prop


def load_property(path):
    """Read and parse a property file"""
    with open(path, "r", encoding="utf-8") as f:
        return parse_property(f.read())


# ---------------------------------------------------------------------------
# Pretty printer
# ---------------------------------------------------------------------------

def format_constant(constant):
    if isinstance(constant, int):
        return str(constant)
    if constant.denominator == 1:
        return str(constant.numerator)
    # terminating decimals print exactly, anything else as a ratio
    den = constant.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{constant.numerator}/{constant.denominator}"
    places = max(twos, fives)
    scaled = constant * 10 ** places
    whole, frac = divmod(int(scaled), 10 ** places)
    return f"{whole}.{frac:0{places}d}"


def format_formula(formula):
    """Print a body, re-applying the derived operators where they match"""
    if isinstance(formula, TrueConst):
        return "true"
    if isinstance(formula, Predicate):
        if not formula.args:
            return formula.name
        return f"{formula.name}({', '.join(formula.args)})"
    if isinstance(formula, Next):
        return f"X {format_formula(formula.operand)}"
    if isinstance(formula, And):
        return f"({format_formula(formula.left)} && {format_formula(formula.right)})"
    if isinstance(formula, Until):
        if formula.left == TRUE:
            return f"F {format_formula(formula.right)}"
        return f"({format_formula(formula.left)} U {format_formula(formula.right)})"
    if isinstance(formula, Not):
        inner = formula.operand
        if inner == TRUE:
            return "false"
        if isinstance(inner, Until) and inner.left == TRUE and isinstance(inner.right, Not):
            return f"G {format_formula(inner.right.operand)}"
        if isinstance(inner, And) and isinstance(inner.right, Not):
            if isinstance(inner.left, Not):
                return f"({format_formula(inner.left.operand)} || {format_formula(inner.right.operand)})"
            return f"({format_formula(inner.left)} -> {format_formula(inner.right.operand)})"
        return f"!{format_formula(inner)}"
    raise ValueError(f"Unsupported formula node: {formula!r}")


def pretty_print(prop):
    """Render a property in the concrete syntax accepted by parse_property"""
    parts = []
    for q in prop.prefix:
        parts.append(f"{q.describe()} : {q.predicate_key}({q.variable}) =>")
    parts.append(format_formula(prop.inner))
    return " ".join(parts)
