"""
Truth values of LTL4 submonitors and of counting-quantifier properties.
"""

from enum import IntEnum


class Verdict6(IntEnum):
    """Six-valued verdict, ordered bottom to top"""
    FALSE = 0
    CURRENTLY_FALSE = 1
    PRESUMABLY_FALSE = 2
    PRESUMABLY_TRUE = 3
    CURRENTLY_TRUE = 4
    TRUE = 5

    @property
    def token(self):
        return self.name

    @property
    def symbol(self):
        return _SYMBOLS[self]

    @property
    def is_true_side(self):
        return self >= Verdict6.PRESUMABLY_TRUE

    @property
    def is_permanent(self):
        return self in (Verdict6.TRUE, Verdict6.FALSE)

    def meet(self, other):
        return min(self, other)

    def join(self, other):
        return max(self, other)


_SYMBOLS = {
    Verdict6.FALSE: "⊥",
    Verdict6.CURRENTLY_FALSE: "⊥c",
    Verdict6.PRESUMABLY_FALSE: "⊥p",
    Verdict6.PRESUMABLY_TRUE: "⊤p",
    Verdict6.CURRENTLY_TRUE: "⊤c",
    Verdict6.TRUE: "⊤",
}

ALL_VERDICTS = frozenset(Verdict6)


class Verdict4(IntEnum):
    """Four-valued LTL verdict of a quantifier-free formula"""
    FALSE = 0
    PRESUMABLY_FALSE = 1
    PRESUMABLY_TRUE = 2
    TRUE = 3

    @property
    def token(self):
        return self.name

    @property
    def is_permanent(self):
        return self in (Verdict4.TRUE, Verdict4.FALSE)

    def to_verdict6(self):
        return Verdict6[self.name]


class TruthVector:
    """Number of child submonitors currently at each Verdict6 value"""

    __slots__ = ("counts",)

    def __init__(self, counts=None):
        self.counts = list(counts) if counts is not None else [0] * len(Verdict6)

    def __getitem__(self, verdict):
        return self.counts[verdict]

    def add(self, verdict, amount=1):
        self.counts[verdict] += amount

    def merge(self, other):
        """Return the element-wise sum of two vectors"""
        return TruthVector(a + b for a, b in zip(self.counts, other.counts))

    def matching(self, verdicts):
        return sum(self.counts[v] for v in verdicts)

    @property
    def total(self):
        return sum(self.counts)

    def copy(self):
        return TruthVector(self.counts)

    def as_dict(self):
        return {v.token: self.counts[v] for v in Verdict6}

    def __eq__(self, other):
        return isinstance(other, TruthVector) and self.counts == other.counts

    def __repr__(self):
        inner = ", ".join(f"{v.symbol}:{self.counts[v]}" for v in reversed(Verdict6) if self.counts[v])
        return f"TruthVector({inner})"
