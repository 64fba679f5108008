"""
Brute-force evaluator of counting-quantifier properties.
Recomputes value vectors, slices, instance sets and constraints from scratch on
every call; used to cross-check the incremental monitor tree.
"""

from dataclasses import dataclass, field

from ltl4c.monitor import Ltl4Submonitor, synthesize_monitor
from ltl4c.syntax import Comparison
from ltl4c.trace import extract_valuation
from ltl4c.verdicts import Verdict6

# Table of permanent verdicts for instance quantifiers, keyed by comparison
PERMANENT_SATISFACTION = {
    Comparison.GT: lambda satisfied, c: satisfied > c,
    Comparison.GE: lambda satisfied, c: satisfied >= c,
}
PERMANENT_VIOLATION = {
    Comparison.EQ: lambda satisfied, c: satisfied > c,
    Comparison.LT: lambda satisfied, c: satisfied >= c,
    Comparison.LE: lambda satisfied, c: satisfied > c,
}


@dataclass
class ReferenceResult:
    verdict: Verdict6
    nodes: dict = field(default_factory=dict)  # path -> (counts, verdict)


def reference_evaluate(prop, trace, fsm=None):
    """Evaluate a property on a finite trace by direct recursion over the instance tree"""
    fsm = fsm or synthesize_monitor(prop.inner)
    keys = prop.keys
    events = list(trace)
    valuations = [extract_valuation(event, keys) for event in events]
    vectors = {vector for vector in valuations if vector is not None}
    nodes = {}

    def leaf(vector):
        monitor = Ltl4Submonitor(fsm, vector, prop.variables)
        monitor.process(event for event, valuation in zip(events, valuations) if valuation == vector)
        return monitor.verdict.to_verdict6(), monitor.is_permanent

    def instances(prefix):
        m = len(prefix)
        return {vector[:m + 1] for vector in vectors if vector[:m] == prefix}

    def evaluate(prefix):
        depth = len(prefix)
        if depth == len(prop.prefix):
            return leaf(prefix)
        quant = prop.prefix[depth]
        results = {child: evaluate(child) for child in instances(prefix)}
        verdict, permanent = _semantics(quant, results)
        counts = tuple(sum(1 for value, _ in results.values() if value == b) for b in Verdict6)
        nodes[prefix] = (counts, verdict)
        return verdict, permanent

    verdict, _ = evaluate(())
    return ReferenceResult(verdict, nodes)


def _semantics(quant, results):
    children = set(results)

    def instances_at(value):
        return {child for child, (verdict, _) in results.items() if verdict == value}

    def permanently(value):
        return {child for child, (verdict, permanent) in results.items() if permanent and verdict == value}

    def satisfied(values):
        count = len(set().union(*(instances_at(value) for value in values)))
        bound = quant.constant * len(children) if quant.is_percentage else quant.constant
        return quant.cmp.holds(count, bound)

    c = quant.constant
    if quant.is_percentage:
        if quant.cmp in (Comparison.EQ, Comparison.GE) and c == 1 and permanently(Verdict6.FALSE):
            return Verdict6.FALSE, True
    else:
        count = len(permanently(Verdict6.TRUE))
        if quant.cmp in PERMANENT_SATISFACTION and PERMANENT_SATISFACTION[quant.cmp](count, c):
            return Verdict6.TRUE, True
        if quant.cmp in PERMANENT_VIOLATION:
            if PERMANENT_VIOLATION[quant.cmp](count, c):
                return Verdict6.FALSE, True
            decided = instances_at(Verdict6.TRUE) | instances_at(Verdict6.FALSE)
            if children and decided == children and quant.cmp.holds(len(instances_at(Verdict6.TRUE)), c):
                return Verdict6.TRUE, False

    top = {Verdict6.TRUE, Verdict6.CURRENTLY_TRUE, Verdict6.PRESUMABLY_TRUE}
    if not children:
        return (Verdict6.PRESUMABLY_TRUE if satisfied(top) else Verdict6.PRESUMABLY_FALSE), False
    if satisfied({Verdict6.TRUE, Verdict6.CURRENTLY_TRUE}):
        return Verdict6.CURRENTLY_TRUE, False
    if not satisfied(set(Verdict6) - {Verdict6.FALSE, Verdict6.CURRENTLY_FALSE}):
        return Verdict6.CURRENTLY_FALSE, False
    if satisfied(top):
        return Verdict6.PRESUMABLY_TRUE, False
    return Verdict6.PRESUMABLY_FALSE, False
