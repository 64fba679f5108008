"""
Quantifier submonitors and the monitor tree.
Each node aggregates the verdicts of its children into a truth vector and a six-valued verdict.
"""

import logging

from ltl4c.monitor import Ltl4Submonitor
from ltl4c.syntax import Comparison
from ltl4c.verdicts import ALL_VERDICTS, TruthVector, Verdict6

logger = logging.getLogger('ltl4c.quantifiers')

TRUE_SIDE_CURRENT = frozenset({Verdict6.TRUE, Verdict6.CURRENTLY_TRUE})
TRUE_SIDE = frozenset({Verdict6.TRUE, Verdict6.CURRENTLY_TRUE, Verdict6.PRESUMABLY_TRUE})
NOT_FALSE_CURRENT = ALL_VERDICTS - {Verdict6.FALSE, Verdict6.CURRENTLY_FALSE}

_ALL_TRUE = ((Comparison.EQ, 1), (Comparison.GE, 1))


def constraint_satisfied(quant, count, total):
    """Counting constraint: a share of total for percentage quantifiers, a plain count otherwise"""
    if quant.is_percentage:
        return quant.cmp.holds(count, quant.constant * total)
    return quant.cmp.holds(count, quant.constant)


def decide(quant, v, permanent):
    """
    Six-valued verdict of a quantifier node and whether it is permanent.

    v counts every child by current verdict; permanent counts only children
    whose verdict can no longer change.
    """
    n = v.total
    cmp, c = quant.cmp, quant.constant
    if quant.is_percentage:
        if (cmp, c) in _ALL_TRUE and permanent[Verdict6.FALSE] > 0:
            return Verdict6.FALSE, True
    else:
        satisfied = permanent[Verdict6.TRUE]
        if cmp in (Comparison.GT, Comparison.GE) and cmp.holds(satisfied, c):
            return Verdict6.TRUE, True
        if cmp in (Comparison.EQ, Comparison.LE) and satisfied > c:
            return Verdict6.FALSE, True
        if cmp is Comparison.LT and satisfied >= c:
            return Verdict6.FALSE, True
        # every child decided and the bound holds on the observed domain
        if (cmp in (Comparison.LT, Comparison.LE, Comparison.EQ) and n > 0
                and v[Verdict6.TRUE] + v[Verdict6.FALSE] == n and cmp.holds(v[Verdict6.TRUE], c)):
            return Verdict6.TRUE, False

    def holds(verdicts):
        return constraint_satisfied(quant, v.matching(verdicts), n)

    if n == 0:
        return (Verdict6.PRESUMABLY_TRUE if holds(TRUE_SIDE) else Verdict6.PRESUMABLY_FALSE), False
    if holds(TRUE_SIDE_CURRENT):
        return Verdict6.CURRENTLY_TRUE, False
    if not holds(NOT_FALSE_CURRENT):
        return Verdict6.CURRENTLY_FALSE, False
    if holds(TRUE_SIDE):
        return Verdict6.PRESUMABLY_TRUE, False
    return Verdict6.PRESUMABLY_FALSE, False


def child_state(child):
    """(Verdict6, permanent) of a child node or leaf"""
    if isinstance(child, Ltl4Submonitor):
        return child.verdict.to_verdict6(), child.is_permanent
    return child.b, child.latched


class QuantifierNode:
    """Quantifier submonitor at one depth of the tree, identified by its partial value vector"""

    __slots__ = ("quant", "depth", "path", "children", "live", "frozen", "v", "b", "latched")

    def __init__(self, quant, depth, path):
        self.quant = quant
        self.depth = depth
        self.path = tuple(path)
        self.children = {}
        self.live = set()
        self.frozen = TruthVector()
        self.v = TruthVector()
        self.b, self.latched = decide(quant, self.v, self.v)

    def add_child(self, value, child):
        self.children[value] = child
        self.live.add(value)

    def __repr__(self):
        return f"QuantifierNode(path={self.path}, b={self.b.symbol}, v={self.v!r})"


def children_of(node):
    """Children materialized under a node"""
    return set(node.children.values())


def count_matching(node, verdicts):
    return node.v.matching(verdicts)


def constraint_holds(node, verdicts):
    return int(constraint_satisfied(node.quant, count_matching(node, verdicts), node.v.total))


def node_verdict(node):
    """Verdict of a node from its current vector; a latched node keeps its verdict"""
    if node.latched:
        return node.b
    return decide(node.quant, node.v, _permanent_counts(node))[0]


def _permanent_counts(node):
    permanent = node.frozen.copy()
    for key in node.live:
        verdict, latched = child_state(node.children[key])
        if latched:
            permanent.add(verdict)
    return permanent


def reduce_node(node, prune=True):
    """Recompute v from the children, then b unless the node is latched"""
    current, permanent = TruthVector(), TruthVector()
    for key in list(node.live):
        verdict, latched = child_state(node.children[key])
        if latched and prune:
            node.frozen.add(verdict)
            node.live.discard(key)
            continue
        current.add(verdict)
        if latched:
            permanent.add(verdict)
    node.v = node.frozen.merge(current)
    if not node.latched:
        previous = node.b
        node.b, node.latched = decide(node.quant, node.v, node.frozen.merge(permanent))
        if node.b != previous:
            logger.debug(f"Node {node.path} changed {previous.symbol} -> {node.b.symbol}")
    return node.b


class MonitorTree:
    """Quantifier nodes keyed by partial value vectors, with one LTL4 leaf per full vector"""

    def __init__(self, prop, fsm, prune=True):
        self.prefix = prop.prefix
        self.variables = prop.variables
        self.fsm = fsm
        self.prune = prune
        self.vectors = set()
        self.leaves = {}
        self.levels = [[] for _ in self.prefix]
        self.nodes = {}
        if self.prefix:
            self.root = QuantifierNode(self.prefix[0], 0, ())
            self.levels[0].append(self.root)
            self.nodes[()] = self.root
        else:
            # quantifier-free: the whole trace is one slice
            self.root = None
            self.vectors.add(())
            self.leaves[()] = self.create_leaf(())

    @property
    def depth(self):
        return len(self.prefix)

    @property
    def verdict(self):
        if self.root is None:
            return self.leaves[()].verdict.to_verdict6()
        return self.root.b

    def create_leaf(self, vector):
        return Ltl4Submonitor(self.fsm, vector, self.variables)

    def insert_vector(self, vector, leaf=None):
        """Add the path of a vector once; returns its leaf"""
        vector = tuple(vector)
        if vector in self.vectors:
            return self.leaves[vector]
        if leaf is None:
            leaf = self.create_leaf(vector)
        node = self.root
        for depth in range(self.depth - 1):
            value = vector[depth]
            child = node.children.get(value)
            if child is None:
                child = QuantifierNode(self.prefix[depth + 1], depth + 1, vector[:depth + 1])
                node.add_child(value, child)
                self.levels[depth + 1].append(child)
                self.nodes[child.path] = child
            node = child
        node.add_child(vector[-1], leaf)
        self.vectors.add(vector)
        self.leaves[vector] = leaf
        return leaf

    def nodes_at_depth(self, depth):
        return self.levels[depth]

    def reduce_level(self, depth, controller=None):
        nodes = self.levels[depth]
        if controller is None:
            for node in nodes:
                reduce_node(node, self.prune)
        else:
            controller.map(lambda node: reduce_node(node, self.prune), nodes)

    def reduce_all(self, controller=None):
        for depth in reversed(range(self.depth)):
            self.reduce_level(depth, controller)
        return self.verdict

    def iter_nodes(self):
        """Quantifier nodes in lexicographic path order"""
        return [self.nodes[path] for path in sorted(self.nodes, key=_path_key)]

    def snapshot(self):
        """path -> (vector counts, verdict) for every quantifier node"""
        return {node.path: (tuple(node.v.counts), node.b) for node in self.iter_nodes()}


def _path_key(path):
    return tuple((isinstance(value, tuple), value) for value in path)
