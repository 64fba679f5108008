"""
Tableau automaton of a body with generalized Büchi acceptance.
States are maximal consistent truth assignments over the positive subformulas.
"""

import itertools
import logging

import networkx as nx

from ltl4c.config import DEFAULT_MAX_ATOMS
from ltl4c.errors import SynthesisBudgetExceeded
from ltl4c.syntax import And, Next, Not, Predicate, TrueConst, Until, atoms_of, subformulas

logger = logging.getLogger('ltl4c.monitor')


def sorted_atoms(formula):
    """Alphabet of a body: its predicates ordered by (name, args)"""
    return tuple(sorted(atoms_of(formula), key=lambda atom: (atom.name, atom.args)))


class Tableau:
    """
    Atom graph of a formula. good_atoms holds the atoms from which some
    infinite word is accepted; the same graph serves the formula and its
    negation, which differ only in their initial atoms.
    """

    def __init__(self, formula, alphabet=None, max_atoms=DEFAULT_MAX_ATOMS):
        self.formula = formula
        self.alphabet = tuple(alphabet) if alphabet is not None else sorted_atoms(formula)
        self.closure = [node for node in subformulas(formula) if not isinstance(node, Not)]
        self.nexts = [node for node in self.closure if isinstance(node, Next)]
        self.untils = [node for node in self.closure if isinstance(node, Until)]
        self.max_atoms = max_atoms

        self.atoms = self._enumerate_atoms()
        self.letters = [self._letter(atom) for atom in self.atoms]
        self.graph = self._build_graph()
        self.good_atoms = self._find_good_atoms()
        self.successors = {
            i: frozenset(j for j in self.graph.successors(i) if j in self.good_atoms)
            for i in self.good_atoms
        }
        logger.debug(f"Tableau: {len(self.atoms)} atoms, {self.graph.number_of_edges()} edges, "
                     f"{len(self.good_atoms)} good")

    @staticmethod
    def value(node, atom):
        if isinstance(node, Not):
            return not Tableau.value(node.operand, atom)
        if isinstance(node, TrueConst):
            return True
        return node in atom

    def _choices(self, node, partial):
        if isinstance(node, TrueConst):
            return (True,)
        if isinstance(node, (Predicate, Next)):
            return (False, True)
        if isinstance(node, And):
            return (self.value(node.left, partial) and self.value(node.right, partial),)
        if isinstance(node, Until):
            if self.value(node.right, partial):
                return (True,)
            if not self.value(node.left, partial):
                return (False,)
            return (False, True)
        raise ValueError(f"Unsupported formula node: {node!r}")

    def _enumerate_atoms(self):
        partials = [frozenset()]
        # closure is in post-order, so operands are decided before their parents
        for node in self.closure:
            extended = []
            for partial in partials:
                for choice in self._choices(node, partial):
                    extended.append(partial | {node} if choice else partial)
            if len(extended) > self.max_atoms:
                raise SynthesisBudgetExceeded("tableau atom", self.max_atoms)
            partials = extended
        return partials

    def _letter(self, atom):
        return sum(1 << bit for bit, predicate in enumerate(self.alphabet) if predicate in atom)

    def _signature(self, atom):
        return (tuple(self.value(node.operand, atom) for node in self.nexts)
                + tuple(node in atom for node in self.untils))

    def _required(self, atom):
        """Successor signature pattern; None entries are unconstrained"""
        pattern = [node in atom for node in self.nexts]
        for node in self.untils:
            pending = self.value(node.left, atom) and not self.value(node.right, atom)
            pattern.append((node in atom) if pending else None)
        return pattern

    def _build_graph(self):
        by_signature = {}
        for index, atom in enumerate(self.atoms):
            by_signature.setdefault(self._signature(atom), []).append(index)

        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.atoms)))
        for index, atom in enumerate(self.atoms):
            pattern = self._required(atom)
            options = [(value,) if value is not None else (False, True) for value in pattern]
            for signature in itertools.product(*options):
                for target in by_signature.get(signature, ()):
                    graph.add_edge(index, target)
        return graph

    def _accepting(self, members):
        if len(members) == 1:
            (node,) = members
            if not self.graph.has_edge(node, node):
                return False
        for until in self.untils:
            if not any(until not in self.atoms[i] or self.value(until.right, self.atoms[i]) for i in members):
                return False
        return True

    def _find_good_atoms(self):
        condensed = nx.condensation(self.graph)
        accepting = [c for c in condensed.nodes if self._accepting(condensed.nodes[c]["members"])]
        reaching = set(accepting)
        reverse = condensed.reverse(copy=False)
        for component in accepting:
            reaching |= nx.descendants(reverse, component)
        good = set()
        for component in reaching:
            good |= condensed.nodes[component]["members"]
        return frozenset(good)

    def initial_atoms(self, positive=True):
        """Good atoms where the formula (or, with positive=False, its negation) holds"""
        return frozenset(i for i in self.good_atoms if self.value(self.formula, self.atoms[i]) == positive)

    def step(self, current, letter):
        """Good successors of the current atoms that read letter"""
        result = set()
        for i in current:
            if self.letters[i] == letter:
                result |= self.successors[i]
        return frozenset(result)
