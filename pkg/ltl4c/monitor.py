"""
LTL4 monitor synthesis and execution.
One deterministic FSM is synthesized per body and shared by every submonitor instance.
"""

import logging
from collections import deque
from dataclasses import dataclass

from ltl4c.config import DEFAULT_MAX_ATOMS, DEFAULT_STATE_CAP
from ltl4c.errors import SynthesisBudgetExceeded
from ltl4c.fltl import accepts_empty, initial_residual, progress
from ltl4c.syntax import format_formula, substitute
from ltl4c.tableau import Tableau, sorted_atoms
from ltl4c.verdicts import Verdict4

logger = logging.getLogger('ltl4c.monitor')

_TRUE_TRAP = ("trap", Verdict4.TRUE)
_FALSE_TRAP = ("trap", Verdict4.FALSE)


@dataclass(frozen=True)
class MonitorFSM:
    """Deterministic monitor: transitions[state][letter], letters are bitmasks over atoms"""
    atoms: tuple
    initial: int
    transitions: tuple
    labels: tuple

    @property
    def num_states(self):
        return len(self.labels)

    @property
    def alphabet_size(self):
        return 1 << len(self.atoms)

    def step(self, state, letter):
        return self.transitions[state][letter]

    def is_trap(self, state):
        return self.labels[state].is_permanent

    def letter_of(self, holds, ground_atoms=None):
        """Bitmask of the atoms (or their ground instances) satisfied by holds"""
        atoms = self.atoms if ground_atoms is None else ground_atoms
        letter = 0
        for bit, atom in enumerate(atoms):
            if holds(atom):
                letter |= 1 << bit
        return letter

    def verdict(self, word):
        """Verdict after a word given as sets of atoms or events"""
        state = self.initial
        for letter in word:
            holds = letter.holds if hasattr(letter, "holds") else letter.__contains__
            state = self.transitions[state][self.letter_of(holds)]
        return self.labels[state]


def _label(key):
    if key == _TRUE_TRAP:
        return Verdict4.TRUE
    if key == _FALSE_TRAP:
        return Verdict4.FALSE
    residual = key[2]
    return Verdict4.PRESUMABLY_TRUE if accepts_empty(residual) else Verdict4.PRESUMABLY_FALSE


def _state_key(positive, negative, residual):
    if not positive:
        return _FALSE_TRAP
    if not negative:
        return _TRUE_TRAP
    return (positive, negative, residual)


def synthesize_monitor(body, state_cap=DEFAULT_STATE_CAP, max_atoms=DEFAULT_MAX_ATOMS, minimize=False):
    """
    Build the LTL4 monitor of a body; variables are treated as opaque atoms.

    A state pairs the tableau atoms still possible for the body and for its
    negation with the FLTL residual of the word read so far. An empty side
    makes the state a permanent trap; otherwise the residual decides between
    the presumable verdicts.
    """
    atoms = sorted_atoms(body)
    tableau = Tableau(body, alphabet=atoms, max_atoms=max_atoms)
    bits = {atom: bit for bit, atom in enumerate(atoms)}
    letters = range(1 << len(atoms))

    start = _state_key(tableau.initial_atoms(True), tableau.initial_atoms(False), initial_residual(body))
    index = {start: 0}
    keys = [start]
    transitions = []
    queue = deque([start])
    while queue:
        key = queue.popleft()
        if key in (_TRUE_TRAP, _FALSE_TRAP):
            transitions.append((index[key],) * len(letters))
            continue
        positive, negative, residual = key
        row = []
        for letter in letters:
            def holds(atom, letter=letter):
                return bool(letter >> bits[atom] & 1)
            target = _state_key(tableau.step(positive, letter), tableau.step(negative, letter),
                                progress(residual, holds))
            if target not in index:
                if len(keys) >= state_cap:
                    raise SynthesisBudgetExceeded("state", state_cap)
                index[target] = len(keys)
                keys.append(target)
                queue.append(target)
            row.append(index[target])
        transitions.append(tuple(row))

    fsm = MonitorFSM(atoms, 0, tuple(transitions), tuple(_label(key) for key in keys))
    logger.info(f"Synthesized monitor for {format_formula(body)}: {len(atoms)} atoms, {fsm.num_states} states")
    if fsm.num_states * 2 > state_cap:
        logger.warning(f"Monitor uses {fsm.num_states} of {state_cap} allowed states")
    if minimize:
        fsm = minimize_monitor(fsm)
    return fsm


def minimize_monitor(fsm):
    """Merge equivalent states by partition refinement over labels"""
    block = list(fsm.labels)
    while True:
        signatures = [(block[s],) + tuple(block[t] for t in fsm.transitions[s]) for s in range(fsm.num_states)]
        numbering = {}
        refined = [numbering.setdefault(sig, len(numbering)) for sig in signatures]
        if len(numbering) == len(set(block)):
            break
        block = refined

    # renumber blocks in breadth-first order from the initial state
    order = {}
    queue = deque([fsm.initial])
    order[block[fsm.initial]] = 0
    representative = {0: fsm.initial}
    while queue:
        state = queue.popleft()
        for target in fsm.transitions[state]:
            if block[target] not in order:
                order[block[target]] = len(order)
                representative[order[block[target]]] = target
                queue.append(target)

    transitions = tuple(
        tuple(order[block[t]] for t in fsm.transitions[representative[i]]) for i in range(len(order))
    )
    labels = tuple(fsm.labels[representative[i]] for i in range(len(order)))
    logger.info(f"Minimized monitor from {fsm.num_states} to {len(labels)} states")
    return MonitorFSM(fsm.atoms, 0, transitions, labels)


def dump_monitor(fsm):
    """Transition table, one line per (state, letter): state letter next-state label"""
    width = max(len(fsm.atoms), 1)
    lines = [f"# atoms: {' '.join(f'bit{bit}={format_formula(atom)}' for bit, atom in enumerate(fsm.atoms)) or '-'}",
             f"# initial: {fsm.initial} {fsm.labels[fsm.initial].token}",
             "# state letter next label"]
    for state, row in enumerate(fsm.transitions):
        for letter, target in enumerate(row):
            lines.append(f"{state} {letter:0{width}b} {target} {fsm.labels[target].token}")
    return "\n".join(lines)


class Ltl4Submonitor:
    """One instance of the shared FSM, reading the slice of one value vector"""

    __slots__ = ("fsm", "vector", "ground_atoms", "state", "events_seen")

    def __init__(self, fsm, vector=(), variables=()):
        self.fsm = fsm
        self.vector = tuple(vector)
        mapping = dict(zip(variables, self.vector))
        self.ground_atoms = tuple(substitute(atom, mapping) for atom in fsm.atoms)
        self.state = fsm.initial
        self.events_seen = 0

    @property
    def verdict(self):
        return self.fsm.labels[self.state]

    @property
    def is_permanent(self):
        return self.fsm.is_trap(self.state)

    def step(self, event):
        if not self.fsm.is_trap(self.state):
            letter = self.fsm.letter_of(event.holds, self.ground_atoms)
            self.state = self.fsm.transitions[self.state][letter]
        self.events_seen += 1
        return self.verdict

    def process(self, events):
        for event in events:
            self.step(event)
        return self.verdict

    def __repr__(self):
        return f"Ltl4Submonitor(vector={self.vector}, state={self.state}, verdict={self.verdict.token})"


def monitor_step(submonitor, event):
    """Advance a submonitor by one event and return its verdict"""
    return submonitor.step(event)
