"""
Events, traces and valuation extraction.
An event is a set of interpreted predicates: key/value bindings plus 0-arity flags.
"""

import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation


@dataclass(frozen=True)
class Event:
    """One trace position. Binding values are strings, or tuples of strings for list values."""
    index: int
    bindings: dict = field(default_factory=dict)
    flags: frozenset = frozenset()

    def holds(self, atom):
        """Whether a ground predicate is true in this event"""
        if not atom.args:
            return atom.name in self.flags
        value = self.bindings.get(atom.name)
        if value is None:
            return False
        if len(atom.args) == 1:
            return value == atom.args[0]
        return value == tuple(atom.args)

    def to_record(self):
        record = {key: list(value) if isinstance(value, tuple) else value
                  for key, value in self.bindings.items()}
        for flag in sorted(self.flags):
            record[flag] = True
        return record


def serialize_event(event):
    """Render an event as one JSON line accepted by the JSON-lines ingester"""
    return json.dumps(event.to_record(), ensure_ascii=False)


class Trace:
    """Ordered events with contiguous indices 0..n-1"""

    def __init__(self, events=()):
        self.events = []
        for event in events:
            self.append(event)

    def append(self, event):
        if event.index != len(self.events):
            raise ValueError(f"event index {event.index} does not follow {len(self.events) - 1}")
        self.events.append(event)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, position):
        return self.events[position]

    def __repr__(self):
        return f"Trace({len(self.events)} events)"


def make_event(index, bindings=None, flags=()):
    """Build an event, normalizing binding values to strings"""
    normalized = {key: normalize_value(value) for key, value in (bindings or {}).items()}
    return Event(index, normalized, frozenset(flags))


def normalize_value(value):
    if isinstance(value, (list, tuple)):
        return tuple(normalize_value(item) for item in value)
    return value if isinstance(value, str) else str(value)


def extract_valuation(event, keys):
    """Value vector of an event for the guard keys, or None unless every key is bound"""
    values = []
    for key in keys:
        value = event.bindings.get(key)
        if value is None:
            return None
        values.append(value)
    return tuple(values)


def collect_vectors(trace, keys):
    """Set of all value vectors found in the trace"""
    vectors = set()
    for event in trace:
        vector = extract_valuation(event, keys)
        if vector is not None:
            vectors.add(vector)
    return vectors


def slice_trace(trace, keys):
    """Sequential slicing: vector -> increasing list of event indices"""
    slices = {}
    for event in trace:
        vector = extract_valuation(event, keys)
        if vector is not None:
            slices.setdefault(vector, []).append(event.index)
    return slices


def _encode_component(value, numeric):
    if isinstance(value, tuple):
        return (2, "", value)
    if numeric:
        try:
            number = Decimal(value)
        except InvalidOperation:
            number = None
        if number is not None and number.is_finite():
            return (0, number, value)
    return (1, value, ())


def vector_sort_key(vector, keys, numeric_keys=frozenset()):
    """Total order on value vectors; components of numeric keys compare by number"""
    return tuple(_encode_component(value, key in numeric_keys) for value, key in zip(vector, keys))
