"""
Data-parallel evaluation pipeline.
Each batch runs four phases in order: sort and compact the trace into slices,
spawn monitors for new value vectors, distribute slices to leaf monitors and
reduce the quantifier levels bottom-up.
"""

import heapq
import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field

from ltl4c.config import DEFAULT_CHUNK_SIZE, Settings
from ltl4c.ingesters import iter_batches
from ltl4c.monitor import synthesize_monitor
from ltl4c.quantifiers import MonitorTree
from ltl4c.report import build_report
from ltl4c.trace import extract_valuation, vector_sort_key

logger = logging.getLogger('ltl4c.pipeline')

PHASES = ("sort", "spawn", "distribute", "reduce")


class ParallelController:
    """Maps tasks over workers; results come back in argument order"""

    def __init__(self, workers=1):
        self.workers = workers

    def setup(self):
        pass

    def map(self, task, args):
        raise NotImplementedError("Subclasses must implement map()")

    def teardown(self):
        pass


class SerialController(ParallelController):
    def map(self, task, args):
        return [task(arg) for arg in args]


class ThreadController(ParallelController):
    """Fixed-size thread pool"""

    def __init__(self, workers):
        super().__init__(workers)
        self.executor = None

    def setup(self):
        if self.executor is None:
            self.executor = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="ltl4c")

    def map(self, task, args):
        args = list(args)
        if len(args) <= 1:
            return [task(arg) for arg in args]
        self.setup()
        return list(self.executor.map(task, args))

    def teardown(self):
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None


def make_controller(threads):
    return SerialController() if threads <= 1 else ThreadController(threads)


@dataclass
class PipelineStats:
    """Counters and per-phase wall time collected across batches"""
    workers: int = 1
    batches: int = 0
    events: int = 0
    routed_events: int = 0
    vectors: int = 0
    leaves: int = 0
    nodes: int = 0
    phase_seconds: dict = field(default_factory=lambda: {phase: 0.0 for phase in PHASES})

    def as_dict(self):
        """Stable dict shape for reports"""
        return {
            "workers": self.workers,
            "batches": self.batches,
            "events": self.events,
            "routed_events": self.routed_events,
            "vectors": self.vectors,
            "leaves": self.leaves,
            "nodes": self.nodes,
            "phase_seconds": {phase: round(self.phase_seconds[phase], 6) for phase in PHASES},
        }


def sort_trace(events, keys, controller=None, numeric_keys=frozenset(), chunk_size=DEFAULT_CHUNK_SIZE):
    """
    Map events to value vectors, sort by (vector, index) and compact into
    slices: vector -> increasing event indices. Events without a full
    valuation are dropped.
    """
    controller = controller or SerialController()
    events = list(events)
    chunks = [events[start:start + chunk_size] for start in range(0, len(events), chunk_size)]

    def map_chunk(chunk):
        mapped = []
        for event in chunk:
            vector = extract_valuation(event, keys)
            if vector is not None:
                mapped.append((vector_sort_key(vector, keys, numeric_keys), event.index, vector))
        mapped.sort(key=_order)
        return mapped

    runs = controller.map(map_chunk, chunks)
    slices = {}
    for vector, group in itertools.groupby(heapq.merge(*runs, key=_order), key=lambda item: item[2]):
        slices.setdefault(vector, []).extend(index for _, index, _ in group)
    return slices


def _order(item):
    return item[0], item[1]


def spawn_monitors(state, slices):
    """Create leaves for unseen vectors in parallel, then commit them to the tree in slice order"""
    tree = state.tree
    fresh = [vector for vector in slices if vector not in tree.vectors]
    leaves = state.controller.map(tree.create_leaf, fresh)
    for vector, leaf in zip(fresh, leaves):
        tree.insert_vector(vector, leaf)
    if fresh:
        logger.debug(f"Spawned {len(fresh)} monitors, {len(tree.vectors)} total")
    return len(fresh)


def distribute(state, events, slices):
    """Replay each leaf's slice in index order; one leaf per task"""
    events = list(events)
    if not events:
        return 0
    base = events[0].index
    if events[-1].index - base == len(events) - 1:
        lookup = events
    else:
        lookup = {event.index - base: event for event in events}
    leaves = state.tree.leaves

    def replay(item):
        vector, indices = item
        leaves[vector].process(lookup[index - base] for index in indices)
        return len(indices)

    return sum(state.controller.map(replay, list(slices.items())))


def apply_quantifiers(state):
    """Reduce depths n-1..0 and record the root verdict"""
    state.last_verdict = state.tree.reduce_all(state.controller)
    return state.last_verdict


class PipelineState:
    """Tree, monitor and counters that persist across batches"""

    def __init__(self, prop, settings=None, fsm=None):
        self.prop = prop
        self.settings = settings or Settings()
        self.fsm = fsm or synthesize_monitor(
            prop.inner,
            state_cap=self.settings.state_cap,
            max_atoms=self.settings.max_atoms,
            minimize=self.settings.minimize,
        )
        self.keys = prop.keys
        self.tree = MonitorTree(prop, self.fsm, prune=self.settings.prune)
        self.controller = make_controller(self.settings.threads)
        self.stats = PipelineStats(workers=self.settings.threads)
        self.phase_log = []
        self.next_index = 0
        self.last_verdict = self.tree.verdict

    @contextmanager
    def _phase(self, name):
        batch = self.stats.batches
        self.phase_log.append((batch, name, "begin"))
        started = time.perf_counter()
        try:
            yield
        finally:
            self.stats.phase_seconds[name] += time.perf_counter() - started
            self.phase_log.append((batch, name, "end"))

    def process_batch(self, events):
        """Run the four phases over one batch and return the root verdict"""
        events = list(events)
        if events and events[0].index < self.next_index:
            raise ValueError(f"batch starts at index {events[0].index}, expected >= {self.next_index}")
        previous = self.last_verdict

        with self._phase("sort"):
            slices = sort_trace(events, self.keys, self.controller,
                                self.settings.numeric_keys, self.settings.chunk_size)
        with self._phase("spawn"):
            spawn_monitors(self, slices)
        with self._phase("distribute"):
            routed = distribute(self, events, slices)
        with self._phase("reduce"):
            verdict = apply_quantifiers(self)

        self.stats.batches += 1
        self.stats.events += len(events)
        self.stats.routed_events += routed
        self.stats.vectors = len(self.tree.vectors)
        self.stats.leaves = len(self.tree.leaves)
        self.stats.nodes = len(self.tree.nodes)
        if events:
            self.next_index = events[-1].index + 1
        if verdict != previous:
            logger.info(f"Verdict changed {previous.token} -> {verdict.token} after {self.stats.events} events")
        logger.info(f"Batch {self.stats.batches}: {len(events)} events, {len(slices)} slices, {routed} routed")
        return verdict

    def close(self):
        self.controller.teardown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def run_offline(prop, trace, settings=None, fsm=None):
    """Evaluate a whole trace as one batch; returns (verdict, RunReport)"""
    started = time.perf_counter()
    with PipelineState(prop, settings, fsm) as state:
        verdict = state.process_batch(trace)
    report = build_report(state, time.perf_counter() - started)
    logger.info(f"Offline verdict {verdict.token} over {state.stats.events} events")
    return verdict, report


def run_online(prop, events, settings=None, state=None, latency_ms=None):
    """
    Fold the pipeline over batches of an event stream, yielding the verdict
    after each batch. Pass a PipelineState to inspect it afterwards.
    """
    settings = settings or (state.settings if state is not None else Settings())
    owned = state is None
    if owned:
        state = PipelineState(prop, settings)
    try:
        for batch in iter_batches(events, settings.batch_size, latency_ms):
            yield state.process_batch(batch)
    finally:
        if owned:
            state.close()
