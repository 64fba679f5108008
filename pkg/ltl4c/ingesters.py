"""
Trace ingesters for the ltl4c monitor.
Includes the JSON-lines record reader, a best-effort strace adapter and online batching.
"""

import json
import logging
import queue
import re
import threading
import time

from ltl4c.config import DEFAULT_ON_MALFORMED, MALFORMED_POLICIES
from ltl4c.errors import ConfigError, MalformedRecord
from ltl4c.trace import Event, Trace

# Setup logging
logger = logging.getLogger('ltl4c.ingest')


class TraceIngester:
    """Base class for trace ingesters"""

    def __init__(self, name, description, on_malformed=DEFAULT_ON_MALFORMED):
        if on_malformed not in MALFORMED_POLICIES:
            raise ConfigError(f"on-malformed policy must be one of {MALFORMED_POLICIES}, got {on_malformed!r}")
        self.name = name
        self.description = description
        self.on_malformed = on_malformed
        self.skipped = 0
        self.logger = logging.getLogger(f'ltl4c.ingest.{name}')

    def parse_line(self, line, line_number):
        """Turn one record into (bindings, flags) or raise MalformedRecord"""
        raise NotImplementedError("Subclasses must implement parse_line()")

    def iter_events(self, lines, start_index=0):
        """Yield events in arrival order; lines may be bytes or text, blank lines are not records"""
        index = start_index
        for line_number, line in enumerate(lines, 1):
            try:
                line = _decode(line, line_number)
                if not line.strip():
                    continue
                parsed = self.parse_line(line, line_number)
            except MalformedRecord as e:
                if self.on_malformed == "abort":
                    raise
                self.skipped += 1
                self.logger.warning(f"Skipping malformed record: {e}")
                continue
            # None marks a line that carries no record
            if parsed is None:
                continue
            bindings, flags = parsed
            yield Event(index, bindings, frozenset(flags))
            index += 1

    def ingest(self, lines):
        trace = Trace(self.iter_events(lines))
        self.logger.info(f"Ingested {len(trace)} events ({self.skipped} skipped)")
        return trace


def _decode(line, line_number):
    if isinstance(line, str):
        return line
    try:
        return line.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedRecord(f"invalid UTF-8 at byte {e.start}", line_number) from None


class JsonLinesIngester(TraceIngester):
    """One JSON object per line: scalars and arrays bind, true values are flags"""

    def __init__(self, on_malformed=DEFAULT_ON_MALFORMED):
        super().__init__(
            name="jsonl",
            description="Newline-delimited JSON objects",
            on_malformed=on_malformed,
        )

    def parse_line(self, line, line_number):
        try:
            # Numbers keep their source text so "12" and 12 bind the same value
            record = json.loads(line, parse_int=str, parse_float=str, parse_constant=str)
        except json.JSONDecodeError as e:
            raise MalformedRecord(f"invalid JSON: {e.msg}", line_number) from None
        if not isinstance(record, dict):
            raise MalformedRecord("expected a JSON object", line_number)

        bindings, flags = {}, set()
        for key, value in record.items():
            if value is True:
                flags.add(key)
            elif value is False:
                continue
            elif isinstance(value, str):
                bindings[key] = value
            elif isinstance(value, list) and all(isinstance(item, str) for item in value):
                bindings[key] = tuple(value)
            else:
                raise MalformedRecord(f"unsupported value for key {key!r}", line_number)
        return bindings, flags


# name(args) = ret, optionally prefixed by a pid
_STRACE_LINE = re.compile(r"^(?:\[pid\s+\d+\]\s+|\d+\s+)?(?P<name>\w+)\((?P<args>.*)\)\s*=\s*(?P<ret>-?\d+|\?)")

_SYSCALL_FLAGS = {
    "recv": "receive", "recvfrom": "receive", "recvmsg": "receive", "read": "receive",
    "send": "respond", "sendto": "respond", "sendmsg": "respond", "write": "respond",
    "close": "close",
}
_FD_RETURNING = ("accept", "accept4", "socket")
# exit and signal notices, and the halves of interrupted calls
_STRACE_NOISE = re.compile(r"^(?:\[pid\s+\d+\]\s+|\d+\s+)?(?:\+\+\+ |--- |<\.\.\. )|<unfinished \.\.\.>\s*$")


class StraceIngester(TraceIngester):
    """Best-effort strace adapter: the file descriptor becomes the socket binding"""

    def __init__(self, on_malformed=DEFAULT_ON_MALFORMED):
        super().__init__(
            name="strace",
            description="strace output lines (syscall name, fd argument, return value)",
            on_malformed=on_malformed,
        )

    def parse_line(self, line, line_number):
        line = line.strip()
        if _STRACE_NOISE.search(line):
            return None
        match = _STRACE_LINE.match(line)
        if not match:
            raise MalformedRecord("not an strace syscall line", line_number)
        name, ret = match.group("name"), match.group("ret")
        first_arg = match.group("args").split(",", 1)[0].strip()

        if name in _FD_RETURNING:
            if not ret.isdigit():
                raise MalformedRecord(f"{name} returned no descriptor", line_number)
            return {"socket": ret, "open": ret}, set()
        if not first_arg.isdigit():
            return {}, {name}
        predicate = _SYSCALL_FLAGS.get(name, name)
        return {"socket": first_arg, predicate: first_arg}, set()


def get_all_ingesters(on_malformed=DEFAULT_ON_MALFORMED):
    """Get all available trace ingesters"""
    return [JsonLinesIngester(on_malformed), StraceIngester(on_malformed)]


def get_ingester(name, on_malformed=DEFAULT_ON_MALFORMED):
    for ingester in get_all_ingesters(on_malformed):
        if ingester.name == name:
            return ingester
    raise ConfigError(f"unknown trace format {name!r}")


def ingest(lines, on_malformed=DEFAULT_ON_MALFORMED):
    """Read JSON-lines records into a Trace"""
    return JsonLinesIngester(on_malformed).ingest(lines)


def read_trace(path, trace_format="jsonl", on_malformed=DEFAULT_ON_MALFORMED):
    with open(path, "rb") as f:
        return get_ingester(trace_format, on_malformed).ingest(f)


class _ReaderFailure:
    def __init__(self, error):
        self.error = error


def _chunked(events, batch_size):
    batch = []
    for event in events:
        batch.append(event)
        if len(batch) >= batch_size:
            yield batch
            batch = []
    if batch:
        yield batch


def iter_batches(events, batch_size, latency_ms=None):
    """
    Group an event iterator into batches of at most batch_size events.

    With a latency bound, a partial batch is released once its first event has
    waited latency_ms; events are then pulled by a reader thread.
    """
    if latency_ms is None:
        yield from _chunked(events, batch_size)
        return

    pending = queue.Queue(maxsize=4 * batch_size)
    done = object()

    def reader():
        try:
            for event in events:
                pending.put(event)
        except BaseException as e:
            pending.put(_ReaderFailure(e))
        finally:
            pending.put(done)

    threading.Thread(target=reader, name="ltl4c-reader", daemon=True).start()
    timeout = latency_ms / 1000.0
    batch, deadline = [], None
    while True:
        try:
            if batch:
                item = pending.get(timeout=max(0.0, deadline - time.monotonic()))
            else:
                item = pending.get()
        except queue.Empty:
            logger.debug(f"Latency bound reached with {len(batch)} events")
            yield batch
            batch = []
            continue
        if item is done:
            break
        if isinstance(item, _ReaderFailure):
            if batch:
                yield batch
            raise item.error
        batch.append(item)
        if len(batch) == 1:
            deadline = time.monotonic() + timeout
        if len(batch) >= batch_size:
            yield batch
            batch = []
    if batch:
        yield batch
