"""
Command implementations behind main.py.
Every command returns a process exit code: 0 when the verdict is on the true
side, 1 when it is on the false side and 2 for usage, parse or input errors.
"""

import functools
import logging
import sys
import time

from tqdm import tqdm

from ltl4c.config import load_settings
from ltl4c.errors import Ltl4cError
from ltl4c.generators import generate_lines, get_shape
from ltl4c.ingesters import JsonLinesIngester, get_ingester, read_trace
from ltl4c.monitor import dump_monitor, synthesize_monitor
from ltl4c.pipeline import PipelineState, run_offline, run_online
from ltl4c.report import (
    build_report,
    format_report_human,
    format_report_json,
    format_row,
    format_summary,
    format_verdict_line,
)
from ltl4c.syntax import load_property

logger = logging.getLogger('ltl4c.commands')

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2

# argparse destination -> Settings field
_FLAG_SETTINGS = {
    "threads": "threads",
    "batch_size": "batch_size",
    "batch_latency_ms": "batch_latency_ms",
    "format": "output_format",
    "on_malformed": "on_malformed",
    "seed": "seed",
    "numeric_keys": "numeric_keys",
    "minimize": "minimize",
}


def exit_code(verdict):
    return EXIT_TRUE if verdict.is_true_side else EXIT_FALSE


def resolve_settings(args):
    """Settings from flags, environment and config file"""
    overrides = {field: getattr(args, flag, None) for flag, field in _FLAG_SETTINGS.items()}
    return load_settings(config_file=getattr(args, "config", None), **overrides)


def guarded(command):
    """Turn library errors into a diagnostic on stderr and exit code 2"""
    @functools.wraps(command)
    def wrapper(args, *streams, **kwargs):
        try:
            return command(args, *streams, **kwargs)
        except (Ltl4cError, OSError, ValueError) as e:
            logger.error(f"{command.__name__} failed: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_ERROR
    return wrapper


@guarded
def cmd_check(args, out=None):
    """Check a trace file offline"""
    out = out or sys.stdout
    settings = resolve_settings(args)
    prop = load_property(args.property)
    trace = read_trace(args.trace, getattr(args, "trace_format", None) or "jsonl", settings.on_malformed)
    verdict, report = run_offline(prop, trace, settings)
    if settings.output_format == "json-lines":
        print(format_report_json(report), file=out)
    else:
        print(format_report_human(report), file=out)
    return exit_code(verdict)


@guarded
def cmd_stream(args, stdin=None, out=None):
    """Read records from stdin and print the evolving verdict after every batch"""
    stdin = stdin or getattr(sys.stdin, "buffer", sys.stdin)
    out = out or sys.stdout
    settings = resolve_settings(args)
    prop = load_property(args.property)
    ingester = get_ingester(getattr(args, "trace_format", None) or "jsonl", settings.on_malformed)
    started = time.perf_counter()

    with PipelineState(prop, settings) as state:
        print(format_verdict_line(state.last_verdict, 0, 0, settings.output_format), file=out, flush=True)
        stream = run_online(prop, ingester.iter_events(stdin), settings, state=state,
                            latency_ms=settings.batch_latency_ms)
        for verdict in stream:
            print(format_verdict_line(verdict, state.stats.batches, state.stats.events, settings.output_format),
                  file=out, flush=True)
        report = build_report(state, time.perf_counter() - started)

    if ingester.skipped:
        logger.warning(f"Skipped {ingester.skipped} malformed records")
    print(format_summary(report, settings.output_format), file=out, flush=True)
    return exit_code(report.verdict)


@guarded
def cmd_explain(args, out=None):
    """Dump the synthesized monitor and the tree after an optional trace"""
    out = out or sys.stdout
    settings = resolve_settings(args)
    prop = load_property(args.property)
    fsm = synthesize_monitor(prop.inner, settings.state_cap, settings.max_atoms, settings.minimize)
    trace = []
    if getattr(args, "trace", None):
        trace = read_trace(args.trace, getattr(args, "trace_format", None) or "jsonl", settings.on_malformed)
    verdict, report = run_offline(prop, trace, settings, fsm=fsm)

    print("== monitor ==", file=out)
    print(dump_monitor(fsm), file=out)
    print("== tree ==", file=out)
    for row in report.nodes:
        print(format_row(row), file=out)
    return exit_code(verdict)


@guarded
def cmd_gen(args, out=None):
    """Write a synthetic trace to stdout"""
    out = out or sys.stdout
    seed = args.seed if args.seed is not None else resolve_settings(args).seed
    for line in generate_lines(args.shape, args.size, args.cardinality, seed):
        out.write(line + "\n")
    return EXIT_TRUE


def parse_thread_list(text):
    try:
        threads = [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ValueError(f"bad thread list {text!r}") from None
    if not threads or min(threads) < 1:
        raise ValueError(f"bad thread list {text!r}")
    return threads


@guarded
def cmd_bench(args, out=None):
    """Time offline checks of one generated trace at several thread counts"""
    out = out or sys.stdout
    settings = resolve_settings(args)
    shape = get_shape(args.shape)
    prop = load_property(args.property or shape.property_path)
    threads = parse_thread_list(args.thread_list)

    lines = generate_lines(shape.name, args.size, args.cardinality, settings.seed)
    trace = JsonLinesIngester().ingest(lines)
    fsm = synthesize_monitor(prop.inner, settings.state_cap, settings.max_atoms, settings.minimize)

    rows = []
    for count in tqdm(threads, desc="bench", file=sys.stderr, disable=len(threads) < 2):
        started = time.perf_counter()
        verdict, report = run_offline(prop, trace, settings.with_overrides(threads=count), fsm=fsm)
        elapsed = time.perf_counter() - started
        rate = len(trace) / elapsed if elapsed > 0 else float("inf")
        rows.append((count, len(trace), elapsed, rate, verdict))
        logger.info(f"{count} threads: {elapsed:.3f}s, {rate:.0f} events/s")

    print(f"{'threads':>8} {'events':>10} {'elapsed_s':>10} {'events_per_s':>14} verdict", file=out)
    for count, events, elapsed, rate, verdict in rows:
        print(f"{count:>8} {events:>10} {elapsed:>10.3f} {rate:>14.0f} {verdict.token}", file=out)
    return EXIT_TRUE
