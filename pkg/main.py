"""
ltl4c command-line entry point.
Checks traces against LTL properties with counting quantifiers, offline or as a stream.
"""

import argparse
import logging
import sys

from ltl4c.commands import cmd_bench, cmd_check, cmd_explain, cmd_gen, cmd_stream
from ltl4c.config import FORMATS, MALFORMED_POLICIES
from ltl4c.generators import get_all_shapes


# Configure logging
def setup_logging(verbose=0):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )
    return logging.getLogger('ltl4c')


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="count", default=0, help="-v for info, -vv for debug output")
    common.add_argument("--config", type=str, help="Settings file in .env format")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--format", choices=FORMATS, help="Output format")
    common.add_argument("--on-malformed", choices=MALFORMED_POLICIES, help="Skip or abort on malformed records")
    common.add_argument("--numeric-keys", type=str, help="Comma-separated keys whose values sort numerically")
    common.add_argument("--minimize", action="store_true", default=None, help="Minimize the synthesized monitor")
    common.add_argument("--seed", type=int, help="Random seed for generated traces")
    common.add_argument("--trace-format", choices=("jsonl", "strace"), default="jsonl", help="Trace record format")

    parser = argparse.ArgumentParser(description="Runtime verification of LTL properties with counting quantifiers")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="Check a trace file offline")
    check.add_argument("property", help="Property file")
    check.add_argument("trace", help="Trace file")
    check.set_defaults(handler=cmd_check)

    stream = commands.add_parser("stream", parents=[common], help="Check records read from stdin")
    stream.add_argument("property", help="Property file")
    stream.add_argument("--batch-size", type=int, help="Maximum events per batch")
    stream.add_argument("--batch-latency-ms", type=int, help="Maximum wait before a partial batch is evaluated")
    stream.set_defaults(handler=cmd_stream)

    explain = commands.add_parser("explain", parents=[common], help="Dump the monitor and the quantifier tree")
    explain.add_argument("property", help="Property file")
    explain.add_argument("trace", nargs="?", help="Trace file")
    explain.set_defaults(handler=cmd_explain)

    shapes = [shape.name for shape in get_all_shapes()]
    gen = commands.add_parser("gen", parents=[common], help="Write a synthetic trace to stdout")
    gen.add_argument("--shape", choices=shapes, default="socket", help="Trace shape")
    gen.add_argument("--size", type=int, default=16384, help="Number of events")
    gen.add_argument("--cardinality", type=int, default=100, help="Number of distinct objects")
    gen.set_defaults(handler=cmd_gen)

    bench = commands.add_parser("bench", parents=[common], help="Time offline checks at several thread counts")
    bench.add_argument("property", nargs="?", help="Property file (default: the shape's property)")
    bench.add_argument("--shape", choices=shapes, default="socket", help="Trace shape")
    bench.add_argument("--size", type=int, default=1 << 20, help="Number of events")
    bench.add_argument("--cardinality", type=int, default=100, help="Number of distinct objects")
    bench.add_argument("--thread-list", type=str, default="1,2,4,8", help="Comma-separated thread counts")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv=None):
    """Parse arguments and run one command; returns the exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Setup logging
    logger = setup_logging(args.verbose)
    logger.debug(f"Running {args.command}")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
