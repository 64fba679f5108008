"""
Run reports and textual dumps of the monitor tree.
"""

import json
from dataclasses import dataclass, field

from ltl4c.syntax import pretty_print

SCHEMA_VERSION = 1


@dataclass
class NodeRow:
    path: tuple
    quantifier: str
    counts: dict
    verdict: object
    latched: bool

    def as_dict(self):
        return {
            "path": [list(value) if isinstance(value, tuple) else value for value in self.path],
            "quantifier": self.quantifier,
            "counts": self.counts,
            "verdict": self.verdict.token,
            "latched": self.latched,
        }


@dataclass
class RunReport:
    """Outcome of one run: verdict, per-node table and run statistics"""
    verdict: object
    property_text: str
    nodes: list = field(default_factory=list)
    events: int = 0
    elapsed: float = 0.0
    peak_workers: int = 1
    stats: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "report",
            "verdict": self.verdict.token,
            "property": self.property_text,
            "events": self.events,
            "elapsed_seconds": round(self.elapsed, 6),
            "peak_workers": self.peak_workers,
            "nodes": [row.as_dict() for row in self.nodes],
            "stats": self.stats,
        }


def node_rows(tree):
    """Table rows in path order; a quantifier-free tree reports its single leaf"""
    if tree.root is None:
        leaf = tree.leaves[()]
        return [NodeRow((), "ltl4", {}, leaf.verdict.to_verdict6(), leaf.is_permanent)]
    return [
        NodeRow(node.path, node.quant.describe(), node.v.as_dict(), node.b, node.latched)
        for node in tree.iter_nodes()
    ]


def build_report(state, elapsed):
    return RunReport(
        verdict=state.tree.verdict,
        property_text=pretty_print(state.prop),
        nodes=node_rows(state.tree),
        events=state.stats.events,
        elapsed=elapsed,
        peak_workers=state.stats.workers,
        stats=state.stats.as_dict(),
    )


def format_path(path):
    return "<" + ",".join("(" + ",".join(value) + ")" if isinstance(value, tuple) else value
                          for value in path) + ">"


def format_row(row):
    counts = " ".join(f"{token}={count}" for token, count in row.counts.items()) or "-"
    latch = " latched" if row.latched else ""
    return f"{format_path(row.path)} {row.quantifier} [{counts}] {row.verdict.token}{latch}"


def format_report_human(report):
    lines = [
        f"Verdict: {report.verdict.token} ({report.verdict.symbol})",
        f"Property: {report.property_text}",
        f"Events: {report.events}  Elapsed: {report.elapsed:.3f}s  Workers: {report.peak_workers}",
        "Nodes:",
    ]
    lines.extend(f"  {format_row(row)}" for row in report.nodes)
    return "\n".join(lines)


def format_report_json(report):
    return json.dumps(report.as_dict(), ensure_ascii=False)


def format_verdict_line(verdict, batch, events, output_format):
    """One streaming verdict, after `batch` batches and `events` events"""
    if output_format == "json-lines":
        return json.dumps({"schema_version": SCHEMA_VERSION, "type": "verdict", "batch": batch,
                           "events": events, "verdict": verdict.token})
    return f"{verdict.token} batch={batch} events={events}"


def format_summary(report, output_format):
    if output_format == "json-lines":
        data = report.as_dict()
        data["type"] = "summary"
        return json.dumps(data, ensure_ascii=False)
    return "Summary\n" + format_report_human(report)
