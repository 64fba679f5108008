"""
Runtime verification of LTL properties with counting quantifiers over finite traces.
"""

from ltl4c.syntax import Property, parse_property, pretty_print
from ltl4c.verdicts import Verdict4, Verdict6
from ltl4c.pipeline import run_offline, run_online

__all__ = [
    "Property",
    "parse_property",
    "pretty_print",
    "Verdict4",
    "Verdict6",
    "run_offline",
    "run_online",
]
