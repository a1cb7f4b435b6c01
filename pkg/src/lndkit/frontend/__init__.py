"""Parsing, scenario files, reports and the command line."""

from .parser import parse_derivation, parse_element, parse_poly, parse_rational
from .report import Entry, Report
from .runner import run_scenario
from .scenario import Command, Scenario, bundled_names, load_bundled, load_path_or_bundled, load_scenario

__all__ = [
    "Command", "Entry", "Report", "Scenario", "bundled_names", "load_bundled", "load_path_or_bundled",
    "load_scenario", "parse_derivation", "parse_element", "parse_poly", "parse_rational", "run_scenario",
]
