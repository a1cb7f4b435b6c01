"""Scenario files, reports, and the command line.

Run: python walkthroughs/07_scenarios_and_cli.py
"""

from lndkit import load_scenario, run_scenario
from lndkit.frontend.cli import main

text = """
name = tiny-plane
ring { vars = [x, y] }
derivation D = "d/dy"
kernel = "x"
preslices = ["y"]
run validate
run fibers
run coordinatize queries="x*y^2"
"""
report = run_scenario(load_scenario(text))
print(report.to_text())
print("exit code:", report.exit_code())

# The same through the command line; a non-UFD scenario is rejected with exit code 1.
print("lndkit run danielewski-note ->", main(["run", "danielewski-note"]))
