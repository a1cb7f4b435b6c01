"""Pre-slices, minimal image polynomials, and coordinate charts.

Run: python walkthroughs/04_preslices_and_charts.py
"""

from lndkit import DerivationSystem, compute_preslices, coordinatize_fiber, coordinatize_global, load_bundled
from lndkit.errors import NonConstantQ

sc = load_bundled("makar-limanov")
A = sc.ring
sys = DerivationSystem.build([D for _, D in sc.derivations], sc.kernel)
sys, families = compute_preslices(sys, sc.seed_bound)

for ps, family in zip(sys.preslices, families):
    print(f"D{ps.index + 1}: {len(family)} candidates, chosen p = {ps.p}, q = {ps.q.format()}",
          f"({ps.describe_minimality()})")

# Away from x = 0 the fiber is an affine plane in the pre-slices.
chart = coordinatize_fiber(sys, 1, [A("y"), A("z"), A("t")])
for a, expr in chart.expressions.items():
    print(f"on x = 1: {a} = {chart.format(expr)}")
print("back-substitution holds:", chart.verify())

# The q's are not constant, so there is no global chart here.
try:
    coordinatize_global(sys, [A("y")])
except NonConstantQ as exc:
    print("global chart refused:", exc)
