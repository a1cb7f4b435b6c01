"""Saturating a derivation family to remove a degenerate fiber.

z*d/dx + d/dy and d/dy become dependent on z = 0, yet their k(z)-span
contains d/dx and d/dy, which are independent everywhere.

Run: python walkthroughs/06_improve_basis.py
"""

from lndkit import (
    DerivationSystem,
    compute_preslices,
    coordinatize_global,
    improve_basis,
    load_bundled,
    parse_element,
    verify_module_basis,
)

sc = load_bundled("slide-plane")
A = sc.ring
sys, _ = compute_preslices(DerivationSystem.build([D for _, D in sc.derivations], sc.kernel), sc.seed_bound)
print("q's:", [ps.q.format() for ps in sys.preslices])

B = improve_basis(sys)
print("improved basis:", [str(E) for E in B.basis])
print("Hermite form of phi:", [[v.format() for v in row] for row in B.phi])
verdict = verify_module_basis(B, sys, sc.seed_bound)
print("checks pass:", verdict.ok)
print("degenerate before:", [str(a) for a in verdict.degenerate_before], "after:", [str(a) for a in verdict.degenerate_after])

esys = DerivationSystem.build(B.basis, sys.f, require_ufd=False)
esys, _ = compute_preslices(esys, sc.seed_bound)
chart = coordinatize_global(esys, [parse_element("x^2 + y*z", A)])
for a, expr in chart.expressions.items():
    print(f"{a} = {chart.format(expr)} in {chart.target_variables}")
