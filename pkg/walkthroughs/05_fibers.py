"""Degenerate fibers, dependency certificates, and the cross-check.

Run: python walkthroughs/05_fibers.py
"""

from lndkit import (
    DerivationSystem,
    bla_crosscheck,
    compute_preslices,
    degenerate_fibers,
    dependency_certificate,
    load_bundled,
    parse_element,
    verify_certificate,
)

sc = load_bundled("makar-limanov")
A = sc.ring
sys, _ = compute_preslices(DerivationSystem.build([D for _, D in sc.derivations], sc.kernel), sc.seed_bound)

report = degenerate_fibers(sys)
print("degenerate fibers:", {str(a): [i + 1 for i in idx] for a, idx in report.degenerate.items()})

cert = dependency_certificate(sys, 0, 2)
print("searched certificate at x = 0:", [str(c) for c in cert.coefficients], "verified:", cert.verified)
given = verify_certificate(sys, 0, [parse_element("3*t^2", A), parse_element("-2*z", A)])
print("certificate (3*t^2, -2*z) verified:", given.verified)

for row in bla_crosscheck(sys, [-2, -1, 0, 1, 2], 2):
    print(f"alpha = {row.alpha}: {row.status}")
