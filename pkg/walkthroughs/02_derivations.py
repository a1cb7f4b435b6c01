"""Derivations of a hypersurface ring: well-definedness, nilpotency, rank, kernel.

Run: python walkthroughs/02_derivations.py
"""

from lndkit import (
    DerivationSystem,
    commutator,
    independence_rank,
    is_locally_nilpotent,
    load_bundled,
    parse_derivation,
    verify_kernel_generator,
)
from lndkit.errors import NotWellDefined

sc = load_bundled("makar-limanov")
A = sc.ring
D1 = parse_derivation("2*z*d/dy - x^2*d/dz", A)
D2 = parse_derivation("3*t^2*d/dy - x^2*d/dt", A)
print("D1 =", D1)
print("D2 =", D2)

# A plain partial derivative does not respect the relation.
try:
    parse_derivation("d/dx", A)
except NotWellDefined as exc:
    print("d/dx rejected, witness:", exc.witness)

print("[D1, D2] =", commutator(D1, D2))
cert = is_locally_nilpotent(D1)
print("D1 nilpotency indices:", cert.indices)

w = independence_rank([D1, D2])
print("rank", w.rank, "from the minor", w.minor, "on columns", w.columns)

v = verify_kernel_generator([D1, D2], A("x"), 3)
print("kernel generated by x up to degree 3:", v.status)

sys = DerivationSystem.build([D1, D2], A("x"))
print("validated system with n =", sys.n)
