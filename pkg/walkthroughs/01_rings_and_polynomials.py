"""Exact polynomials, a presented hypersurface ring, and fiber ideals.

Run: python walkthroughs/01_rings_and_polynomials.py
"""

from lndkit import RingPresentation, fiber_ring, ideal_membership, parse_element, rational_roots
from lndkit.frontend.parser import parse_poly
from lndkit.poly import UniPoly

names = ("x", "y", "z", "t")
relation = parse_poly("x^2*y + x + z^2 + t^3", names)
A = RingPresentation(names, relation)
print("ring:", A.variables, "relation:", relation.format(names))

# Elements are stored as normal forms, so the relation itself is zero.
print("relation as an element:", parse_element("x^2*y + x + z^2 + t^3", A))
a = parse_element("x*y + 1", A)
print("(x*y + 1)^2 =", a * a)

# Rational roots of a univariate polynomial, with multiplicity.
q = UniPoly([0, 0, -1, 0, 1])  # T^4 - T^2
roots, residual = rational_roots(q)
print("roots of", q.format(), "->", [(str(r), m) for r, m in roots], "residual", residual.format())

# The fiber x = 1: y becomes -1 - z^2 - t^3 modulo (x - 1, relation).
I = fiber_ring(A, A("x"), 1)
ok, cofactors = ideal_membership(parse_poly("y + 1 + z^2 + t^3", names), I)
print("y + 1 + z^2 + t^3 in (x - 1, r):", ok)
print("cofactors:", [c.format(names) for c in cofactors])
