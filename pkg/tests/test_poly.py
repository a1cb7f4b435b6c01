from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero, polys
from lndkit.frontend.parser import parse_poly
from lndkit.poly import (
    ArityMismatch,
    Poly,
    UniPoly,
    divide_by,
    exact_divide,
    grevlex_key,
    jacobian_rank,
    monomials_up_to,
    poly_arith,
    rational_roots,
    univ_gcd,
)

XY = ("x", "y")
T = sympy.Symbol("T")


def P(src, names=XY):
    return parse_poly(src, names)


def U(*coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def to_sympy(p, names):
    syms = sympy.symbols(names)
    return sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
        for e, c in p.terms.items()
    ])


def uni_to_sympy(q):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * T ** k for k, c in enumerate(q.coeffs)])


# -- examples ---------------------------------------------------------------


def test_arith_examples():
    assert poly_arith(P("x + y"), P("x - y"), "mul") == P("x^2 - y^2")
    p = P("3/2*x*y - 7")
    assert poly_arith(p, Poly(2), "add") == p
    assert poly_arith(P("x^2*y + x"), P("x^2*y + x"), "sub").is_zero()


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        poly_arith(Poly.var(2, 0), Poly.var(3, 0), "add")


def test_exact_divide_examples():
    assert exact_divide(P("x^2*y + x"), P("x")) == P("x*y + 1")
    assert exact_divide(P("x^4"), P("x^2")) == P("x^2")
    assert exact_divide(P("x + 1"), P("x")) is None
    with pytest.raises(ZeroDivisionError):
        exact_divide(P("x"), Poly(2))


def test_rational_roots_examples():
    roots, residual = rational_roots(U(0, 0, -1))
    assert roots == [(0, 2)] and residual.is_constant()
    roots, _ = rational_roots(U(-1, 0, 1))
    assert roots == [(-1, 1), (1, 1)]
    roots, residual = rational_roots(U(1, 0, 1))
    assert roots == [] and residual == U(1, 0, 1)
    with pytest.raises(ValueError):
        rational_roots(UniPoly())


def test_gcd_examples():
    assert univ_gcd(U(-1, 0, 1), U(-1, 1)) == U(-1, 1)
    assert univ_gcd(U(0, 0, 0, 1), U(0, 0, 1)) == U(0, 0, 1)
    assert univ_gcd(U(1, 0, 1), U(-1, 1)) == U(1)
    with pytest.raises(ValueError):
        univ_gcd(UniPoly(), UniPoly())


def test_jacobian_rank_examples():
    assert jacobian_rank([P("x"), P("y")], [1, 1]) == 2
    assert jacobian_rank([P("x^2"), P("x^3")], [1, 0]) == 1
    for pt in ([0, 0], [3, -2], [Fraction(1, 2), 5]):
        assert jacobian_rank([P("x + y"), P("x - y")], pt) == 2


def test_grevlex_order_and_printing():
    names = ("x", "y", "z", "t")
    monos = monomials_up_to(4, 3)
    assert sorted(monos, key=grevlex_key) == sorted(monos, key=sympy.polys.orderings.grevlex)
    p = parse_poly("x^2*y + x + z^2 + t^3", names)
    assert p.format(names) == "x^2*y + t^3 + z^2 + x"
    assert P("3/2*x - 1").format(XY) == "3/2*x - 1"
    assert Poly(2).format(XY) == "0"
    monos = monomials_up_to(3, 3)
    assert monos == sorted(monos, key=grevlex_key) and len(monos) == 20


def test_division_with_remainder():
    names = ("x", "y", "z")
    f = parse_poly("x^3*y - 2*x*z + y^2 - 1", names)
    g = [parse_poly("x*y - z", names), parse_poly("y^2 - x", names)]
    qs, r = divide_by(f, g)
    assert sum((q * d for q, d in zip(qs, g)), r) == f
    for e in r.terms:
        assert not any(all(a >= b for a, b in zip(e, d.leading_monomial())) for d in g)


def test_univariate_division():
    a, b = U(1, 2, 3, 4), U(-1, 1)
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree() < b.degree()
    assert U(-1, 0, 1).exact_quotient(U(-1, 1)) == U(1, 1)
    assert U(1, 0, 1).exact_quotient(U(-1, 1)) is None
    assert U(1, 2, 1)(Fraction(-1)) == 0


# -- properties ---------------------------------------------------------------


@given(polys(3), polys(3), polys(3))
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Poly(3)
    assert a * Poly.const(3, 1) == a


@given(polys(3), polys(3))
def test_product_matches_sympy(a, b):
    names = ("x", "y", "z")
    assert sympy.expand(to_sympy(a * b, names) - to_sympy(a, names) * to_sympy(b, names)) == 0


@given(polys(3), nonzero(polys(3)))
def test_exact_divide_recovers_factor(a, d):
    assert exact_divide(a * d, d) == a


@given(st.lists(st.tuples(st.fractions(-4, 4, max_denominator=3), st.integers(1, 3)), max_size=3),
       st.lists(st.integers(-6, 6), min_size=1, max_size=4))
def test_root_multiplicities(factors, extra):
    q = UniPoly([Fraction(v) for v in extra]) if any(extra) else U(1)
    for alpha, m in factors:
        q = q * U(-alpha, 1) ** m
    roots, residual = rational_roots(q)
    for alpha, m in roots:
        lin = U(-alpha, 1)
        assert q.exact_quotient(lin ** m) is not None
        assert q.exact_quotient(lin ** (m + 1)) is None
    got = {a for a, _ in roots}
    oracle = {r for r in sympy.roots(uni_to_sympy(q), T, filter="Q")} if q.degree() > 0 else set()
    assert got == {Fraction(int(r.p), int(r.q)) for r in oracle}
    assert residual.degree() + sum(m for _, m in roots) == q.degree()


@given(st.lists(st.integers(-5, 5), max_size=5), st.lists(st.integers(-5, 5), max_size=5))
def test_gcd_divides_and_monic(ca, cb):
    a, b = UniPoly([Fraction(c) for c in ca]), UniPoly([Fraction(c) for c in cb])
    if a.is_zero() and b.is_zero():
        return
    g = univ_gcd(a, b)
    assert g.leading_coefficient() == 1
    assert a.exact_quotient(g) is not None and b.exact_quotient(g) is not None
    oracle = sympy.Poly(sympy.gcd(uni_to_sympy(a), uni_to_sympy(b)), T).monic()
    assert [Fraction(int(c.p), int(c.q)) for c in reversed(oracle.all_coeffs())] == list(g.coeffs)


@given(polys(2), st.lists(st.fractions(-3, 3, max_denominator=2), min_size=2, max_size=2))
def test_substitute_and_evaluate_agree(p, pt):
    images = [Poly.const(2, pt[0]), Poly.const(2, pt[1])]
    assert p.substitute(images).constant_value() == p.evaluate(pt)


@given(polys(3))
def test_print_parse_round_trip(p):
    names = ("x", "y", "z")
    assert parse_poly(p.format(names), names) == p
