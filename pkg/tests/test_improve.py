from hypothesis import given
from hypothesis import strategies as st

from lndkit.derivation import Derivation, DerivationSystem
from lndkit.frontend.parser import parse_derivation
from lndkit.improve import hermite_form, improve_basis, phi_image, uni_det, uni_matmul, verify_module_basis
from lndkit.poly import UniPoly, rational_roots
from lndkit.slices import PreSlice


def U(*c):
    return UniPoly(c)


def fmt(M):
    return [[v.format() for v in row] for row in M]


def test_phi_image_examples(ml_sys, slide_sys):
    R = ml_sys.ring
    ps = [PreSlice(0, R("z"), U(1)), PreSlice(1, R("t"), U(1))]
    assert phi_image(ml_sys.derivations[0], ps, ml_sys.f) == [U(0, 0, -1), U()]
    assert phi_image(ml_sys.derivations[1], ps, ml_sys.f) == [U(), U(0, 0, -1)]
    S = slide_sys.ring
    ps = [PreSlice(0, S("x"), U(1)), PreSlice(1, S("y"), U(1))]
    # z*d/dx + d/dy sends x to z and y to 1
    assert phi_image(slide_sys.derivations[0], ps, slide_sys.f) == [U(0, 1), U(1)]


def test_improve_slide_plane(slide_full):
    sys, _ = slide_full
    B = improve_basis(sys)
    assert [str(E) for E in B.basis] == ["d/dx", "d/dy"]
    assert fmt(B.phi) == [["1", "-1"], ["0", "T"]]
    assert fmt(B.change) == [["T", "1"], ["0", "1"]]
    assert [(s.alpha, s.coefficients) for s in B.steps] == [(0, [-1, 1])]
    v = verify_module_basis(B, sys, 3)
    assert v.ok and v.degenerate_before == [0] and v.degenerate_after == []
    # det(phi_E) divides det(phi_D) and the quotient vanishes exactly at the saturated alphas
    phi_D = [phi_image(D, sys.preslices, sys.f) for D in sys.derivations]
    quotient = uni_det(phi_D).exact_quotient(uni_det(B.phi))
    assert quotient is not None
    assert {a for a, _ in rational_roots(quotient)[0]} == {s.alpha for s in B.steps}


def test_improve_makar_limanov_unchanged(ml_full):
    sys, _ = ml_full
    B = improve_basis(sys)
    assert B.basis == list(sys.derivations) and B.steps == []
    assert fmt(B.phi) == [["T^2", "0"], ["0", "T^2"]]
    v = verify_module_basis(B, sys)
    assert v.ok and v.degenerate_before == v.degenerate_after == [0]


def test_already_saturated_is_returned(slide_improved):
    _, esys = slide_improved
    B = improve_basis(esys)
    assert B.basis == list(esys.derivations) and B.steps == []


def test_improve_is_deterministic(slide_full):
    sys, _ = slide_full
    a, b = improve_basis(sys), improve_basis(sys)
    assert a.basis == b.basis and a.phi == b.phi and a.change == b.change


def test_corrupted_basis_fails_span_check(ml_full):
    sys, _ = ml_full
    B = improve_basis(sys)
    x = sys.ring("x")
    B.basis = [B.basis[0] * x, B.basis[1]]
    B.phi = [phi_image(E, B.preslices, sys.f) for E in B.basis]
    v = verify_module_basis(B, sys)
    assert not v.ok
    assert "k[f]-span" in dict(v.failures)


def test_corrupted_basis_reports_every_failure(slide_full):
    sys, _ = slide_full
    B = improve_basis(sys)
    R = sys.ring
    B.basis = [Derivation(R, [R("x"), R.zero, R.zero]), B.basis[1]]
    v = verify_module_basis(B, sys, 3)
    names = {n for n, _ in v.failures}
    assert {"locally-nilpotent", "phi-matrix"} <= names


uni = st.lists(st.integers(-4, 4), max_size=3).map(lambda c: UniPoly(c))


def is_hermite(H):
    n = len(H)
    for i in range(n):
        for j in range(i):
            if not H[i][j].is_zero():
                return False
        piv = H[i][i]
        if piv.is_zero() or piv.leading_coefficient() != 1:
            return False
        for k in range(i):
            if not H[k][i].is_zero() and H[k][i].degree() >= piv.degree():
                return False
    return True


@given(uni, uni, uni, uni, uni)
def test_hermite_form_properties(a, b, c, d, h):
    M = [[a, b], [c, d]]
    if uni_det(M).is_zero():
        return
    H, U_ = hermite_form(M)
    assert uni_matmul(U_, M) == H
    assert uni_det(U_).is_constant() and not uni_det(U_).is_zero()
    assert is_hermite(H)
    # unique: any unimodular change of rows gives the same normal form
    V = [[UniPoly((1,)), h], [UniPoly(), UniPoly((-1,))]]
    assert hermite_form(uni_matmul(V, M))[0] == H


def test_phi_rows_of_commuting_partials():
    import conftest

    R = conftest.ring(("x", "y", "z"))
    sys = DerivationSystem.build([parse_derivation("d/dx", R), parse_derivation("d/dy", R)], R("z"))
    ps = [PreSlice(0, R("x"), U(1)), PreSlice(1, R("y"), U(1))]
    assert [phi_image(D, ps, sys.f) for D in sys.derivations] == [[U(1), U()], [U(), U(1)]]
