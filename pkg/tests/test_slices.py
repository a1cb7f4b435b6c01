import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_element
from lndkit.derivation import apply
from lndkit.errors import DegenerateFiber, NoSeedFound, NonConstantQ, NotExpressible
from lndkit.frontend.parser import parse_element
from lndkit.poly import UniPoly
from lndkit.slices import (
    PreSlice,
    coordinatize_fiber,
    coordinatize_global,
    eval_in_ring,
    independence_evidence,
    minimize_q,
    preslice_from,
    search_preslices,
    solve_in_f,
)


def U(*c):
    return UniPoly(c)


def test_preslice_from_examples(ml_sys, slide_sys, plane_sys):
    ps = preslice_from(ml_sys, 0, ml_sys.ring("z"))
    assert ps.p == ml_sys.ring("z") and ps.q == U(0, 0, -1) and ps.step == 2
    ps = preslice_from(slide_sys, 0, slide_sys.ring("x"))
    assert ps.p == slide_sys.ring("x") and ps.q == U(0, 1)
    ps = preslice_from(plane_sys, 0, plane_sys.ring("y"))
    assert ps.p == plane_sys.ring("y") and ps.q == U(1)


def test_preslice_walks_down_the_chain(ml_sys):
    # D1^3(z^2) = 0 with D1^2(z^2) = 2*x^4, so p = D1(z^2) = -2*x^2*z
    ps = preslice_from(ml_sys, 0, parse_element("z^2", ml_sys.ring))
    assert ps.p == parse_element("-2*x^2*z", ml_sys.ring) and ps.q == U(0, 0, 0, 0, 2) and ps.step == 3


def test_search_preslices_examples(ml_sys, slide_sys):
    found = search_preslices(ml_sys, 1, 1)
    assert [(str(p.seed), str(p.p), p.q) for p in found] == [("t", "t", U(0, 0, -1))]
    # y is not killed by z*d/dx + d/dy, so no degree-1 seed exists for the second index
    with pytest.raises(NoSeedFound):
        search_preslices(slide_sys, 1, 1)
    found = search_preslices(slide_sys, 1, 2)
    assert found[0].p == parse_element("y*z - x", slide_sys.ring) and found[0].q == U(0, 1)
    with pytest.raises(NoSeedFound):
        search_preslices(ml_sys, 0, 0)


def test_minimize_q_examples(ml_sys, plane_sys):
    R = plane_sys.ring
    cands = [preslice_from(plane_sys, 0, parse_element("x*y", R)), preslice_from(plane_sys, 0, R("y"))]
    assert cands[0].q == U(0, 1)
    best = minimize_q(plane_sys, 0, cands)
    assert best.q == U(1) and best.p == R("y") and best.describe_minimality() == "minimal (constant)"
    best = minimize_q(ml_sys, 0, search_preslices(ml_sys, 0, 2), bound=2)
    assert best.q == U(0, 0, 1) and best.p == parse_element("-z", ml_sys.ring)
    assert best.describe_minimality() == "minimal within search bound 2"
    single = preslice_from(ml_sys, 1, ml_sys.ring("t"))
    best = minimize_q(ml_sys, 1, [single], bound=4)
    assert best.q == U(0, 0, 1) and best.p == parse_element("-t", ml_sys.ring) and best.seed == single.seed


def test_solve_in_f_examples(ml):
    x = ml("x")
    assert solve_in_f(x * x, x) == U(0, 0, 1)
    assert solve_in_f(x * x + x, x) == U(0, 1, 1)
    with pytest.raises(NotExpressible):
        solve_in_f(ml("z"), x)


def test_coordinatize_global_examples(ml_full, slide_improved, plane_sys):
    _, esys = slide_improved
    chart = coordinatize_global(esys, [parse_element("x^2 + y*z", esys.ring)])
    assert [chart.format(e) for e in chart.expressions.values()] == ["S1^2 + S2*F"]
    assert chart.target_variables == ("S1", "S2", "F")
    from lndkit.slices import declared_preslices

    psys = declared_preslices(plane_sys, [plane_sys.ring("y")])
    chart = coordinatize_global(psys, [parse_element("x*y^2", plane_sys.ring)])
    assert chart.format(next(iter(chart.expressions.values()))) == "S1^2*F"
    with pytest.raises(NonConstantQ):
        coordinatize_global(ml_full[0], [ml_full[0].ring("y")])


def test_coordinatize_fiber_examples(ml_full, plane_sys):
    sys, _ = ml_full
    chart = coordinatize_fiber(sys, 1, [sys.ring("y")])
    assert [str(s) for s in chart.slices.slices] == ["-z", "-t"]
    assert chart.format(chart.expressions[sys.ring("y")]) == "S2^3 - S1^2 - 1"
    assert chart.verify()
    with pytest.raises(DegenerateFiber) as exc:
        coordinatize_fiber(sys, 0, [sys.ring("y")])
    assert exc.value.indices == (0, 1)
    from lndkit.slices import declared_preslices

    psys = declared_preslices(plane_sys, [plane_sys.ring("y")])
    for alpha in (-2, 0, 5):
        chart = coordinatize_fiber(psys, alpha, [parse_element("y^3", plane_sys.ring)])
        assert chart.format(next(iter(chart.expressions.values()))) == "S1^3"


def test_every_searched_preslice_satisfies_its_equations(ml_full, slide_full):
    for sys, families in (ml_full, slide_full):
        for fam in families:
            for ps in fam:
                for j, D in enumerate(sys.derivations):
                    img = apply(D, ps.p)
                    if j == ps.index:
                        assert img == eval_in_ring(ps.q, sys.f) and not ps.q.is_zero()
                    else:
                        assert img.is_zero()


def test_minimized_q_divides_family(ml_full, slide_full):
    for sys, families in (ml_full, slide_full):
        for ps, fam in zip(sys.preslices, families):
            assert ps.q.leading_coefficient() == 1
            for cand in fam:
                assert cand.q.exact_quotient(ps.q) is not None


def test_independence_evidence(ml_full, slide_full):
    for sys, _ in (ml_full, slide_full):
        rows = independence_evidence(sys, count=8, seed=1)
        assert len(rows) == 8
        assert all(r1 == sys.n + 1 for _, r1, _ in rows)


def test_fiber_charts_have_n_variables(ml_full):
    sys, _ = ml_full
    sizes = {len(coordinatize_fiber(sys, a, [sys.ring("y")]).target_variables) for a in (1, -1, 2, -3)}
    assert sizes == {2}


@given(st.integers(0, 10_000), st.sampled_from([1, -1, 2]))
def test_fiber_chart_round_trip(seed, alpha):
    import conftest
    from lndkit.derivation import DerivationSystem
    from lndkit.frontend.parser import parse_derivation
    from lndkit.slices import declared_preslices

    R = conftest.ring(conftest.ML_VARS, conftest.ML_RELATION)
    Ds = [parse_derivation("2*z*d/dy - x^2*d/dz", R), parse_derivation("3*t^2*d/dy - x^2*d/dt", R)]
    sys = declared_preslices(DerivationSystem.build(Ds, R("x")), [R("z"), R("t")])
    a = random_element(random.Random(seed), R, max_deg=3)
    chart = coordinatize_fiber(sys, alpha, [a])
    assert chart.verify()
    reverse = coordinatize_fiber(sys, alpha, [a], order=[1, 0])
    assert list(reverse.expressions.values()) == list(chart.expressions.values())


@given(st.integers(0, 10_000))
def test_global_chart_round_trip_and_order(seed):
    import conftest
    from lndkit.derivation import DerivationSystem
    from lndkit.frontend.parser import parse_derivation
    from lndkit.slices import declared_preslices

    R = conftest.ring(("x", "y", "z"))
    sys = DerivationSystem.build([parse_derivation("d/dx", R), parse_derivation("d/dy", R)], R("z"))
    sys = declared_preslices(sys, [R("x"), R("y")])
    a = random_element(random.Random(seed), R, max_deg=3)
    chart = coordinatize_global(sys, [a])
    assert chart.verify()
    assert list(coordinatize_global(sys, [a], order=[1, 0]).expressions.values()) == list(chart.expressions.values())


def test_preslice_dataclass_minimality_text():
    assert PreSlice(0, None, U(0, 1)).describe_minimality() == "not minimized"
    assert PreSlice(0, None, U(0, 1), minimal_within=3).describe_minimality() == "minimal within search bound 3"
