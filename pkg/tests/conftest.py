from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lndkit import DerivationSystem, Poly, RingPresentation, compute_preslices, parse_derivation, parse_element
from lndkit.frontend.parser import parse_poly

settings.register_profile(
    "lndkit", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("lndkit")

ML_VARS = ("x", "y", "z", "t")
ML_RELATION = "x^2*y + x + z^2 + t^3"


def ring(variables, relation=None, **kw):
    rel = None if relation is None else parse_poly(relation, variables)
    return RingPresentation(variables, rel, **kw)


@pytest.fixture(scope="session")
def ml():
    return ring(ML_VARS, ML_RELATION)


@pytest.fixture(scope="session")
def ml_pair(ml):
    return (
        parse_derivation("2*z*d/dy - x^2*d/dz", ml),
        parse_derivation("3*t^2*d/dy - x^2*d/dt", ml),
    )


@pytest.fixture(scope="session")
def ml_sys(ml, ml_pair):
    return DerivationSystem.build(list(ml_pair), parse_element("x", ml))


@pytest.fixture(scope="session")
def ml_full(ml_sys):
    return compute_preslices(ml_sys, 4)


@pytest.fixture(scope="session")
def slide():
    return ring(("x", "y", "z"))


@pytest.fixture(scope="session")
def slide_sys(slide):
    Ds = [parse_derivation("z*d/dx + d/dy", slide), parse_derivation("d/dy", slide)]
    return DerivationSystem.build(Ds, parse_element("z", slide))


@pytest.fixture(scope="session")
def slide_full(slide_sys):
    return compute_preslices(slide_sys, 3)


@pytest.fixture(scope="session")
def plane():
    return ring(("x", "y"))


@pytest.fixture(scope="session")
def plane_sys(plane):
    return DerivationSystem.build([parse_derivation("d/dy", plane)], parse_element("x", plane))


def polys(nvars, max_terms=4, max_deg=3, coeff=5):
    """Hypothesis strategy for small sparse polynomials with rational coefficients."""
    mono = st.tuples(*[st.integers(0, max_deg)] * nvars).filter(lambda e: sum(e) <= max_deg)
    c = st.fractions(-coeff, coeff, max_denominator=3)
    return st.dictionaries(mono, c, max_size=max_terms).map(lambda d: Poly(nvars, d))


def nonzero(strategy):
    return strategy.filter(lambda p: not p.is_zero())


Q = Fraction


NAMES4 = ("x", "y", "z", "w")


def triangular_lnd(rng, nvars, max_deg=2, max_terms=3):
    """Random triangular derivation on Q[x_1..x_n]: D(x_1) constant, D(x_k) in Q[x_1..x_(k-1)]."""
    from lndkit.derivation import Derivation
    from lndkit.poly import monomials_up_to

    R = RingPresentation(NAMES4[:nvars])
    images = []
    for k in range(nvars):
        monos = [m for m in monomials_up_to(nvars, max_deg) if all(e == 0 for e in m[k:])]
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            m = rng.choice(monos)
            terms[m] = terms.get(m, 0) + Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        images.append(R.element(Poly(nvars, terms)))
    if images[0].is_zero():
        images[0] = R.one
    return Derivation(R, images)


def random_element(rng, R, max_deg=2, max_terms=3):
    from lndkit.poly import monomials_up_to

    monos = monomials_up_to(R.nvars, max_deg)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[rng.choice(monos)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return R.element(Poly(R.nvars, terms))


def flow_law_holds(D, cap=64):
    """exp(s D) o exp(u D) == exp((s + u) D) over R[s, u] with fresh s, u."""
    from lndkit.explog import compose, exp_series, fresh_name, lift_derivation, RingAutomorphism

    s = fresh_name("s", D.ring.variables)
    u = fresh_name("u", D.ring.variables + (s,))
    big = D.ring.extend((s, u))
    L = lift_derivation(D, big)
    S, U = big.gen(s), big.gen(u)

    def flow(c):
        Dc = L * c
        return RingAutomorphism(big, [exp_series(Dc, x, cap) for x in big.gens()])

    return compose(flow(S), flow(U)) == flow(S + U)


@pytest.fixture(scope="session")
def slide_improved(slide_full):
    from lndkit.improve import improve_basis

    sys, _ = slide_full
    B = improve_basis(sys)
    esys = DerivationSystem.build(B.basis, sys.f, require_ufd=False)
    esys, _ = compute_preslices(esys, 3)
    return B, esys


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
