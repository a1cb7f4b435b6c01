"""Pre-slices, minimal image polynomials, and polynomial coordinate charts.

For a commuting system ``D_1..D_n`` with joint kernel ``k[f]``, a
pre-slice for index ``i`` is an element ``p`` killed by every ``D_j``
(``j != i``) with ``D_i(p) = q(f)`` a nonzero polynomial in ``f``.  The
possible ``q`` form an ideal of ``k[f]``; its generator decides which
fibers ``f = alpha`` are degenerate and, when it is constant, gives
honest slices and a global chart ``A = k[s_1..s_n, f]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .derivation import apply, joint_kernel_basis
from .errors import (
    AlreadyInKernel,
    CapExceeded,
    ChartFailed,
    DegenerateFiber,
    InvariantViolation,
    NoSeedFound,
    NonConstantQ,
    NotExpressible,
    NotInJointKernel,
    SolveInFFailed,
    ValidationError,
)
from .poly import Poly, UniPoly, jacobian_rank, rational_roots
from .ring import express_in, fiber_ring

DEFAULT_SEED_BOUND = 4
DEFAULT_SOLVE_BOUND = 16


@dataclass(frozen=True)
class PreSlice:
    index: int
    p: object
    q: UniPoly
    seed: object = None
    step: int | None = None
    # None: q is constant, so minimal outright; otherwise minimal only within this seed bound
    minimal_within: int | None = None

    def describe_minimality(self):
        if self.q.is_constant():
            return "minimal (constant)"
        if self.minimal_within is None:
            return "not minimized"
        return f"minimal within search bound {self.minimal_within}"


def solve_in_f(b, f, degree_bound=DEFAULT_SOLVE_BOUND):
    """The univariate ``g`` with ``g(f) = b`` in the ring, or :class:`NotExpressible`."""
    g = express_in(b, [f], degree_bound)
    if g is None:
        raise NotExpressible(f"{b} is not a polynomial in {f} of degree <= {degree_bound}")
    deg = g.total_degree()
    coeffs = [g.coefficient((k,)) for k in range(deg + 1)] if deg >= 0 else []
    return UniPoly(coeffs)


def eval_in_ring(q, f):
    """``q(f)`` as a ring element."""
    acc = f.ring.zero
    for c in reversed(q.coeffs):
        acc = acc * f + c
    return acc


def _check_preslice(sys, ps):
    for j, D in enumerate(sys.derivations):
        img = apply(D, ps.p)
        if j == ps.index:
            if img != eval_in_ring(ps.q, sys.f) or ps.q.is_zero():
                raise InvariantViolation(f"pre-slice {ps.p}: D{j + 1}(p) = {img} differs from q(f)")
        elif not img.is_zero():
            raise InvariantViolation(f"pre-slice {ps.p}: D{j + 1}(p) = {img} is nonzero")


def preslice_from(sys, i, a, solve_bound=DEFAULT_SOLVE_BOUND):
    """Walk ``a`` down the ``D_i``-chain to ``D_i^(m-2)(a)``, with ``m`` minimal such that ``D_i^m(a) = 0``."""
    R = sys.ring
    a = R(a)
    for j, D in enumerate(sys.derivations):
        if j != i and not apply(D, a).is_zero():
            raise NotInJointKernel(f"D{j + 1}({a}) is nonzero; seed must be killed by D_j for j != {i + 1}")
    D = sys.derivations[i]
    chain = [a]
    while not chain[-1].is_zero():
        if len(chain) > sys.cap:
            raise CapExceeded(f"D{i + 1} did not kill {a} within {sys.cap} steps", cap=sys.cap)
        chain.append(apply(D, chain[-1]))
    m = len(chain) - 1
    if m < 2:
        raise AlreadyInKernel(f"D{i + 1}({a}) = 0; the seed lies in the joint kernel")
    p = chain[m - 2]
    try:
        q = solve_in_f(chain[m - 1], sys.f, solve_bound)
    except NotExpressible as exc:
        raise SolveInFFailed(
            f"D{i + 1}({p}) = {chain[m - 1]} is not a polynomial in f; inconsistent kernel generator?"
        ) from exc
    ps = PreSlice(i, p, q, seed=a, step=m)
    _check_preslice(sys, ps)
    return ps


def search_preslices(sys, i, degree_bound=DEFAULT_SEED_BOUND, solve_bound=DEFAULT_SOLVE_BOUND):
    """Pre-slices from every seed of degree <= bound killed by the other derivations.

    Seeds are the nullspace basis of the linear conditions over standard
    monomials, in ascending grevlex order of their leading monomials.
    """
    others = [D for j, D in enumerate(sys.derivations) if j != i]
    seeds = joint_kernel_basis(others, degree_bound, ring=sys.ring)
    D = sys.derivations[i]
    out = []
    for a in seeds:
        if apply(D, a).is_zero():
            continue
        out.append(preslice_from(sys, i, a, solve_bound))
    if not out:
        raise NoSeedFound(f"no seed of degree <= {degree_bound} outside the kernel of D{i + 1}")
    return out


def minimize_q(sys, i, candidates, bound=None):
    """Euclid on the image polynomials, carrying the pre-slices along.

    Each division step replaces ``p~`` by ``p~ - h(f) p``, which is again a
    pre-slice with image ``q~ - h q``.  The result has the gcd of all
    candidate images, normalized monic.
    """
    if not candidates:
        raise ValueError("need at least one candidate pre-slice")
    f = sys.f
    best_p, best_q = candidates[0].p, candidates[0].q
    for cand in candidates[1:]:
        pa, qa = best_p, best_q
        pb, qb = cand.p, cand.q
        while not qb.is_zero():
            h, r = divmod(qa, qb)
            pa, qa, pb, qb = pb, qb, pa - eval_in_ring(h, f) * pb, r
        best_p, best_q = pa, qa
    lc = best_q.leading_coefficient()
    best_p = best_p / lc
    best_q = best_q.monic()
    for cand in candidates:
        if cand.q.exact_quotient(best_q) is None:
            raise InvariantViolation(f"minimized q = {best_q.format()} does not divide {cand.q.format()}")
    first = candidates[0]
    ps = PreSlice(
        i, best_p, best_q,
        seed=first.seed if len(candidates) == 1 else None,
        step=first.step if len(candidates) == 1 else None,
        minimal_within=None if best_q.is_constant() else bound,
    )
    _check_preslice(sys, ps)
    return ps


def compute_preslices(sys, degree_bound=DEFAULT_SEED_BOUND, solve_bound=DEFAULT_SOLVE_BOUND):
    """Searched and minimized pre-slices for every index; returns ``(system, families)``."""
    families = []
    chosen = []
    for i in range(sys.n):
        cands = search_preslices(sys, i, degree_bound, solve_bound)
        families.append(cands)
        chosen.append(minimize_q(sys, i, cands, bound=degree_bound))
    return sys.with_preslices(chosen), families


def declared_preslices(sys, elements, solve_bound=DEFAULT_SOLVE_BOUND):
    """Pre-slices given explicitly (e.g. from a scenario), checked and monic-normalized."""
    if len(elements) != sys.n:
        raise ValidationError(f"need {sys.n} declared pre-slices, got {len(elements)}")
    out = []
    for i, p in enumerate(elements):
        p = sys.ring(p)
        try:
            q = solve_in_f(apply(sys.derivations[i], p), sys.f, solve_bound)
            ps = PreSlice(i, p, q)
            if q.is_zero():
                raise InvariantViolation(f"D{i + 1}({p}) = 0")
            _check_preslice(sys, ps)
        except (NotExpressible, InvariantViolation) as exc:
            raise ValidationError(f"declared pre-slice {p} for D{i + 1} is invalid: {exc}") from None
        lc = q.leading_coefficient()
        out.append(PreSlice(i, p / lc, q.monic()))
    return sys.with_preslices(out)


# -- charts -------------------------------------------------------------------


@dataclass
class SliceSystem:
    slices: list
    scope: str  # "global" or "fiber"
    alpha: Fraction | None = None


@dataclass
class CoordinateChart:
    """Expressions of queried elements as polynomials in slice (and ``f``) variables.

    ``ring`` is where round trips are checked: ``A`` itself for a global
    chart, the fiber quotient ``A/(f - alpha)`` otherwise.
    """

    target_variables: tuple
    slices: SliceSystem
    f: object
    ring: object
    expressions: dict = field(default_factory=dict)

    def back_substitute(self, expr):
        images = [self.ring(s) for s in self.slices.slices]
        if self.slices.scope == "global":
            images.append(self.ring(self.f))
        return self.ring.element(expr.substitute([im.poly for im in images]))

    def format(self, expr):
        return expr.format(self.target_variables)

    def verify(self):
        for a, expr in self.expressions.items():
            if self.back_substitute(expr) != self.ring(a):
                return False
        return True


def _dixmier(D, s, b, cap):
    """Projection of ``b`` onto ``ker D`` along the slice ``s``."""
    acc = b.ring.zero
    cur = b
    spow = b.ring.one
    k = 0
    while not cur.is_zero():
        if k > cap:
            raise CapExceeded("derivation failed to kill an element during projection", cap=cap)
        term = cur * spow * Fraction((-1) ** k, factorial(k))
        acc = acc + term
        cur = apply(D, cur)
        spow = spow * s
        k += 1
    return acc


def taylor_coefficients(derivations, slices, a, finish, order=None, cap=64):
    """``{beta: finish(c_beta)}`` with ``a = sum c_beta s^beta`` and ``c_beta`` in the joint kernel.

    ``order`` is the sequence of indices to expand along (default 0..n-1).
    """
    n = len(derivations)
    order = list(range(n)) if order is None else list(order)

    def expand(b, pos):
        if pos == n:
            return {(): finish(b)}
        i = order[pos]
        D, s = derivations[i], slices[i]
        out = {}
        cur = b
        j = 0
        while not cur.is_zero():
            if j > cap:
                raise CapExceeded("Taylor expansion did not terminate", cap=cap)
            coeff = _dixmier(D, s, cur, cap) * Fraction(1, factorial(j))
            if not coeff.is_zero():
                for beta, c in expand(coeff, pos + 1).items():
                    out[(j,) + beta] = c
            cur = apply(D, cur)
            j += 1
        return out

    raw = expand(a, 0)
    result = {}
    for beta, c in raw.items():
        full = [0] * n
        for pos, i in enumerate(order):
            full[i] = beta[pos]
        result[tuple(full)] = c
    return result


def _chart_poly(coeffs, n, with_f):
    terms = {}
    for beta, c in coeffs.items():
        if with_f:
            for k, v in enumerate(c.coeffs):
                if v:
                    terms[beta + (k,)] = terms.get(beta + (k,), 0) + v
        elif c:
            terms[beta] = terms.get(beta, 0) + c
    return Poly(n + (1 if with_f else 0), terms)


def slice_variable_names(n, with_f=True):
    names = tuple(f"S{i + 1}" for i in range(n))
    return names + ("F",) if with_f else names


def coordinatize_global(sys, queries, order=None, solve_bound=DEFAULT_SOLVE_BOUND):
    """Chart ``A = k[s_1..s_n, f]`` from constant-``q`` pre-slices."""
    if sys.preslices is None:
        raise ValueError("system has no pre-slices; run compute_preslices first")
    bad = [ps.index + 1 for ps in sys.preslices if not ps.q.is_constant()]
    if bad:
        raise NonConstantQ(
            f"q_i is non-constant for i in {bad}; no slices available, so no global chart"
        )
    slices = [ps.p / ps.q.coeffs[0] for ps in sys.preslices]
    chart = CoordinateChart(slice_variable_names(sys.n), SliceSystem(slices, "global"), sys.f, sys.ring)

    def finish(b):
        try:
            return solve_in_f(b, sys.f, solve_bound)
        except NotExpressible as exc:
            raise SolveInFFailed(f"projected coefficient {b} is not in k[f]") from exc

    for a in queries:
        a = sys.ring(a)
        coeffs = taylor_coefficients(sys.derivations, slices, a, finish, order, sys.cap)
        expr = _chart_poly(coeffs, sys.n, True)
        if chart.back_substitute(expr) != a:
            raise InvariantViolation(f"global chart for {a} fails back-substitution")
        chart.expressions[a] = expr
    return chart


def fiber_quotient(sys, alpha):
    return fiber_ring(sys.ring, sys.f, alpha).quotient()


def coordinatize_fiber(sys, alpha, queries, order=None):
    """Chart ``A/(f - alpha) = k[s_1..s_n]`` from pre-slices with ``q_i(alpha) != 0``."""
    if sys.preslices is None:
        raise ValueError("system has no pre-slices; run compute_preslices first")
    alpha = Fraction(alpha)
    bad = [ps.index for ps in sys.preslices if ps.q(alpha) == 0]
    if bad:
        raise DegenerateFiber(
            f"q_i({alpha}) = 0 for i in {[i + 1 for i in bad]}", alpha=alpha, indices=bad,
        )
    Q = fiber_quotient(sys, alpha)
    derivs = [D.over(Q) for D in sys.derivations]
    slices = [Q.element(ps.p.poly) / ps.q(alpha) for ps in sys.preslices]
    chart = CoordinateChart(
        slice_variable_names(sys.n, with_f=False), SliceSystem(slices, "fiber", alpha), sys.f, Q,
    )

    def finish(b):
        if not b.is_constant():
            raise ChartFailed(f"projected coefficient {b} is not constant on the fiber")
        return b.constant_value()

    for query in queries:
        query = sys.ring(query)
        a = Q(query)
        coeffs = taylor_coefficients(derivs, slices, a, finish, order, sys.cap)
        expr = _chart_poly(coeffs, sys.n, False)
        if chart.back_substitute(expr) != a:
            raise InvariantViolation(f"fiber chart for {a} fails back-substitution")
        chart.expressions[query] = expr
    return chart


# -- algebraic independence evidence ------------------------------------------


def variety_points(R, count, rng=None, box=7):
    """Random rational points on ``relation = 0`` (any points when there is no relation)."""
    rng = rng or random.Random(0)
    rel = getattr(R, "relation", None)
    pts = []
    if rel is None:
        while len(pts) < count:
            pts.append([Fraction(rng.randint(-box, box)) for _ in range(R.nvars)])
        return pts
    linear = [j for j in range(R.nvars) if rel.degree_in(j) == 1]
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise RuntimeError("could not find rational points on the variety")
        pt = [Fraction(rng.randint(-box, box)) for _ in range(R.nvars)]
        if linear:
            j = linear[0]
            coeff = rel.diff(j)
            pt[j] = Fraction(0)
            a = coeff.evaluate(pt)
            if a == 0:
                continue
            pt[j] = -rel.evaluate(pt) / a
        else:
            j = R.nvars - 1
            uni = {}
            for e, c in rel.terms.items():
                v = c
                for k, (x, p) in enumerate(zip(pt, e)):
                    if k != j and p:
                        v *= x ** p
                uni[e[j]] = uni.get(e[j], 0) + v
            q = UniPoly([uni.get(k, 0) for k in range(max(uni) + 1)])
            if q.is_zero() or q.degree() < 1:
                continue
            roots, _ = rational_roots(q)
            if not roots:
                continue
            pt[j] = roots[0][0]
        if rel.evaluate(pt) != 0:
            raise InvariantViolation("constructed point is not on the variety")
        pts.append(pt)
    return pts


def independence_evidence(sys, count=8, seed=0, box=100):
    """Jacobian ranks of the lifts ``(p_1..p_n, f)`` at random points of the variety.

    Coordinates are drawn from ``[-box, box]``; the rank legitimately drops
    on special loci such as degenerate fibers, so the box is kept wide.

    Each entry is ``(point, rank, rank_with_relation)``; the second rank
    appends the relation's gradient and should reach ``n + 2`` at smooth
    points where the elements are independent on the variety.
    """
    rng = random.Random(seed)
    elems = [ps.p.poly for ps in sys.preslices] + [sys.f.poly]
    rel = getattr(sys.ring, "relation", None)
    out = []
    for pt in variety_points(sys.ring, count, rng, box):
        r1 = jacobian_rank(elems, pt)
        r2 = jacobian_rank(elems + [rel], pt) if rel is not None else r1
        out.append((pt, r1, r2))
    return out
