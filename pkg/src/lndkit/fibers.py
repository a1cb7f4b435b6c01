"""Degenerate fibers of ``f``: where the derivations become dependent mod ``f - alpha``.

Two independent routes are kept apart on purpose.  ``degenerate_fibers``
reads the answer off the roots of the minimal image polynomials ``q_i``;
``dependency_certificate`` searches directly for a nontrivial relation
``sum c_i D_i = 0`` on the fiber ring by linear algebra.  ``bla_crosscheck``
compares them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .derivation import apply, independence_rank, joint_kernel_basis
from .errors import CapExceeded, ChartFailed, InvariantViolation, NotExpressible
from .linalg import nullspace, solve
from .poly import Poly, grevlex_key, rational_roots
from .ring import express_in
from .slices import coordinatize_fiber, fiber_quotient, taylor_coefficients


@dataclass
class FiberReport:
    degenerate: dict  # alpha -> tuple of 0-based indices i with q_i(alpha) = 0
    residuals: list  # (index, residual UniPoly) with degree > 0: possible non-rational roots

    @property
    def alphas(self):
        return sorted(self.degenerate)


@dataclass
class DependencyCertificate:
    alpha: Fraction
    coefficients: list  # RingElements of the fiber ring
    residue: list  # normal forms of sum_i c_i D_i(x_j), all zero when valid
    degree_bound: int | None = None

    @property
    def verified(self):
        return all(r.is_zero() for r in self.residue) and any(not c.is_zero() for c in self.coefficients)


def degenerate_fibers(sys):
    """Rational roots of every ``q_i``, attributed to their indices."""
    if sys.preslices is None:
        raise ValueError("system has no pre-slices")
    degenerate = {}
    residuals = []
    for ps in sys.preslices:
        roots, residual = rational_roots(ps.q)
        for alpha, _ in roots:
            degenerate.setdefault(alpha, []).append(ps.index)
        if residual.degree() > 0:
            residuals.append((ps.index, residual))
    return FiberReport({a: tuple(v) for a, v in sorted(degenerate.items())}, residuals)


def _fiber_derivations(sys, alpha):
    Q = fiber_quotient(sys, alpha)
    return Q, [D.over(Q) for D in sys.derivations]


def certificate_residue(sys, alpha, coefficients):
    """Normal forms of ``sum_i c_i D_i(x_j)`` on the fiber, one per generator."""
    Q, derivs = _fiber_derivations(sys, alpha)
    coefficients = [Q(c) for c in coefficients]
    out = []
    for j in range(Q.nvars):
        acc = Q.zero
        for c, D in zip(coefficients, derivs):
            acc = acc + c * D.images[j]
        out.append(acc)
    return out


def verify_certificate(sys, alpha, coefficients):
    Q, _ = _fiber_derivations(sys, alpha)
    coefficients = [Q(c) for c in coefficients]
    residue = certificate_residue(sys, alpha, coefficients)
    return DependencyCertificate(Fraction(alpha), coefficients, residue)


def _primitive(vec):
    """Scale a rational vector to coprime integers with positive last nonzero entry."""
    den = lcm(*(v.denominator for v in vec))
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    last = next(v for v in reversed(ints) if v)
    sign = 1 if last > 0 else -1
    return [Fraction(sign * v, g) for v in ints]


def dependency_certificate(sys, alpha, degree_bound=2):
    """Least nontrivial ``(c_1..c_n)`` of degree <= bound with ``sum c_i D_i = 0`` on the fiber.

    Unknowns are ordered by monomial first (grevlex) and then by index
    (lower index counts as larger), and the solution with the smallest
    leading position is returned, scaled to integer content.  ``None``
    when nothing exists within the bound.
    """
    alpha = Fraction(alpha)
    Q, derivs = _fiber_derivations(sys, alpha)
    n = len(derivs)
    monos = Q.standard_monomials(degree_bound)
    columns = sorted(((m, i) for m in monos for i in range(n)), key=lambda c: (grevlex_key(c[0]), -c[1]))
    rows = {}
    entries = []
    for col, (m, i) in enumerate(columns):
        mono = Q.element(Poly.monomial(m))
        for j in range(Q.nvars):
            img = mono * derivs[i].images[j]
            for e, c in img.poly.terms.items():
                key = (j, e)
                rows.setdefault(key, len(rows))
                entries.append((rows[key], col, c))
    matrix = [[Fraction(0)] * len(columns) for _ in rows]
    for r, c, v in entries:
        matrix[r][c] += v
    basis = nullspace(matrix, len(columns))
    if not basis:
        return None
    vec = basis[0]
    support = [k for k, v in enumerate(vec) if v]
    top = support[-1]
    scaled = _primitive([vec[k] for k in support])
    vec = [Fraction(0)] * len(columns)
    for k, v in zip(support, scaled):
        vec[k] = v
    if vec[top] < 0:
        vec = [-v for v in vec]
    coeffs = [Poly.const(Q.nvars, 0) for _ in range(n)]
    for (m, i), v in zip(columns, vec):
        if v:
            coeffs[i] = coeffs[i] + Poly.monomial(m, v)
    cert = verify_certificate(sys, alpha, [Q.element(c) for c in coeffs])
    cert.degree_bound = degree_bound
    if not cert.verified:
        raise InvariantViolation(f"dependency certificate at alpha={alpha} does not verify")
    if not any(ps.q(alpha) == 0 for ps in sys.preslices or ()):
        if sys.preslices is not None:
            raise InvariantViolation(
                f"verified dependency at alpha={alpha} but no q_i vanishes there"
            )
    return cert


@dataclass
class CrosscheckRow:
    alpha: Fraction
    q_indices: tuple  # indices with q_i(alpha) = 0
    certificate: DependencyCertificate | None
    status: str  # "consistent" or "bound-too-small"


def bla_crosscheck(sys, alphas, degree_bound=2):
    """Compare the ``q_i(alpha) = 0`` criterion with direct dependency search at each alpha.

    A certificate where every ``q_i(alpha)`` is nonzero contradicts the
    criterion and raises :class:`InvariantViolation`.
    """
    if sys.preslices is None:
        raise ValueError("system has no pre-slices")
    table = []
    for alpha in alphas:
        alpha = Fraction(alpha)
        q_idx = tuple(ps.index for ps in sys.preslices if ps.q(alpha) == 0)
        try:
            cert = dependency_certificate(sys, alpha, degree_bound)
        except InvariantViolation:
            raise
        if cert is not None and not q_idx:
            raise InvariantViolation(f"dependency found at alpha={alpha} although no q_i vanishes")
        status = "consistent"
        if q_idx and cert is None:
            status = "bound-too-small"
        table.append(CrosscheckRow(alpha, q_idx, cert, status))
    return table


# -- experimental -------------------------------------------------------------


@dataclass
class ProbeReport:
    alpha: Fraction
    degenerate: bool
    found: bool
    chart: dict = field(default_factory=dict)  # generator name -> expression text
    target_variables: tuple = ()
    fiber_slices: list = field(default_factory=list)
    kernel_generators: list = field(default_factory=list)
    note: str = "experimental: bounded search only; no claim about the fiber either way"


def _fiber_slices(sub, Q, degree_bound):
    """Elements ``s_k`` with ``sub[l](s_k) = delta_lk``, or ``None``."""
    monos = Q.standard_monomials(degree_bound)
    imgs = []
    for m in monos:
        a = Q.element(Poly.monomial(m))
        imgs.append([apply(D, a).poly for D in sub])
    zero = (0,) * Q.nvars
    rows = {(l, zero): l for l in range(len(sub))}
    for per in imgs:
        for l, p in enumerate(per):
            for e in p.terms:
                rows.setdefault((l, e), len(rows))
    matrix = [[Fraction(0)] * len(monos) for _ in rows]
    for col, per in enumerate(imgs):
        for l, p in enumerate(per):
            for e, c in p.terms.items():
                matrix[rows[(l, e)]][col] = c
    out = []
    for k in range(len(sub)):
        rhs = [Fraction(0)] * len(rows)
        rhs[rows[(k, zero)]] = Fraction(1)
        sol = solve(matrix, rhs, len(monos))
        if sol is None:
            return None
        out.append(Q.element(Poly(Q.nvars, {monos[j]: c for j, c in enumerate(sol) if c})))
    return out


def question_probe(sys, alpha, degree_bound=3, max_generator_sets=20):
    """Try to coordinatize ``A/(f - alpha)`` even where the derivations degenerate.

    Picks a maximal fiber-independent subfamily, looks for fiber slices for
    it, and for kernel elements ``w`` completing them to a generating set;
    success means every ambient generator is a polynomial in the slices and
    ``w``.  Failure within the bounds says nothing about the fiber.
    """
    alpha = Fraction(alpha)
    degenerate = any(ps.q(alpha) == 0 for ps in sys.preslices)
    gens = sys.ring.gens()
    names = sys.ring.variables
    if not degenerate:
        chart = coordinatize_fiber(sys, alpha, gens)
        return ProbeReport(
            alpha, False, True,
            {n: chart.format(e) for n, e in zip(names, chart.expressions.values())},
            chart.target_variables, [str(s) for s in chart.slices.slices],
        )
    Q, derivs = _fiber_derivations(sys, alpha)
    n = len(derivs)
    r = independence_rank(derivs).rank
    for subset in combinations(range(n), r):
        sub = [derivs[i] for i in subset]
        if r and independence_rank(sub).rank < r:
            continue
        slices = _fiber_slices(sub, Q, degree_bound) if r else []
        if slices is None:
            continue
        kernel = [w for w in joint_kernel_basis(sub, degree_bound, ring=Q) if not w.is_constant()]
        tried = 0
        for ws in combinations(kernel, n - r):
            tried += 1
            if tried > max_generator_sets:
                break
            exprs = _express_generators(Q, sub, slices, list(ws), degree_bound, sys.cap)
            if exprs is None:
                continue
            targets = tuple(f"S{k + 1}" for k in range(r)) + tuple(f"W{k + 1}" for k in range(n - r))
            return ProbeReport(
                alpha, True, True,
                {nm: e.format(targets) for nm, e in zip(names, exprs)},
                targets, [str(s) for s in slices], [str(w) for w in ws],
            )
    return ProbeReport(alpha, True, False)


def _express_generators(Q, sub, slices, ws, degree_bound, cap):
    r = len(sub)
    k = len(ws)

    def finish(b):
        g = express_in(b, ws, degree_bound) if ws else (Poly.const(0, b.constant_value()) if b.is_constant() else None)
        if g is None:
            raise NotExpressible("coefficient not polynomial in kernel generators")
        return g

    exprs = []
    for x in Q.gens():
        try:
            coeffs = taylor_coefficients(sub, slices, x, finish, cap=cap)
        except (NotExpressible, ChartFailed, CapExceeded):
            return None
        terms = {}
        for beta, g in coeffs.items():
            for e, c in g.terms.items():
                key = beta + e
                terms[key] = terms.get(key, 0) + c
        expr = Poly(r + k, terms)
        images = [s.poly for s in slices] + [w.poly for w in ws]
        if Q.element(expr.substitute(images) if images else Poly.const(Q.nvars, expr.constant_value())) != x:
            return None
        exprs.append(expr)
    return exprs
