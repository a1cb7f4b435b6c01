"""Hypersurface rings ``A = Q[X_1..X_m]/(r)`` and their quotients.

A :class:`QuotientRing` is a polynomial ring modulo an ideal with a known
reduced Groebner basis; elements are stored as grevlex normal forms, so
equality is equality of representatives.  :class:`RingPresentation` is the
special case with at most one defining relation, plus the declared
metadata (factoriality, trivial units) that the structure theory assumes.
"""

from __future__ import annotations

import threading
import warnings
from fractions import Fraction

from .groebner import groebner_with_cofactors, membership
from .poly import ArityMismatch, Poly, divide_by, divides_monomial, monomials_up_to


class PresentationError(ValueError):
    """Malformed ring presentation."""


class QuotientRing:
    """``Q[variables] / I`` where ``basis`` is a reduced Groebner basis of ``I``."""

    def __init__(self, variables, basis=()):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise PresentationError(f"duplicate variable names in {self.variables}")
        self.nvars = len(self.variables)
        self.basis = tuple(basis)
        for g in self.basis:
            if g.nvars != self.nvars:
                raise ArityMismatch("basis element over the wrong variables")
        self._leads = [g.leading_monomial() for g in self.basis]

    # -- elements ------------------------------------------------------------

    def reduce(self, p):
        if p.nvars != self.nvars:
            raise ArityMismatch(f"polynomial has {p.nvars} variables, ring has {self.nvars}")
        if not self.basis or p.is_zero():
            return p
        return divide_by(p, self.basis)[1]

    def element(self, p):
        return RingElement(self, self.reduce(p))

    def __call__(self, value):
        if isinstance(value, RingElement):
            if value.ring is self:
                return value
            return self.element(value.poly)
        if isinstance(value, Poly):
            return self.element(value)
        if isinstance(value, str):
            return self.element(Poly.var(self.nvars, self.index(value)))
        return RingElement(self, Poly.const(self.nvars, value))

    def index(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def gen(self, i):
        if isinstance(i, str):
            i = self.index(i)
        return self.element(Poly.var(self.nvars, i))

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    @property
    def zero(self):
        return RingElement(self, Poly.const(self.nvars, 0))

    @property
    def one(self):
        return RingElement(self, Poly.const(self.nvars, 1))

    def is_standard(self, exps):
        return not any(divides_monomial(lm, exps) for lm in self._leads)

    def standard_monomials(self, degree):
        """Normal-form monomials of total degree <= ``degree``, ascending grevlex."""
        return [m for m in monomials_up_to(self.nvars, degree) if self.is_standard(m)]

    def format(self, p):
        return p.format(self.variables)

    def __repr__(self):
        gb = ", ".join(self.format(g) for g in self.basis)
        return f"QuotientRing({list(self.variables)}, [{gb}])"


class RingElement:
    """A residue class, held as its normal form."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring, poly):
        self.ring = ring
        self.poly = poly

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                if other.ring.variables != self.ring.variables:
                    raise ArityMismatch("elements of rings over different variables")
                return self.ring.element(other.poly)
            return other
        return RingElement(self.ring, Poly.const(self.ring.nvars, other))

    def __add__(self, other):
        other = self._coerce(other)
        return RingElement(self.ring, self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, -self.poly)

    def __sub__(self, other):
        other = self._coerce(other)
        return RingElement(self.ring, self.poly - other.poly)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElement(self.ring, self.poly * other)
        other = self._coerce(other)
        return self.ring.element(self.poly * other.poly)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return RingElement(self.ring, self.poly / c)

    def __pow__(self, k):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (RingElement, int, Fraction)):
            return (self - other).poly.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self):
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def is_constant(self):
        return self.poly.is_constant()

    def constant_value(self):
        return self.poly.constant_value()

    def substitute(self, images):
        """Ring map sending generator ``i`` to ``images[i]`` (elements of one ring)."""
        target = images[0].ring
        return target.element(self.poly.substitute([e.poly for e in images]))

    def __str__(self):
        return self.ring.format(self.poly)

    def __repr__(self):
        return f"RingElement({self})"


class RingPresentation(QuotientRing):
    """``Q[variables]/(relation)`` with declared structural metadata.

    ``ufd`` and ``units_trivial`` are trusted declarations; nothing here
    tries to prove them.
    """

    def __init__(self, variables, relation=None, ufd=True, units_trivial=True, name=None):
        variables = tuple(variables)
        if relation is not None:
            if relation.nvars != len(variables):
                raise ArityMismatch("relation is over the wrong number of variables")
            if relation.is_zero() or relation.is_constant():
                raise PresentationError("the relation must be nonzero and non-constant")
        super().__init__(variables, () if relation is None else (relation,))
        self.relation = relation
        self.ufd = ufd
        self.units_trivial = units_trivial
        self.name = name
        if relation is not None and not self.irreducibility_hint():
            warnings.warn(
                "relation has no variable of degree one; irreducibility is not heuristically confirmed",
                stacklevel=2,
            )

    @property
    def dimension(self):
        return self.nvars - (1 if self.relation is not None else 0)

    def irreducibility_hint(self):
        """Cheap sufficient-looking check: some variable occurs with degree exactly one."""
        if self.relation is None:
            return True
        return any(self.relation.degree_in(i) == 1 for i in range(self.nvars))

    def extend(self, extra):
        """Same relation over ``variables + extra`` (used for formal parameters)."""
        extra = tuple(extra)
        nv = self.nvars + len(extra)
        rel = None
        if self.relation is not None:
            rel = self.relation.embed(nv, list(range(self.nvars)))
        ring = RingPresentation(self.variables + extra, rel, self.ufd, self.units_trivial, self.name)
        return ring

    def __repr__(self):
        rel = "none" if self.relation is None else self.format(self.relation)
        return f"RingPresentation({list(self.variables)}, relation={rel})"


def normalize(p, R):
    """Canonical representative of ``p`` in ``R``."""
    return R.element(p)


class IdealHandle:
    """An ideal of ``Q[variables]`` with a lazily computed, write-once Groebner basis."""

    def __init__(self, variables, generators):
        self.variables = tuple(variables)
        self.generators = [g for g in generators]
        for g in self.generators:
            if g.nvars != len(self.variables):
                raise ArityMismatch("generator over the wrong variables")
        self._gb = None
        self._lock = threading.Lock()

    def _compute(self):
        if self._gb is None:
            gb = groebner_with_cofactors(self.generators)
            with self._lock:
                if self._gb is None:
                    self._gb = gb
        return self._gb

    @property
    def groebner(self):
        return self._compute()[0]

    @property
    def cofactors(self):
        return self._compute()[1]

    def quotient(self):
        return QuotientRing(self.variables, self.groebner)

    def is_unit_ideal(self):
        return any(g.is_constant() and not g.is_zero() for g in self.groebner)

    def __repr__(self):
        gens = ", ".join(g.format(self.variables) for g in self.generators)
        return f"IdealHandle({gens})"


def ideal_membership(a, I):
    """``(True, cofactors)`` with ``a = sum(c_j g_j)`` when ``a`` is in ``I``, else ``(False, None)``."""
    gb, cof = I._compute()
    ok, data = membership(a, gb, cof, len(I.generators))
    if ok:
        return True, data
    return False, None


def ring_divides(a, d):
    """``c`` with ``a == d * c`` in the ring of ``a``, or ``None``."""
    R = a.ring
    d = a._coerce(d)
    if d.is_zero():
        raise ZeroDivisionError("division by zero in the ring")
    gens = [d.poly] + list(R.basis)
    ok, cof = ideal_membership(a.poly, IdealHandle(R.variables, gens))
    if not ok:
        return None
    c = R.element(cof[0])
    if d * c != a:
        raise AssertionError("cofactor extraction failed to reproduce the dividend")
    return c


def fiber_ring(R, f, alpha):
    """The ideal ``(f - alpha) + (relation)`` of the ambient polynomial ring."""
    if f.is_constant():
        raise ValueError("fiber of a constant function")
    gens = [f.poly - Fraction(alpha)]
    if getattr(R, "relation", None) is not None:
        gens.append(R.relation)
    else:
        gens.extend(R.basis)
    return IdealHandle(R.variables, gens)


def express_in(b, gens, degree_bound):
    """Write ``b`` as a polynomial in ``gens`` of total degree <= ``degree_bound``.

    Returns a :class:`Poly` in ``len(gens)`` variables, or ``None``.  The
    comparison is between normal forms, so it is exact in the quotient.
    """
    from .linalg import solve

    R = b.ring
    k = len(gens)
    exps_list = monomials_up_to(k, degree_bound)
    cache = {(0,) * k: R.one}
    columns = []
    for e in exps_list:
        if e not in cache:
            i = next(j for j, v in enumerate(e) if v)
            prev = list(e)
            prev[i] -= 1
            cache[e] = cache[tuple(prev)] * R(gens[i])
        columns.append(cache[e].poly)
    rows = {}
    for col in columns + [b.poly]:
        for m in col.terms:
            rows.setdefault(m, len(rows))
    matrix = [[Fraction(0)] * len(columns) for _ in rows]
    rhs = [Fraction(0)] * len(rows)
    for j, col in enumerate(columns):
        for m, c in col.terms.items():
            matrix[rows[m]][j] = c
    for m, c in b.poly.terms.items():
        rhs[rows[m]] = c
    sol = solve(matrix, rhs, len(columns))
    if sol is None:
        return None
    return Poly(k, {e: c for e, c in zip(exps_list, sol) if c})
