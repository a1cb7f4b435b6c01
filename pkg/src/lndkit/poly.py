"""Exact multivariate and univariate polynomials over the rationals.

Multivariate polynomials are sparse maps from exponent tuples to
``Fraction`` coefficients.  The canonical monomial order is graded reverse
lexicographic (grevlex) with the variables ordered as given.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import gcd, lcm

from .linalg import rank


class ArityMismatch(ValueError):
    """Two polynomials were combined over different variable counts."""


@lru_cache(maxsize=None)
def grevlex_key(exps):
    """Sort key: larger key means larger monomial under grevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _frac(c):
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


def monomials_up_to(nvars, degree):
    """All exponent tuples of total degree <= ``degree``, ascending grevlex."""
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    out.sort(key=grevlex_key)
    return out


def divides_monomial(a, b):
    return all(x <= y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables over Q."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    if len(e) != nvars:
                        raise ArityMismatch(f"monomial {e} does not have {nvars} exponents")
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, terms):
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def const(cls, nvars, c):
        c = _frac(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls(len(exps), {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def sorted_terms(self, descending=True):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=descending)

    def leading_monomial(self):
        return max(self.terms, key=grevlex_key)

    def leading_term(self):
        m = self.leading_monomial()
        return m, self.terms[m]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Poly):
            return Poly.const(self.nvars, other)
        if other.nvars != self.nvars:
            raise ArityMismatch(f"cannot combine polynomials in {self.nvars} and {other.nvars} variables")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _frac(other)
            if not c:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _frac(c)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exps, coeff):
        return Poly._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exps)): c * coeff for e, c in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus and evaluation -------------------------------------------

    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly._raw(self.nvars, out)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ArityMismatch("point has the wrong number of coordinates")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= _frac(x) ** k
            total += v
        return total

    def substitute(self, images):
        """Replace variable ``i`` by ``images[i]`` (Polys sharing one arity)."""
        if len(images) != self.nvars:
            raise ArityMismatch("need one image per variable")
        target = images[0].nvars if images else 0
        powers = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        result = Poly.const(target, 0)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def embed(self, nvars, positions):
        """Re-index into ``nvars`` variables; variable i goes to ``positions[i]``."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                ne[positions[i]] += k
            out[tuple(ne)] = c
        return Poly._raw(nvars, out)

    # -- printing ------------------------------------------------------------

    def format(self, names):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.format([f'x{i}' for i in range(self.nvars)])})"


def poly_arith(a, b, kind):
    """Exact ``add``, ``sub`` or ``mul`` of two polynomials over the same variables."""
    if a.nvars != b.nvars:
        raise ArityMismatch(f"variable counts differ: {a.nvars} vs {b.nvars}")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def divide_by(p, divisors):
    """Multivariate division with remainder under grevlex.

    Returns ``(quotients, remainder)`` with ``p = sum(q_i * g_i) + remainder``
    and no term of ``remainder`` divisible by any leading monomial.
    """
    leads = [g.leading_term() for g in divisors]
    quotients = [dict() for _ in divisors]
    work = dict(p.terms)
    remainder = {}
    while work:
        m = max(work, key=grevlex_key)
        c = work[m]
        for k, (lm, lc) in enumerate(leads):
            if divides_monomial(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                factor = c / lc
                quotients[k][shift] = quotients[k].get(shift, 0) + factor
                for e, v in divisors[k].terms.items():
                    t = tuple(a + b for a, b in zip(e, shift))
                    nv = work.get(t, 0) - factor * v
                    if nv:
                        work[t] = nv
                    else:
                        work.pop(t, None)
                break
        else:
            remainder[m] = c
            del work[m]
    n = p.nvars
    return [Poly(n, q) for q in quotients], Poly._raw(n, remainder)


def exact_divide(a, d):
    """Return ``c`` with ``a == d * c``, or ``None`` when ``d`` does not divide ``a``."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.nvars != d.nvars:
        raise ArityMismatch("variable counts differ")
    (q,), r = divide_by(a, [d])
    if r.is_zero():
        return q
    return None


def jacobian_rank(elements, point):
    """Rank over Q of the Jacobian of ``elements`` evaluated at ``point``."""
    if not elements:
        return 0
    n = elements[0].nvars
    if len(point) != n:
        raise ArityMismatch("point must have one coordinate per variable")
    matrix = [[e.diff(j).evaluate(point) for j in range(n)] for e in elements]
    return rank(matrix)


class UniPoly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading_coefficient(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly(c / lc for c in self.coeffs)

    def __call__(self, x):
        """Horner evaluation at ``x`` (a rational or any ring element)."""
        if not self.coeffs:
            return Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return UniPoly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = _frac(other)
            return UniPoly(v * c for v in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = UniPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree()
        lc = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            if c:
                quot[k - dq] = c
                for j, v in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * v
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_quotient(self, other):
        q, r = divmod(self, other)
        return q if r.is_zero() else None

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def format(self, name="T"):
        if not self.coeffs:
            return "0"
        n = self.degree()
        terms = {(k,): c for k, c in enumerate(self.coeffs) if c}
        return Poly(1, terms).format([name]) if n >= 0 else "0"

    def __repr__(self):
        return f"UniPoly({self.format()})"


def univ_gcd(a, b):
    """Monic gcd of two univariate polynomials, not both zero."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(q):
    """Rational roots of ``q`` with multiplicities, plus the residual factor.

    Returns ``(roots, residual)`` where ``roots`` is a sorted list of
    ``(alpha, multiplicity)`` and ``residual`` is ``q`` divided by every
    found linear factor.  A residual of positive degree may still carry
    non-rational roots.
    """
    if q.is_zero():
        raise ValueError("the zero polynomial has every number as a root")
    roots = []
    residual = q
    zero_mult = 0
    while residual.coeffs and residual.coeffs[0] == 0:
        residual = UniPoly(residual.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    if residual.degree() >= 1:
        den = lcm(*(c.denominator for c in residual.coeffs))
        ints = [int(c * den) for c in residual.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        cands = set()
        for p in _divisors(ints[0]):
            for s in _divisors(ints[-1]):
                cands.add(Fraction(p, s))
                cands.add(Fraction(-p, s))
        for alpha in sorted(cands):
            mult = 0
            lin = UniPoly((-alpha, 1))
            while residual.degree() >= 1:
                quo = residual.exact_quotient(lin)
                if quo is None:
                    break
                residual = quo
                mult += 1
            if mult:
                roots.append((alpha, mult))
    roots.sort()
    return roots, residual

