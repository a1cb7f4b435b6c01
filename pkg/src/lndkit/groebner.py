"""Buchberger's algorithm under grevlex, with cofactor tracking.

Every basis element carries the vector of cofactors expressing it in
terms of the original generators, so membership answers come with an
explicit certificate ``a = sum(c_j * g_j)``.
"""

from .poly import Poly, divide_by, divides_monomial, grevlex_key


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class _Tracked:
    __slots__ = ("poly", "cof")

    def __init__(self, poly, cof):
        self.poly = poly
        self.cof = cof


def _combine(items, coeffs, n, k):
    """Sum of ``coeffs[i] * items[i]`` on both polynomial and cofactors."""
    poly = Poly.const(n, 0)
    cof = [Poly.const(n, 0) for _ in range(k)]
    for c, it in zip(coeffs, items):
        if c.is_zero():
            continue
        poly = poly + c * it.poly
        cof = [a + c * b for a, b in zip(cof, it.cof)]
    return _Tracked(poly, cof)


def _reduce_tracked(t, basis, n, k):
    quotients, rem = divide_by(t.poly, [b.poly for b in basis])
    cof = list(t.cof)
    for q, b in zip(quotients, basis):
        if not q.is_zero():
            cof = [a - q * c for a, c in zip(cof, b.cof)]
    return _Tracked(rem, cof)


def groebner_with_cofactors(generators):
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Returns ``(basis, cofactors)`` where ``basis[i] == sum(cofactors[i][j] *
    generators[j])``.  Basis elements are monic and sorted ascending.
    """
    gens = [g for g in generators]
    if not gens:
        return [], []
    n = gens[0].nvars
    k = len(gens)
    basis = []
    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        cof = [Poly.const(n, 1 if i == j else 0) for i in range(k)]
        basis.append(_Tracked(g, cof))
    if not basis:
        return [], []

    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]

    def pair_degree(p):
        a = basis[p[0]].poly.leading_monomial()
        b = basis[p[1]].poly.leading_monomial()
        return grevlex_key(_lcm(a, b)), p

    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=pair_degree)
        i, j = pairs.pop(0)
        fi, fj = basis[i], basis[j]
        mi, ci = fi.poly.leading_term()
        mj, cj = fj.poly.leading_term()
        m = _lcm(mi, mj)
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue  # coprime leading monomials reduce to zero
        si = Poly.monomial(tuple(a - b for a, b in zip(m, mi)), 1 / ci)
        sj = Poly.monomial(tuple(a - b for a, b in zip(m, mj)), -1 / cj)
        s = _combine([fi, fj], [si, sj], n, k)
        r = _reduce_tracked(s, basis, n, k)
        if not r.poly.is_zero():
            basis.append(r)
            new = len(basis) - 1
            pairs.extend((a, new) for a in range(new))

    # minimalise
    minimal = []
    for idx, b in enumerate(basis):
        lm = b.poly.leading_monomial()
        redundant = False
        for jdx, other in enumerate(basis):
            if jdx == idx:
                continue
            olm = other.poly.leading_monomial()
            if divides_monomial(olm, lm) and (olm != lm or jdx < idx):
                redundant = True
                break
        if not redundant:
            minimal.append(b)

    # interreduce and make monic
    reduced = []
    for idx, b in enumerate(minimal):
        others = [o for jdx, o in enumerate(minimal) if jdx != idx]
        r = _reduce_tail(b, others, n, k)
        lc = r.poly.leading_coefficient()
        reduced.append(_Tracked(r.poly * (1 / lc), [c * (1 / lc) for c in r.cof]))
    reduced.sort(key=lambda t: grevlex_key(t.poly.leading_monomial()))
    return [t.poly for t in reduced], [t.cof for t in reduced]


def _reduce_tail(t, others, n, k):
    lm, lc = t.poly.leading_term()
    if not others:
        return t
    head = Poly(n, {lm: lc})
    r = _reduce_tracked(_Tracked(t.poly - head, t.cof), others, n, k)
    return _Tracked(r.poly + head, r.cof)


def membership(a, basis, cofactors, ngens):
    """Decide ``a in I`` from a tracked Groebner basis.

    Returns ``(True, cof)`` with ``a == sum(cof[j] * generators[j])`` or
    ``(False, remainder)``.
    """
    n = a.nvars
    quotients, rem = divide_by(a, basis)
    if not rem.is_zero():
        return False, rem
    cof = [Poly.const(n, 0) for _ in range(ngens)]
    for q, c in zip(quotients, cofactors):
        if not q.is_zero():
            cof = [x + q * y for x, y in zip(cof, c)]
    return True, cof
