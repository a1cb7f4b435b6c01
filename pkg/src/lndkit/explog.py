"""Exponentials of locally nilpotent derivations and logarithms of unipotent maps.

Formal parameters are adjoined as extra ring variables that every lifted
derivation kills, so ``exp(t D)`` is an honest ring map of ``A[t]`` and the
flow law can be checked by exact comparison.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .derivation import DEFAULT_CAP, Derivation, apply, check_well_defined, is_locally_nilpotent
from .errors import CapExceeded, NotDerivation


class RingAutomorphism:
    """Ring endomorphism given by generator images (all in the same ring)."""

    __slots__ = ("ring", "images")

    def __init__(self, ring, images):
        if len(images) != ring.nvars:
            raise ValueError(f"need {ring.nvars} generator images")
        self.ring = ring
        self.images = tuple(ring(v) for v in images)

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring.gens())

    @classmethod
    def from_dict(cls, ring, images):
        imgs = list(ring.gens())
        for name, v in images.items():
            imgs[ring.index(name)] = ring(v)
        return cls(ring, imgs)

    def __call__(self, a):
        a = self.ring(a)
        return self.ring.element(a.poly.substitute([v.poly for v in self.images]))

    def preserves_relation(self):
        rel = getattr(self.ring, "relation", None)
        if rel is None:
            return True
        return self.ring.element(rel.substitute([v.poly for v in self.images])).is_zero()

    def is_identity(self):
        return all(v == x for v, x in zip(self.images, self.ring.gens()))

    def __eq__(self, other):
        if not isinstance(other, RingAutomorphism):
            return NotImplemented
        return self.ring.variables == other.ring.variables and all(
            a == b for a, b in zip(self.images, other.images)
        )

    def __hash__(self):
        return hash(tuple(v.poly for v in self.images))

    def format(self):
        return "; ".join(f"{n} -> {v}" for n, v in zip(self.ring.variables, self.images))

    __str__ = format

    def __repr__(self):
        return f"RingAutomorphism({self})"


def fresh_name(base, taken):
    name = base
    k = 1
    while name in taken:
        name = f"{base}{k}"
        k += 1
    return name


def lift_element(a, ring):
    """Embed ``a`` into ``ring``, whose variables extend ``a.ring``'s."""
    positions = [ring.index(v) for v in a.ring.variables]
    return ring.element(a.poly.embed(ring.nvars, positions))


def lift_derivation(D, ring):
    """Extend ``D`` to ``ring`` (a variable extension), killing the new variables."""
    imgs = [ring.zero] * ring.nvars
    for name, v in zip(D.ring.variables, D.images):
        imgs[ring.index(name)] = lift_element(v, ring)
    return Derivation(ring, imgs, check=False)


def lift_automorphism(sigma, ring):
    imgs = list(ring.gens())
    for name, v in zip(sigma.ring.variables, sigma.images):
        imgs[ring.index(name)] = lift_element(v, ring)
    return RingAutomorphism(ring, imgs)


def exp_series(D, a, cap=DEFAULT_CAP):
    """``sum_k D^k(a) / k!`` (finite because ``D`` kills ``a`` eventually)."""
    acc = D.ring.zero
    cur = D.ring(a)
    k = 0
    while not cur.is_zero():
        if k > cap:
            raise CapExceeded(f"D^{cap} did not kill {a}", cap=cap)
        acc = acc + cur * Fraction(1, factorial(k))
        cur = apply(D, cur)
        k += 1
    return acc


def exp_derivation(D, with_parameter=False, parameter="t", cap=DEFAULT_CAP):
    """``x_j -> sum_k t^k D^k(x_j) / k!``; with ``with_parameter=False`` this is ``t = 1``.

    With a parameter the result lives on ``A[t]`` (the name is made fresh
    if it clashes with a ring variable).
    """
    is_locally_nilpotent(D, cap)
    if with_parameter:
        name = fresh_name(parameter, D.ring.variables)
        ring = D.ring.extend((name,))
        D = lift_derivation(D, ring) * ring.gen(name)
    return RingAutomorphism(D.ring, [exp_series(D, x, cap) for x in D.ring.gens()])


def compose(sigma, tau):
    """``(sigma o tau)(a) = sigma(tau(a))``."""
    if sigma.ring.variables != tau.ring.variables:
        raise ValueError("automorphisms act on different rings")
    return RingAutomorphism(sigma.ring, [sigma(v) for v in tau.images])


def _log_series(sigma, a, cap):
    """``sum_{k>=1} (-1)^(k+1) (sigma - id)^k(a) / k``."""
    acc = sigma.ring.zero
    cur = sigma(a) - a
    k = 1
    while not cur.is_zero():
        if k > cap:
            raise CapExceeded(f"(sigma - id)^{cap} does not kill {a}", cap=cap)
        acc = acc + cur * Fraction((-1) ** (k + 1), k)
        cur = sigma(cur) - cur
        k += 1
    return acc


def log_automorphism(sigma, cap=DEFAULT_CAP):
    """The derivation ``log(sigma)``, checked by finite verification.

    Verification: the series applied directly to every product of two
    generators agrees with the Leibniz extension of the generator images,
    the result descends to the presented ring, and ``exp`` of it gives
    back ``sigma`` on generators.
    """
    R = sigma.ring
    if not sigma.preserves_relation():
        raise NotDerivation("the map does not preserve the relation, so it is not a ring endomorphism")
    gens = R.gens()
    L = Derivation(R, [_log_series(sigma, x, cap) for x in gens], check=False)
    ok, witness = check_well_defined(L)
    if not ok:
        raise NotDerivation(f"log does not preserve the relation; witness {witness}")
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            prod = gens[i] * gens[j]
            if _log_series(sigma, prod, cap) != apply(L, prod):
                raise NotDerivation(
                    f"Leibniz fails on {R.variables[i]}*{R.variables[j]}"
                )
    try:
        back = exp_derivation(L, cap=cap)
    except CapExceeded as exc:
        raise NotDerivation(f"log(sigma) is not locally nilpotent within cap: {exc}") from exc
    if back != sigma:
        raise NotDerivation("exp(log(sigma)) differs from sigma on generators")
    return L
