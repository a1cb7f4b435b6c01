"""Derivations of presented rings and validated commuting systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import CapExceeded, NotInKernel, NotWellDefined, ValidationError
from .linalg import nullspace
from .poly import Poly
from .ring import RingElement, express_in

DEFAULT_CAP = 64


class Derivation:
    """A derivation determined by the images of the ambient generators."""

    __slots__ = ("ring", "images")

    def __init__(self, ring, images, check=True):
        if len(images) != ring.nvars:
            raise ValueError(f"need {ring.nvars} generator images, got {len(images)}")
        self.ring = ring
        self.images = tuple(ring(v) for v in images)
        if check:
            ok, witness = check_well_defined(self)
            if not ok:
                raise NotWellDefined(
                    f"derivation does not preserve the relation; D(r) reduces to {witness}",
                    witness=witness,
                )

    @classmethod
    def from_dict(cls, ring, images, check=True):
        """``images`` maps variable names to elements; missing names map to 0."""
        imgs = [ring.zero] * ring.nvars
        for name, v in images.items():
            imgs[ring.index(name)] = ring(v)
        return cls(ring, imgs, check=check)

    @classmethod
    def partial(cls, ring, name, check=True):
        return cls.from_dict(ring, {name: 1}, check=check)

    @classmethod
    def zero(cls, ring):
        return cls(ring, [ring.zero] * ring.nvars, check=False)

    def __call__(self, a):
        return apply(self, a)

    def over(self, ring):
        """The same generator images read in another quotient of the same variables."""
        return Derivation(ring, [ring.element(v.poly) for v in self.images], check=False)

    def is_zero(self):
        return all(v.is_zero() for v in self.images)

    def __add__(self, other):
        return Derivation(self.ring, [a + b for a, b in zip(self.images, other.images)], check=False)

    def __sub__(self, other):
        return Derivation(self.ring, [a - b for a, b in zip(self.images, other.images)], check=False)

    def __neg__(self):
        return Derivation(self.ring, [-a for a in self.images], check=False)

    def __mul__(self, c):
        return Derivation(self.ring, [a * c for a in self.images], check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring.variables == other.ring.variables and all(
            a == b for a, b in zip(self.images, other.images)
        )

    def __hash__(self):
        return hash(tuple(v.poly for v in self.images))

    def format(self):
        return format_derivation(self)

    __str__ = format

    def __repr__(self):
        return f"Derivation({self})"


def format_derivation(D):
    """Render as ``c1*d/dx + c2*d/dy`` (parseable back)."""
    names = D.ring.variables
    parts = []
    for name, img in zip(names, D.images):
        if img.is_zero():
            continue
        p = img.poly
        op = f"d/d{name}"
        if len(p.terms) == 1:
            (e, c), = p.terms.items()
            sign = "-" if c < 0 else "+"
            mono = Poly(p.nvars, {e: abs(c)}).format(names)
            body = op if mono == "1" else f"{mono}*{op}"
            parts.append((sign, body))
        else:
            parts.append(("+", f"({p.format(names)})*{op}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def apply(D, a):
    """``D(a) = sum_j D(x_j) * da/dx_j`` in normal form."""
    R = D.ring
    a = R(a)
    acc = Poly.const(R.nvars, 0)
    for j, img in enumerate(D.images):
        if img.is_zero():
            continue
        d = a.poly.diff(j)
        if not d.is_zero():
            acc = acc + img.poly * d
    return R.element(acc)


def check_well_defined(D):
    """``(True, None)`` when ``D`` maps the relation into the ideal it generates.

    Otherwise ``(False, witness)`` with the nonzero normal form of ``D(r)``.
    """
    R = D.ring
    relation = getattr(R, "relation", None)
    if relation is None:
        return True, None
    acc = Poly.const(R.nvars, 0)
    for j, img in enumerate(D.images):
        acc = acc + img.poly * relation.diff(j)
    nf = R.element(acc)
    if nf.is_zero():
        return True, None
    return False, nf


def commutator(D, E):
    """``[D, E] = D E - E D`` on generator images."""
    images = [apply(D, e) - apply(E, d) for d, e in zip(D.images, E.images)]
    return Derivation(D.ring, images, check=False)


@dataclass(frozen=True)
class NilpotencyCertificate:
    indices: dict
    cap: int


def is_locally_nilpotent(D, cap=DEFAULT_CAP):
    """Certificate that every generator is killed by a power of ``D``.

    Raises :class:`CapExceeded` when some generator survives ``cap``
    applications; that is not a proof that ``D`` fails to be locally
    nilpotent.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    indices = {}
    for name, x in zip(D.ring.variables, D.ring.gens()):
        cur = x
        m = 0
        while not cur.is_zero():
            if m >= cap:
                raise CapExceeded(
                    f"D^{cap}({name}) = {cur} is nonzero",
                    generator=name, last=cur, cap=cap,
                )
            cur = apply(D, cur)
            m += 1
        indices[name] = m
    return NilpotencyCertificate(indices, cap)


def determinant(matrix):
    """Laplace expansion over a ring (small sizes only)."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return matrix[0][0] * 0
    return total


@dataclass(frozen=True)
class RankWitness:
    rank: int
    minor: RingElement | None
    rows: tuple
    columns: tuple


def independence_rank(Ds):
    """Rank of ``(D_i(x_j))`` over the fraction field, with a nonzero maximal minor.

    Column subsets are scanned starting from the last ambient variables.
    The ring is assumed to be a domain, so a nonzero k x k minor certifies
    rank >= k.
    """
    if not Ds:
        raise ValueError("empty derivation list")
    R = Ds[0].ring
    matrix = [list(D.images) for D in Ds]
    n, m = len(Ds), R.nvars
    for k in range(min(n, m), 0, -1):
        for rows in combinations(range(n), k):
            for cols in reversed(list(combinations(range(m), k))):
                sub = [[matrix[i][j] for j in cols] for i in rows]
                det = determinant(sub)
                if not det.is_zero():
                    return RankWitness(k, det, rows, tuple(R.variables[j] for j in cols))
    return RankWitness(0, None, (), ())


@dataclass(frozen=True)
class KernelVerdict:
    necessary: bool
    status: str  # "bounded-evidence" or "refuted"
    degree_bound: int
    kernel_dimension: int
    expressions: tuple = ()
    counterexample: RingElement | None = None


def joint_kernel_basis(Ds, degree_bound, ring=None):
    """Basis of ``{a : D_i(a) = 0 for all i}`` among standard monomials of degree <= bound."""
    R = ring or Ds[0].ring
    monos = R.standard_monomials(degree_bound)
    images = []
    for mono in monos:
        a = R.element(Poly.monomial(mono))
        images.append([apply(D, a).poly for D in Ds])
    rows = {}
    for per in images:
        for i, p in enumerate(per):
            for e in p.terms:
                rows.setdefault((i, e), len(rows))
    matrix = [[Fraction(0)] * len(monos) for _ in rows]
    for col, per in enumerate(images):
        for i, p in enumerate(per):
            for e, c in p.terms.items():
                matrix[rows[(i, e)]][col] = c
    basis = nullspace(matrix, len(monos))
    return [R.element(Poly(R.nvars, {monos[j]: c for j, c in enumerate(v) if c})) for v in basis]


def verify_kernel_generator(Ds, f, degree_bound=3):
    """Check ``f`` generates the joint kernel: exactly for ``D_i(f) = 0``,
    and by bounded search for the claim that nothing else is killed."""
    if f.is_constant():
        raise ValueError("kernel generator must be non-constant")
    for i, D in enumerate(Ds):
        img = apply(D, f)
        if not img.is_zero():
            raise NotInKernel(f"D{i + 1}({f}) = {img} is nonzero", index=i, witness=img)
    basis = joint_kernel_basis(Ds, degree_bound)
    exprs = []
    for a in basis:
        g = express_in(a, [f], degree_bound)
        if g is None:
            return KernelVerdict(True, "refuted", degree_bound, len(basis), tuple(exprs), a)
        exprs.append(g)
    return KernelVerdict(True, "bounded-evidence", degree_bound, len(basis), tuple(exprs))


@dataclass
class DerivationSystem:
    """A validated commuting family of locally nilpotent derivations with kernel generator ``f``."""

    derivations: list
    f: RingElement
    certificates: list = field(default_factory=list)
    rank: RankWitness | None = None
    preslices: list | None = None
    cap: int = DEFAULT_CAP

    @property
    def ring(self):
        return self.f.ring

    @property
    def n(self):
        return len(self.derivations)

    @property
    def qs(self):
        return None if self.preslices is None else [p.q for p in self.preslices]

    @classmethod
    def build(cls, derivations, f, cap=DEFAULT_CAP, preslices=None, require_ufd=True):
        derivations = list(derivations)
        if not derivations:
            raise ValidationError("a system needs at least one derivation")
        R = derivations[0].ring
        f = R(f)
        if require_ufd and getattr(R, "ufd", True) is False:
            raise ValidationError(
                "ring is declared non-UFD (ufd = false); the structure theory requires a UFD"
            )
        if require_ufd and getattr(R, "units_trivial", True) is False:
            raise ValidationError("ring is declared with nontrivial units (units_trivial = false)")
        dim = getattr(R, "dimension", R.nvars)
        if dim != len(derivations) + 1:
            raise ValidationError(
                f"ring has dimension {dim} but {len(derivations)} derivations need dimension "
                f"{len(derivations) + 1}"
            )
        for i, D in enumerate(derivations):
            ok, witness = check_well_defined(D)
            if not ok:
                raise NotWellDefined(f"D{i + 1} is not well defined; witness {witness}", witness)
        for i, j in combinations(range(len(derivations)), 2):
            c = commutator(derivations[i], derivations[j])
            if not c.is_zero():
                raise ValidationError(f"D{i + 1} and D{j + 1} do not commute: [D{i + 1}, D{j + 1}] = {c}")
        certs = [is_locally_nilpotent(D, cap) for D in derivations]
        rank = independence_rank(derivations)
        if rank.rank != len(derivations):
            raise ValidationError(f"derivations have rank {rank.rank} < {len(derivations)} over A")
        if f.is_constant():
            raise ValidationError("kernel generator must be non-constant")
        for i, D in enumerate(derivations):
            img = apply(D, f)
            if not img.is_zero():
                raise NotInKernel(f"D{i + 1}({f}) = {img} is nonzero", index=i, witness=img)
        return cls(derivations, f, certs, rank, preslices, cap)

    def with_preslices(self, preslices):
        return DerivationSystem(self.derivations, self.f, self.certificates, self.rank, list(preslices), self.cap)
