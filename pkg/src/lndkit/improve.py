"""Saturating a commuting system to a basis of its derivation module.

``M`` is the set of derivations of ``A`` lying in the ``k(f)``-span of the
system.  Pairing with the pre-slices embeds ``M`` into ``k[f]^n``
(:func:`phi_image`); a constant relation among the current basis on a fiber
``f = alpha`` lets one basis element be divided by ``f - alpha``, which
drops the degree of ``det(phi)`` by one.  The loop stops when no rational
root of the determinant admits such a relation, and the result is put in
Hermite normal form over ``k[f]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .derivation import Derivation, DerivationSystem, apply, commutator, independence_rank, is_locally_nilpotent
from .errors import DivisionNotIntegral, LNDError, NotExpressible, SolveInFFailed
from .fibers import _fiber_derivations, degenerate_fibers
from .linalg import nullspace
from .poly import UniPoly, rational_roots
from .ring import ring_divides
from .slices import DEFAULT_SEED_BOUND, DEFAULT_SOLVE_BOUND, compute_preslices, eval_in_ring, solve_in_f


def phi_image(D, preslices, f, solve_bound=DEFAULT_SOLVE_BOUND):
    """``(D(p_1), ..., D(p_n))`` as polynomials in ``f``."""
    out = []
    for ps in preslices:
        try:
            out.append(solve_in_f(apply(D, ps.p), f, solve_bound))
        except NotExpressible as exc:
            raise SolveInFFailed(f"{D}({ps.p}) is not in k[f]; derivation is outside M") from exc
    return out


def uni_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = UniPoly()
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * uni_det(minor)
        total = total - term if j % 2 else total + term
    return total


def uni_adjugate(M):
    n = len(M)
    if n == 1:
        return [[UniPoly.const(1)]]
    adj = [[UniPoly() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            c = uni_det(minor)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


def uni_matmul(A, B):
    return [
        [sum((A[i][k] * B[k][j] for k in range(len(B))), UniPoly()) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def hermite_form(M):
    """Row Hermite normal form over ``Q[T]``: ``H = U M`` with ``U`` unimodular.

    ``H`` is upper triangular with monic pivots and entries above each pivot
    of smaller degree than the pivot.
    """
    n = len(M)
    ncols = len(M[0])
    H = [list(row) for row in M]
    U = [[UniPoly.const(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def sub_row(i, h, r):
        H[i] = [a - h * b for a, b in zip(H[i], H[r])]
        U[i] = [a - h * b for a, b in zip(U[i], U[r])]

    r = 0
    for col in range(ncols):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if not H[i][col].is_zero()]
            if not nz:
                break
            piv = min(nz, key=lambda i: (H[i][col].degree(), i))
            H[r], H[piv] = H[piv], H[r]
            U[r], U[piv] = U[piv], U[r]
            clean = True
            for i in range(r + 1, n):
                if not H[i][col].is_zero():
                    sub_row(i, H[i][col] // H[r][col], r)
                    if not H[i][col].is_zero():
                        clean = False
            if clean:
                break
        if all(H[i][col].is_zero() for i in range(r, n)):
            continue
        lc = H[r][col].leading_coefficient()
        H[r] = [v * (1 / lc) for v in H[r]]
        U[r] = [v * (1 / lc) for v in U[r]]
        for i in range(r):
            if not H[i][col].is_zero():
                sub_row(i, H[i][col] // H[r][col], r)
        r += 1
    return H, U


def combine(coeffs, basis, f):
    """``sum_j coeffs[j](f) * basis[j]``."""
    R = basis[0].ring
    images = [R.zero] * R.nvars
    for c, E in zip(coeffs, basis):
        if c.is_zero():
            continue
        cf = eval_in_ring(c, f)
        images = [a + cf * b for a, b in zip(images, E.images)]
    return Derivation(R, images, check=False)


def constant_dependency(basis, sys, alpha):
    """Least nonzero ``c`` in ``Q^n`` with ``sum c_i E_i = 0`` modulo ``(f - alpha)``, or ``None``."""
    alpha = Fraction(alpha)
    Q, _ = _fiber_derivations(sys, alpha)
    rows = {}
    cells = []
    for i, E in enumerate(basis):
        for j, img in enumerate(E.images):
            for e, c in Q.element(img.poly).poly.terms.items():
                key = (j, e)
                rows.setdefault(key, len(rows))
                cells.append((rows[key], i, c))
    matrix = [[Fraction(0)] * len(basis) for _ in rows]
    for r, i, c in cells:
        matrix[r][i] += c
    ns = nullspace(matrix, len(basis))
    return ns[0] if ns else None


@dataclass
class SaturationStep:
    alpha: Fraction
    coefficients: list
    replaced: int
    new: Derivation


@dataclass
class DerivationModuleBasis:
    basis: list
    phi: list  # rows phi(E_i) over Q[T]
    change: list  # D_i = sum_j change[i][j](f) E_j
    preslices: list
    steps: list = field(default_factory=list)
    residual_factors: list = field(default_factory=list)


def change_matrix(phi_D, phi_E):
    """``C`` with ``phi_D = C phi_E``, or ``None`` when some entry is not polynomial."""
    det = uni_det(phi_E)
    if det.is_zero():
        return None
    num = uni_matmul(phi_D, uni_adjugate(phi_E))
    out = []
    for row in num:
        new = []
        for v in row:
            q = v.exact_quotient(det)
            if q is None:
                return None
            new.append(q)
        out.append(new)
    return out


def improve_basis(sys, solve_bound=DEFAULT_SOLVE_BOUND):
    if sys.preslices is None:
        raise ValueError("system has no pre-slices")
    f = sys.f
    ps = sys.preslices
    basis = list(sys.derivations)
    steps = []
    while True:
        phi = [phi_image(E, ps, f, solve_bound) for E in basis]
        det = uni_det(phi)
        roots, _ = rational_roots(det)
        progressed = False
        for alpha, _ in roots:
            c = constant_dependency(basis, sys, alpha)
            if c is None:
                continue
            combo = Derivation(
                sys.ring,
                [sum((ci * E.images[j] for ci, E in zip(c, basis) if ci), sys.ring.zero) for j in range(sys.ring.nvars)],
                check=False,
            )
            divisor = f - alpha
            images = []
            for img in combo.images:
                if img.is_zero():
                    images.append(img)
                    continue
                quo = ring_divides(img, divisor)
                if quo is None:
                    raise DivisionNotIntegral(f"{img} is not divisible by {divisor} although it vanishes on the fiber")
                images.append(quo)
            new = Derivation(sys.ring, images, check=False)
            k = max(i for i, v in enumerate(c) if v)
            basis[k] = new
            steps.append(SaturationStep(alpha, list(c), k, new))
            progressed = True
            break
        if not progressed:
            break
    phi = [phi_image(E, ps, f, solve_bound) for E in basis]
    H, U = hermite_form(phi)
    basis = [combine(row, basis, f) for row in U]
    phi = [phi_image(E, ps, f, solve_bound) for E in basis]
    if phi != H:
        raise DivisionNotIntegral("Hermite transform does not reproduce the normalized phi matrix")
    phi_D = [phi_image(D, ps, f, solve_bound) for D in sys.derivations]
    change = change_matrix(phi_D, phi)
    if change is None:
        raise DivisionNotIntegral("original derivations are not in the k[f]-span of the new basis")
    _, residual = rational_roots(uni_det(phi))
    residual_factors = [residual] if residual.degree() > 0 else []
    return DerivationModuleBasis(basis, phi, change, list(ps), steps, residual_factors)


@dataclass
class ModuleVerdict:
    checks: list  # (name, passed, detail)
    degenerate_before: list = field(default_factory=list)
    degenerate_after: list = field(default_factory=list)

    @property
    def ok(self):
        return all(p for _, p, _ in self.checks)

    @property
    def failures(self):
        return [(n, d) for n, p, d in self.checks if not p]


def verify_module_basis(B, sys, seed_bound=DEFAULT_SEED_BOUND, solve_bound=DEFAULT_SOLVE_BOUND):
    """Re-check every claimed property of an improved basis; collects all failures."""
    checks = []
    f = sys.f
    E = B.basis
    n = len(E)

    comm = all(commutator(E[i], E[j]).is_zero() for i, j in combinations(range(n), 2))
    checks.append(("commute", comm, ""))
    lnd_ok, detail = True, ""
    for i, D in enumerate(E):
        try:
            is_locally_nilpotent(D, sys.cap)
        except LNDError as exc:
            lnd_ok, detail = False, f"E{i + 1}: {exc}"
    checks.append(("locally-nilpotent", lnd_ok, detail))
    rank = independence_rank(E).rank
    checks.append(("independent", rank == n, f"rank {rank}"))

    try:
        phi_E = [phi_image(D, B.preslices, f, solve_bound) for D in E]
        phi_ok = phi_E == B.phi
        checks.append(("phi-matrix", phi_ok, "" if phi_ok else "stored phi differs from recomputed"))
    except LNDError as exc:
        phi_E = None
        checks.append(("phi-matrix", False, str(exc)))

    phi_D = [phi_image(D, B.preslices, f, solve_bound) for D in sys.derivations]
    span_ok, span_detail = False, "phi matrix unavailable"
    if phi_E is not None:
        C = change_matrix(phi_D, phi_E)
        if C is None:
            span_detail = "some D_i needs a non-polynomial coefficient over k[f]"
        else:
            span_ok = all(combine(C[i], E, f) == D for i, D in enumerate(sys.derivations))
            span_detail = "" if span_ok else "k[f]-combination does not reproduce D_i"
    checks.append(("k[f]-span", span_ok, span_detail))

    if phi_E is not None:
        det_ok = uni_det(phi_D).exact_quotient(uni_det(phi_E)) is not None
        checks.append(("det-divides", det_ok, ""))

    before = degenerate_fibers(sys).alphas
    after = []
    try:
        esys = DerivationSystem.build(E, f, cap=sys.cap, require_ufd=False)
        esys, _ = compute_preslices(esys, seed_bound, solve_bound)
        after = degenerate_fibers(esys).alphas
        mono = set(after) <= set(before)
        checks.append(("monotone-degeneracy", mono, f"{before} -> {after}"))
    except LNDError as exc:
        checks.append(("monotone-degeneracy", False, str(exc)))
    return ModuleVerdict(checks, before, after)
