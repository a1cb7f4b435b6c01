"""Exact computations with commuting locally nilpotent derivations.

Rings are ``Q[x_1..x_m]`` or hypersurfaces ``Q[x_1..x_m]/(r)``; all
arithmetic is over :class:`fractions.Fraction`.
"""

from .derivation import (
    Derivation,
    DerivationSystem,
    apply,
    check_well_defined,
    commutator,
    independence_rank,
    is_locally_nilpotent,
    verify_kernel_generator,
)
from .errors import LNDError
from .explog import RingAutomorphism, compose, exp_derivation, log_automorphism
from .fibers import bla_crosscheck, degenerate_fibers, dependency_certificate, question_probe, verify_certificate
from .frontend import load_bundled, load_scenario, parse_derivation, parse_element, run_scenario
from .improve import hermite_form, improve_basis, verify_module_basis
from .poly import Poly, UniPoly, exact_divide, jacobian_rank, rational_roots, univ_gcd
from .ring import IdealHandle, RingPresentation, fiber_ring, ideal_membership, normalize, ring_divides
from .slices import (
    compute_preslices,
    coordinatize_fiber,
    coordinatize_global,
    independence_evidence,
    minimize_q,
    preslice_from,
    search_preslices,
    solve_in_f,
)

__version__ = "0.1.0"

__all__ = [
    "Derivation",
    "DerivationSystem",
    "IdealHandle",
    "LNDError",
    "Poly",
    "RingAutomorphism",
    "RingPresentation",
    "UniPoly",
    "apply",
    "bla_crosscheck",
    "check_well_defined",
    "commutator",
    "compose",
    "compute_preslices",
    "coordinatize_fiber",
    "coordinatize_global",
    "degenerate_fibers",
    "dependency_certificate",
    "exact_divide",
    "exp_derivation",
    "fiber_ring",
    "hermite_form",
    "ideal_membership",
    "improve_basis",
    "independence_evidence",
    "independence_rank",
    "is_locally_nilpotent",
    "jacobian_rank",
    "load_bundled",
    "load_scenario",
    "log_automorphism",
    "minimize_q",
    "normalize",
    "parse_derivation",
    "parse_element",
    "preslice_from",
    "question_probe",
    "rational_roots",
    "ring_divides",
    "run_scenario",
    "search_preslices",
    "solve_in_f",
    "univ_gcd",
    "verify_certificate",
    "verify_kernel_generator",
    "verify_module_basis",
]
