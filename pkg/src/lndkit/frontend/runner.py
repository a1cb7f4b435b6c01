"""Executing scenario commands against one validated system."""

from __future__ import annotations

import time
from fractions import Fraction

from ..derivation import DerivationSystem, verify_kernel_generator
from ..errors import LNDError, ParseError, UsageError
from ..explog import RingAutomorphism, exp_derivation, log_automorphism
from ..fibers import bla_crosscheck, degenerate_fibers, dependency_certificate, question_probe, verify_certificate
from ..improve import improve_basis, verify_module_basis
from ..slices import (
    compute_preslices,
    coordinatize_fiber,
    coordinatize_global,
    declared_preslices,
    minimize_q,
    preslice_from,
    search_preslices,
)
from .parser import parse_element, parse_rational
from .report import Entry, Report, error_dict
from .scenario import build_system


def _q(v):
    return str(Fraction(v))


class Context:
    """Shared state for one run: the system, its pre-slices, an improved basis."""

    def __init__(self, scenario, system, bound=None, cap=None, experimental=False):
        self.scenario = scenario
        self.system = system
        self.bound = bound
        self.cap = cap or scenario.cap
        self.experimental = experimental or scenario.experimental
        self._with_preslices = None
        self._families = None
        self._improved = None

    @property
    def ring(self):
        return self.scenario.ring

    def bound_param(self, params, default):
        if "bound" in params:
            return _int(params["bound"], "bound")
        return default if self.bound is None else self.bound

    def with_preslices(self):
        """The system with minimized (or declared) pre-slices, computed once."""
        if self._with_preslices is None:
            sc = self.scenario
            if sc.preslices is not None:
                self._with_preslices = declared_preslices(self.system, sc.preslices)
                self._families = None
            else:
                self._with_preslices, self._families = compute_preslices(self.system, sc.seed_bound)
        return self._with_preslices

    def improved(self):
        if self._improved is None:
            sys = self.with_preslices()
            B = improve_basis(sys)
            esys = DerivationSystem.build(B.basis, sys.f, cap=self.cap, require_ufd=False)
            esys, _ = compute_preslices(esys, self.scenario.seed_bound)
            self._improved = (B, esys)
        return self._improved


def _int(v, key):
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"option {key} expects an integer, got {v!r}") from None


def _index(params, n):
    if "index" not in params:
        raise UsageError("option index=<i> is required (1-based)")
    i = _int(params["index"], "index")
    if not 1 <= i <= n:
        raise UsageError(f"index must be between 1 and {n}")
    return i - 1


def _alpha(params):
    if "alpha" not in params:
        raise UsageError("option alpha=<rational> is required")
    return parse_rational(params["alpha"])


def _elements(ctx, text):
    return [parse_element(s, ctx.ring) for s in text.split(",") if s.strip()]


def _derivation(ctx, params):
    key = params.get("derivation", "1")
    try:
        return key, ctx.scenario.derivation(key)
    except KeyError:
        raise UsageError(f"no derivation named {key!r}") from None


def _preslice_dict(ps):
    return {
        "index": ps.index + 1,
        "p": str(ps.p),
        "q": ps.q.format(),
        "seed": None if ps.seed is None else str(ps.seed),
        "step": ps.step,
        "minimality": ps.describe_minimality(),
    }


# -- commands -----------------------------------------------------------------


def cmd_validate(ctx, params):
    sys = ctx.system
    bound = ctx.bound_param(params, 3)
    verdict = verify_kernel_generator(sys.derivations, sys.f, bound)
    names = [n for n, _ in ctx.scenario.derivations]
    return {
        "derivations": {n: str(D) for n, D in zip(names, sys.derivations)},
        "well_defined": True,
        "commuting": True,
        "nilpotency": {
            n: {"indices": dict(c.indices), "cap": c.cap} for n, c in zip(names, sys.certificates)
        },
        "rank": sys.rank.rank,
        "rank_witness": {"minor": str(sys.rank.minor), "columns": list(sys.rank.columns)},
        "kernel": {
            "generator": str(sys.f),
            "annihilated": True,
            "status": verdict.status,
            "degree_bound": verdict.degree_bound,
            "counterexample": None if verdict.counterexample is None else str(verdict.counterexample),
        },
        "declared": {"ufd": ctx.ring.ufd, "units_trivial": ctx.ring.units_trivial},
        "irreducibility_hint": ctx.ring.irreducibility_hint(),
    }


def cmd_exp(ctx, params):
    key, D = _derivation(ctx, params)
    parameter = params.get("parameter")
    sigma = exp_derivation(D, with_parameter=parameter is not None, parameter=parameter or "t", cap=ctx.cap)
    return {
        "derivation": key,
        "variables": list(sigma.ring.variables),
        "images": {n: str(v) for n, v in zip(sigma.ring.variables, sigma.images)},
        "relation_preserved": sigma.preserves_relation(),
    }


def cmd_log(ctx, params):
    R = ctx.ring
    if "map" in params:
        images = {}
        for part in params["map"].split(";"):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"map entries look like var=expr, got {part!r}")
            var, expr = part.split("=", 1)
            var = var.strip()
            if var not in R.variables:
                raise ParseError(f"unknown variable {var!r} in map")
            images[var] = parse_element(expr, R)
        sigma = RingAutomorphism.from_dict(R, images)
        source = "map"
    else:
        key, D = _derivation(ctx, params)
        sigma = exp_derivation(D, cap=ctx.cap)
        source = f"exp({key})"
    L = log_automorphism(sigma, cap=ctx.cap)
    out = {"source": source, "log": str(L), "exp_round_trip": exp_derivation(L, cap=ctx.cap) == sigma}
    if source != "map":
        out["equals_input"] = L == D
    return out


def cmd_preslice(ctx, params):
    sys = ctx.system
    i = _index(params, sys.n)
    if "seed" in params:
        ps = preslice_from(sys, i, parse_element(params["seed"], ctx.ring))
        return {"preslices": [_preslice_dict(ps)]}
    bound = ctx.bound_param(params, ctx.scenario.seed_bound)
    found = search_preslices(sys, i, bound)
    return {"seed_bound": bound, "preslices": [_preslice_dict(ps) for ps in found]}


def cmd_minimize_q(ctx, params):
    sys = ctx.system
    i = _index(params, sys.n)
    bound = ctx.bound_param(params, ctx.scenario.seed_bound)
    cands = search_preslices(sys, i, bound)
    best = minimize_q(sys, i, cands, bound=bound)
    return {
        "seed_bound": bound,
        "candidates": [c.q.format() for c in cands],
        "p": str(best.p),
        "q": best.q.format(),
        "minimality": best.describe_minimality(),
        "divides_all": all(c.q.exact_quotient(best.q) is not None for c in cands),
    }


def cmd_fibers(ctx, params):
    sys = ctx.with_preslices()
    rep = degenerate_fibers(sys)
    return {
        "preslices": [_preslice_dict(ps) for ps in sys.preslices],
        "degenerate": [{"alpha": _q(a), "indices": ", ".join(str(i + 1) for i in idx)} for a, idx in rep.degenerate.items()],
        "residual_factors": [{"index": i + 1, "factor": r.format()} for i, r in rep.residuals],
        "note": "degenerate set read off rational roots of the q_i; residual factors have no rational roots",
    }


def _certificate_dict(cert):
    return {
        "alpha": _q(cert.alpha),
        "degree_bound": cert.degree_bound,
        "coefficients": [str(c) for c in cert.coefficients],
        "residue": [str(r) for r in cert.residue],
        "verified": cert.verified,
    }


def cmd_certify_dependence(ctx, params):
    sys = ctx.with_preslices()
    alpha = _alpha(params)
    if "coefficients" in params:
        Q_coeffs = [parse_element(s, ctx.ring) for s in params["coefficients"].split(",")]
        if len(Q_coeffs) != sys.n:
            raise UsageError(f"need {sys.n} coefficients")
        cert = verify_certificate(sys, alpha, Q_coeffs)
        return {"found": cert.verified, "source": "supplied", **_certificate_dict(cert)}
    bound = ctx.bound_param(params, 2)
    cert = dependency_certificate(sys, alpha, bound)
    if cert is None:
        return {"found": False, "alpha": _q(alpha), "degree_bound": bound,
                "note": f"no dependency with coefficients of degree <= {bound}"}
    recheck = verify_certificate(sys, alpha, cert.coefficients)
    out = {"found": True, "source": "search", **_certificate_dict(cert)}
    out["verified"] = cert.verified and recheck.verified
    return out


def cmd_crosscheck(ctx, params):
    sys = ctx.with_preslices()
    alphas = [parse_rational(a) for a in params.get("alphas", "-2,-1,0,1,2").split(",") if a.strip()]
    bound = ctx.bound_param(params, 2)
    rows = bla_crosscheck(sys, alphas, bound)
    return {
        "degree_bound": bound,
        "rows": [
            {
                "alpha": _q(r.alpha),
                "q_zero": ", ".join(str(i + 1) for i in r.q_indices) or None,
                "certificate": None if r.certificate is None else "(" + ", ".join(str(c) for c in r.certificate.coefficients) + ")",
                "status": r.status,
            }
            for r in rows
        ],
        "contradictions": 0,
    }


def _matrix(M):
    return [[v.format() for v in row] for row in M]


def cmd_improve_basis(ctx, params):
    sys = ctx.with_preslices()
    B, esys = ctx.improved()
    verdict = verify_module_basis(B, sys, ctx.scenario.seed_bound)
    return {
        "basis": [str(E) for E in B.basis],
        "phi": _matrix(B.phi),
        "change": _matrix(B.change),
        "steps": [
            {"alpha": _q(s.alpha), "coefficients": ", ".join(_q(c) for c in s.coefficients),
             "replaced": s.replaced + 1, "new": str(s.new)}
            for s in B.steps
        ],
        "residual_factors": [r.format() for r in B.residual_factors],
        "checks": {name: passed for name, passed, _ in verdict.checks},
        "degenerate_before": [_q(a) for a in verdict.degenerate_before],
        "degenerate_after": [_q(a) for a in verdict.degenerate_after],
        "new_preslices": [_preslice_dict(ps) for ps in esys.preslices],
        "note": "saturation uses rational roots of det(phi) only",
    }


def _chart_dict(chart):
    return {
        "variables": list(chart.target_variables),
        "slices": [str(s) for s in chart.slices.slices],
        "chart": [{"element": str(a), "expression": chart.format(e)} for a, e in chart.expressions.items()],
        "round_trip": chart.verify(),
    }


def _queries(ctx, params):
    if "queries" in params:
        return _elements(ctx, params["queries"])
    return list(ctx.ring.gens())


def cmd_coordinatize(ctx, params):
    basis = params.get("basis", "original")
    if basis == "original":
        sys = ctx.with_preslices()
    elif basis == "improved":
        sys = ctx.improved()[1]
    else:
        raise UsageError("basis must be original or improved")
    chart = coordinatize_global(sys, _queries(ctx, params))
    out = {"basis": basis, "f": str(sys.f)}
    out.update(_chart_dict(chart))
    return out


def cmd_fiber_chart(ctx, params):
    sys = ctx.with_preslices()
    alpha = _alpha(params)
    chart = coordinatize_fiber(sys, alpha, _queries(ctx, params))
    out = {"alpha": _q(alpha)}
    out.update(_chart_dict(chart))
    return out


def cmd_probe_question(ctx, params):
    if not ctx.experimental:
        raise UsageError("probe-question is experimental; pass --experimental")
    sys = ctx.with_preslices()
    alpha = _alpha(params)
    bound = ctx.bound_param(params, 3)
    rep = question_probe(sys, alpha, bound)
    return {
        "alpha": _q(alpha),
        "degree_bound": bound,
        "degenerate": rep.degenerate,
        "found": rep.found,
        "variables": list(rep.target_variables),
        "chart": dict(rep.chart),
        "fiber_slices": list(rep.fiber_slices),
        "kernel_generators": list(rep.kernel_generators),
        "note": rep.note,
    }


DISPATCH = {
    "validate": cmd_validate,
    "exp": cmd_exp,
    "log": cmd_log,
    "preslice": cmd_preslice,
    "minimize-q": cmd_minimize_q,
    "fibers": cmd_fibers,
    "certify-dependence": cmd_certify_dependence,
    "crosscheck": cmd_crosscheck,
    "improve-basis": cmd_improve_basis,
    "coordinatize": cmd_coordinatize,
    "fiber-chart": cmd_fiber_chart,
    "probe-question": cmd_probe_question,
}


def _expected(exc, name):
    return any(cls.__name__ == name for cls in type(exc).__mro__)


def execute(ctx, command, params):
    params = dict(params)
    expect = params.pop("expect", None)
    start = time.perf_counter()
    try:
        result = DISPATCH[command](ctx, params)
    except LNDError as exc:
        status = "expected-error" if expect and _expected(exc, expect) else "error"
        return Entry(command, params, status, None, error_dict(exc), time.perf_counter() - start)
    status = "unexpected-success" if expect else "ok"
    entry = Entry(command, params, status, result, None, time.perf_counter() - start)
    if expect:
        entry.error = {"class": "UnexpectedSuccess", "message": f"expected {expect}", "exit_code": 1}
    return entry


def _header(sc):
    R = sc.ring
    return {
        "ring": {
            "variables": list(R.variables),
            "relation": None if R.relation is None else R.format(R.relation),
            "ufd": R.ufd,
            "units_trivial": R.units_trivial,
        },
        "system": {
            "derivations": {n: str(D) for n, D in sc.derivations},
            "kernel": None if sc.kernel is None else str(sc.kernel),
            "preslices": None if sc.preslices is None else [str(p) for p in sc.preslices],
            "seed_bound": sc.seed_bound,
            "cap": sc.cap,
        },
    }


def run_scenario(sc, commands=None, bound=None, cap=None, experimental=False):
    """Run ``commands`` (default: the scenario's own) and collect a report.

    Mathematical failures become entries; a scenario that fails validation
    yields a report marked rejected with no entries.
    """
    commands = sc.commands if commands is None else commands
    try:
        system = build_system(sc, cap)
    except LNDError as exc:
        return Report(sc.name, _header(sc), {"status": "rejected", "error": error_dict(exc)})
    ctx = Context(sc, system, bound=bound, cap=cap, experimental=experimental)
    report = Report(sc.name, _header(sc), {"status": "ok"})
    for cmd in commands:
        report.entries.append(execute(ctx, cmd.name, cmd.params))
    return report
