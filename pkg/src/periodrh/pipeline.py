"""End-to-end verification of one form and report serialization.

Reports are plain dicts whose numbers are decimal strings carrying a fixed
number of significant digits, so they are reproducible byte for byte.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import mpmath
from mpmath import mp

from . import circle, lfunction, periodpoly
from .checks import Check
from .errors import (
    AmbiguousAngleError,
    CoefficientFileError,
    ConvergenceError,
    DomainError,
    InconsistencyError,
    PeriodRHError,
    SpecError,
    TruncationError,
)
from .lfunction import PrecisionBudget
from .qexpansion import NewformSpec, load_spec, newform_coefficients, validate_hecke

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3
EXIT_CERTIFICATION = 4

PRECISION_ENV = "PERIODRH_PRECISION_BITS"


def default_bits():
    value = os.environ.get(PRECISION_ENV)
    if value:
        try:
            return int(value)
        except ValueError:
            raise SpecError("%s=%r is not an integer" % (PRECISION_ENV, value))
    return 128


@dataclass
class RunConfig:
    inputs: list = field(default_factory=list)
    bits: int = 128
    eps_rel: float = 1e-15
    tol_circle: float = circle.CIRCLE_TOL
    tol_residual: float = circle.RESIDUAL_TOL
    tol_identity: Optional[float] = None
    fmt: str = "json"
    out: Optional[str] = None
    criteria: bool = True
    angles: bool = True
    jobs: int = 1
    timings: bool = False

    def __post_init__(self):
        if self.bits < 53:
            raise SpecError("precision must be at least 53 bits")
        for name in ("tol_circle", "tol_residual", "eps_rel"):
            if not getattr(self, name) > 0:
                raise SpecError("%s must be positive" % name)
        if self.tol_identity is not None and not self.tol_identity > 0:
            raise SpecError("tol_identity must be positive")
        if self.fmt not in ("json", "csv", "text"):
            raise SpecError("unknown format %r" % self.fmt)
        if self.jobs < 1:
            raise SpecError("jobs must be at least 1")
        try:
            self.budget
        except ValueError as exc:
            raise SpecError(str(exc))

    @property
    def budget(self):
        return PrecisionBudget(eps_rel=self.eps_rel, bits=self.bits)

    @property
    def digits(self):
        return self.budget.digits


# -- number formatting --------------------------------------------------------


def num(x, digits):
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        # shortest decimal that round-trips, not the binary expansion
        x = mp.mpf(repr(x))
    elif isinstance(x, (mpmath.mpc, complex)):
        return {"re": num(mp.mpf(x.real), digits), "im": num(mp.mpf(x.imag), digits)}
    else:
        x = mp.mpf(x)
    if x == 0:
        return "0"
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-4, max_fixed=digits)


def check_dict(check: Check, digits):
    out = {"name": check.name, "ok": bool(check.ok), "margin": num(check.margin, digits)}
    if check.lhs is not None:
        out["lhs"] = num(check.lhs, digits)
    if check.rhs is not None:
        out["rhs"] = num(check.rhs, digits)
    if check.note:
        out["note"] = check.note
    return out


# -- the pipeline -------------------------------------------------------------


def classify(exc):
    if isinstance(exc, (SpecError, CoefficientFileError, TruncationError)):
        return EXIT_INPUT
    if isinstance(exc, ConvergenceError):
        return EXIT_CERTIFICATION
    return EXIT_INCONSISTENT


def _coefficients(spec, budget, need_fricke):
    k, N = spec.weight, spec.level
    M = lfunction.choose_truncation(k, N, budget)
    want = max(M, lfunction.fricke_truncation(k, N, budget.bits)) if need_fricke else M
    q = newform_coefficients(spec, want)
    if len(q) < M:
        raise TruncationError(M, len(q))
    return q


def _lvalues_part(report, spec, config, stage):
    budget = config.budget
    k, N = spec.weight, spec.level
    stage[0] = "coefficients"
    q = _coefficients(spec, budget, spec.sign is None)
    report["coefficients_used"] = len(q)
    stage[0] = "hecke"
    hecke = validate_hecke(q, k, N)
    if not hecke.passed:
        raise CoefficientFileError(
            "coefficients fail Hecke validation (%d violations): %s"
            % (len(hecke.violations), "; ".join(hecke.violations[:3]))
        )
    stage[0] = "sign"
    sign = lfunction.resolve_sign(q, k, N, spec.sign, budget)
    report["sign"] = sign
    report["sign_source"] = "declared" if spec.sign in (1, -1) else "detected"
    stage[0] = "lvalues"
    cv = lfunction.lambda_values(q, k, N, sign, budget)
    d = config.digits
    report["truncation"] = cv.truncation
    report["error_bound"] = num(cv.error_bound, d)
    report["fe_residual"] = num(cv.fe_residual, d)
    report["L"] = [num(v, d) for v in cv.lvalues]
    report["Lambda"] = [num(v, d) for v in cv.lambdas]
    return cv


def _header(spec, config):
    return {
        "label": spec.label,
        "weight": spec.weight,
        "level": spec.level,
        "sign": spec.sign,
        "precision_bits": config.bits,
        "significant_digits": config.digits,
    }


def _load(source):
    if isinstance(source, NewformSpec):
        return source
    return load_spec(source)


def lvalues_form(source, config: RunConfig):
    """Critical L- and Lambda-values for one form."""
    stage = ["spec"]
    report = {"label": str(source)}
    started = time.perf_counter()
    try:
        spec = _load(source)
        report = _header(spec, config)
        _lvalues_part(report, spec, config, stage)
        report["exit_code"] = EXIT_OK
    except PeriodRHError as exc:
        report["error"] = {"stage": stage[0], "type": type(exc).__name__, "message": str(exc)}
        report["exit_code"] = classify(exc)
    if config.timings:
        report["timings"] = {"total_s": "%.3f" % (time.perf_counter() - started)}
    return report


def verify_form(source, config: RunConfig):
    """Run every stage for one form; returns a serializable report dict.

    A stage error stops the pipeline but the partial report is returned,
    with ``error.stage`` naming where it happened.
    """
    stage = ["spec"]
    report = {"label": str(source)}
    timings = {}
    clock = time.perf_counter()
    unconditional = []
    circle_ok = False
    d = config.digits

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = "%.3f" % (now - clock)
        clock = now

    try:
        spec = _load(source)
        report = _header(spec, config)
        k, N, m = spec.weight, spec.level, spec.m
        cv = _lvalues_part(report, spec, config, stage)
        lap("lvalues")
        with mp.workprec(config.bits):
            fe = Check(
                "functional equation",
                cv.fe_residual <= cv.error_bound,
                cv.error_bound - cv.fe_residual,
                cv.fe_residual,
                cv.error_bound,
            )
            unconditional.append(fe)
            unconditional.extend(lfunction.check_monotonicity(cv))
            ratio_checks = list(lfunction.check_ratio_bounds(cv))

            stage[0] = "polynomials"
            rf = periodpoly.build_rf(cv)
            pf = periodpoly.build_pf(cv)
            report["period_polynomial"] = [num(c, d) for c in rf.coefficients]
            report["P"] = [num(c, d) for c in pf.coefficients]
            report["symmetry_residual"] = num(rf.symmetry_residual(), d)
            try:
                unconditional.append(periodpoly.check_identity_16(rf, pf, tol=config.tol_identity))
            except InconsistencyError as exc:
                unconditional.append(Check("r_f/P_f identity", False, -1, note=str(exc)))
            report["checks"] = [check_dict(c, d) for c in unconditional + ratio_checks]
            lap("polynomials")

            stage[0] = "roots"
            roots = circle.find_roots(rf, residual_tol=config.tol_residual)
            lap("roots")
            stage[0] = "certify"
            rep = circle.certify_circle(roots, N, config.tol_circle, config.bits)
            circle_ok = rep.passed and rep.root_count == k - 2
            stage[0] = "signchanges"
            trig = circle.trig_polynomial(pf)
            sc = circle.count_sign_changes(trig)
            report["circle"] = {
                "root_count": rep.root_count,
                "expected_roots": k - 2,
                "max_deviation": num(rep.max_deviation, d),
                "tol": num(config.tol_circle, d),
                "passed": bool(circle_ok),
                "fricke_closure": num(rep.fricke_closure, d),
                "mirror_closure": num(rep.mirror_closure, d),
                "roots": [
                    {
                        "re": num(r.real, d),
                        "im": num(r.imag, d),
                        "radial_deviation": num(dv, d),
                        "angle": num(circle.root_angle(r, N), d),
                    }
                    for r, dv in zip(rep.roots, rep.deviations)
                ],
            }
            report["trig_polynomial"] = {
                "form": "cosine" if trig.sign == 1 else "sine",
                "half_coefficients": [num(c, d) for c in trig.half_coefficients()],
            }
            report["sign_changes"] = {
                "count": sc.count,
                "expected": sc.expected,
                "in_0_pi": len(sc.in_range(0, mp.pi)),
                "passed": sc.passed,
                "indeterminate": sc.indeterminate,
                "brackets": [[num(a, 15), num(b, 15)] for a, b in sc.brackets],
            }
            lap("certify")

            if config.criteria:
                stage[0] = "criteria"
                crit = list(circle.szego_criteria(cv)) + list(circle.central_inequalities(cv))
                if m >= 2:
                    crit.append(circle.large_weight_criterion(m, N))
                    crit.extend(circle.s_bounds(periodpoly.build_qf(cv)))
                report["criteria"] = [check_dict(c, d) for c in crit]
                lap("criteria")

            if config.angles:
                stage[0] = "angles"
                try:
                    thetas = circle.predict_angles(m, N, cv.sign, config.bits)
                except (AmbiguousAngleError, DomainError) as exc:
                    report["angles"] = {"applicable": False, "reason": str(exc)}
                else:
                    match = circle.match_roots_to_angles(roots, thetas, N, k, bits=config.bits)
                    report["angles"] = {
                        "applicable": True,
                        "predicted": [num(t, d) for t in thetas],
                        "residuals": [num(r, d) for r in match.residuals],
                        "max_residual": num(match.max_residual, d),
                        "bound": num(match.bound, d),
                        "passed": match.passed,
                        "empirical_tol": num(match.empirical_tol, d),
                        "empirical_ok": match.empirical_ok,
                    }
                lap("angles")
        if not all(c.ok for c in unconditional):
            report["exit_code"] = EXIT_INCONSISTENT
        elif not circle_ok:
            report["exit_code"] = EXIT_CERTIFICATION
        else:
            report["exit_code"] = EXIT_OK
    except PeriodRHError as exc:
        report["error"] = {"stage": stage[0], "type": type(exc).__name__, "message": str(exc)}
        report["exit_code"] = classify(exc)
    report["summary"] = "pass" if report["exit_code"] == EXIT_OK else "fail"
    if config.timings:
        report["timings"] = timings
    return report


def combined_exit_code(codes):
    for code in (EXIT_INPUT, EXIT_INCONSISTENT, EXIT_CERTIFICATION):
        if code in codes:
            return code
    return EXIT_OK


def expand_inputs(paths):
    """Files as given; directories contribute their *.spec and *.txt files."""
    out = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.suffix in (".spec", ".txt")))
        else:
            out.append(p)
    return out
