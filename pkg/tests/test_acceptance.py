"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (also repeated in the pytest terminal summary) and then asserts.
"""
import time

import mpmath
from mpmath import mp

from conftest import ACCEPTANCE_LINES
from oracles import lambda_values_by_quadrature
from periodrh import circle, lfunction, periodpoly
from periodrh.fixtures import LABELS, fixture_spec
from periodrh.lfunction import PrecisionBudget
from periodrh.qexpansion import newform_coefficients
from periodrh.suite import (
    COS_10_12,
    DELTA_TOP,
    INTERVALS_10_12,
    L_4_8,
    L_10_12,
    RF_4_8,
    ROOT_4_8,
    THRESHOLDS,
    analyze,
    synthetic_weight4_odd,
)

BITS = 128


def verdict(n, failures, detail):
    line = "%s criterion %d: %s" % ("FAIL" if failures else "PASS", n, detail)
    if failures:
        line += " | " + "; ".join(failures)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failures, line


def gap(computed, expected):
    return max(abs(mp.mpmathify(c) - mp.mpmathify(e)) for c, e in zip(computed, expected))


def fmt(x):
    return mpmath.nstr(x, 3)


def test_criterion_1():
    failures = []
    with mp.workprec(BITS):
        start = time.perf_counter()
        cv = analyze("4.8.a").cv
        elapsed = time.perf_counter() - start
        err = gap(cv.lvalues, L_4_8)
    if not err <= 5e-7:
        failures.append("L(1..3) off by %s" % fmt(err))
    if not elapsed < 1:
        failures.append("runtime %.3f s" % elapsed)
    verdict(1, failures, "4.8.a L(1..3) max error %s (tol 5e-7), runtime %.3f s (< 1 s)" % (fmt(err), elapsed))


def test_criterion_2():
    failures = []
    with mp.workprec(BITS):
        a = analyze("4.8.a")
        coeff_err = gap(a.rf.coefficients, RF_4_8)
        x, y = (mp.mpf(v) for v in ROOT_4_8)
        want = sorted([mp.mpc(x, y), mp.mpc(-x, y)], key=lambda z: z.real)
        got = sorted([r for r in a.roots if r.imag > 0], key=lambda z: z.real)
        root_err = gap(got, want) if len(got) == 2 else mp.inf
        norm_err = max(abs(abs(r) - 1 / (2 * mp.sqrt(2))) for r in a.roots)
    if not coeff_err <= 1e-9:
        failures.append("r_f coefficients off by %s" % fmt(coeff_err))
    if not root_err <= 1e-7:
        failures.append("roots off by %s" % fmt(root_err))
    if not norm_err <= 1e-9:
        failures.append("root norms off by %s" % fmt(norm_err))
    verdict(
        2,
        failures,
        "4.8.a r_f coefficients %s (tol 1e-9), roots %s (tol 1e-7), norms %s (tol 1e-9)"
        % (fmt(coeff_err), fmt(root_err), fmt(norm_err)),
    )


def test_criterion_3():
    failures = []
    with mp.workprec(BITS):
        d = analyze("12.1.a")
        norm_err = max(abs(abs(r) - 1) for r in d.roots)
        top, odd = (mp.mpf(v) for v in DELTA_TOP)
        coeff_err = gap((d.rf.coefficients[10], d.rf.coefficients[9]), (mp.mpc(0, top * 36 / 691), 4 * odd))
    if len(d.roots) != 10:
        failures.append("%d roots" % len(d.roots))
    if not norm_err < 1e-9:
        failures.append("||rho| - 1| = %s" % fmt(norm_err))
    if not coeff_err <= 1e-5:
        failures.append("z^10, z^9 coefficients off by %s" % fmt(coeff_err))
    verdict(
        3,
        failures,
        "Delta %d roots, max ||rho|-1| %s (tol 1e-9), z^10/z^9 coefficients %s (tol 1e-5)"
        % (len(d.roots), fmt(norm_err), fmt(coeff_err)),
    )


def test_criterion_4():
    failures = []
    with mp.workprec(BITS):
        t = analyze("10.12.a")
        l_err = gap(t.cv.lvalues[:5], L_10_12)
        u = circle.trig_polynomial(t.pf)
        cos_err = gap(u.half_coefficients(), COS_10_12)
        upper = circle.count_sign_changes(u).in_range(0, mp.pi)
        windows = [(lo * mp.pi / 20, hi * mp.pi / 20) for lo, hi in INTERVALS_10_12]
        placed = len(upper) == 4 and all(w[0] < b[0] and b[1] < w[1] for b, w in zip(upper, windows))
    if u.sign != 1:
        failures.append("expected a cosine polynomial")
    if not l_err <= 1e-9:
        failures.append("L(1..5) off by %s" % fmt(l_err))
    if not cos_err <= 1e-9:
        failures.append("cosine coefficients off by %s" % fmt(cos_err))
    if not placed:
        failures.append("sign changes in [0,pi): %s" % [(float(a), float(b)) for a, b in upper])
    verdict(
        4,
        failures,
        "10.12.a L(1..5) %s (tol 1e-9), cosine coefficients %s (tol 1e-9), %d sign changes in [0,pi) in the windows"
        % (fmt(l_err), fmt(cos_err), len(upper)),
    )


def test_criterion_5():
    with mp.workprec(BITS):
        got = {k: int(mp.ceil(circle.level_threshold(k))) for k in THRESHOLDS}
    failures = ["k=%d: %d, expected %d" % (k, got[k], want) for k, want in THRESHOLDS.items() if got[k] != want]
    verdict(5, failures, "(5.3) thresholds %s" % ", ".join("k=%d -> %d" % kv for kv in got.items()))


def test_criterion_6():
    failures = []
    start = time.perf_counter()
    with mp.workprec(BITS):
        for m, N in circle.REFERENCE_TABLE:
            if not circle.large_weight_criterion(m, N).ok:
                failures.append("(6.5) fails at (%d, %d)" % (m, N))
            below = (m, N - 1) if N > 1 else (m - 1, N)
            if circle.large_weight_criterion(*below).ok:
                failures.append("(6.5) already holds at (%d, %d)" % below)
    elapsed = time.perf_counter() - start
    if not elapsed < 1:
        failures.append("runtime %.3f s" % elapsed)
    verdict(6, failures, "(6.5) table, %d pairs, runtime %.3f s (< 1 s)" % (len(circle.REFERENCE_TABLE), elapsed))


def _properties(label, budget):
    spec = fixture_spec(label)
    k, N = spec.weight, spec.level
    M = max(lfunction.choose_truncation(k, N, budget), lfunction.fricke_truncation(k, N, budget.bits))
    q = newform_coefficients(spec, M)
    cv = lfunction.lambda_values(q, k, N, lfunction.resolve_sign(q, k, N, spec.sign, budget), budget)
    bad = []
    fe = max(abs(cv.Lambda(s) - cv.sign * cv.Lambda(k - s)) for s in range(1, k))
    fe = max(fe, cv.fe_residual)
    if not fe < cv.error_bound:
        bad.append("functional equation residual %s >= %s" % (fmt(fe), fmt(cv.error_bound)))
    mono = lfunction.check_monotonicity(cv)
    if not all(c.ok for c in mono):
        bad.append("monotonicity: " + ", ".join(c.name for c in mono if not c.ok))
    rf, pf = periodpoly.build_rf(cv), periodpoly.build_pf(cv)
    try:
        # tolerance is ten times the working error, sampled at 4m+1 points
        periodpoly.check_identity_16(rf, pf)
    except Exception as exc:
        bad.append("identity: %s" % exc)
    ref = lambda_values_by_quadrature(q.coefficients, k, N, cv.sign)
    scale = max(abs(v) for v in cv.lambdas)
    quad = max(abs(cv.Lambda(s) - v) for s, v in enumerate(ref, 1))
    if not quad <= 10 * budget.eps_rel * scale:
        bad.append("quadrature differs by %s" % fmt(quad / scale))
    roots = circle.find_roots(rf)
    rep = circle.certify_circle(roots, N, bits=budget.bits)
    sc = circle.count_sign_changes(circle.trig_polynomial(pf))
    if rep.root_count != k - 2:
        bad.append("%d roots" % rep.root_count)
    if sc.count != k - 2:
        bad.append("%d sign changes" % sc.count)
    if not rep.fricke_closure < 1e-9:
        bad.append("Fricke closure %s" % fmt(rep.fricke_closure))
    return bad


def test_criterion_7():
    budget = PrecisionBudget()
    failures = []
    with mp.workprec(budget.bits):
        for label in LABELS:
            failures.extend("%s %s" % (label, b) for b in _properties(label, budget))
    verdict(7, failures, "property suite over %d fixtures" % len(LABELS))


def test_criterion_8():
    failures = []
    details = []
    with mp.workprec(BITS):
        for label in ("12.1.a", "10.12.a"):
            cv = analyze(label).cv
            roots = analyze(label).roots
            thetas = circle.predict_angles(cv.m, cv.level, cv.sign, BITS)
            match = circle.match_roots_to_angles(roots, thetas, cv.level, cv.weight, bits=BITS)
            bound = mp.mpf(10) ** 9 / (2 ** cv.weight * mp.sqrt(cv.level))
            details.append("%s residual %s" % (label, fmt(match.max_residual)))
            if not match.max_residual < bound:
                failures.append("%s residual %s >= %s" % (label, fmt(match.max_residual), fmt(bound)))
            if not match.max_residual < 0.1:
                failures.append("%s residual %s >= 0.1" % (label, fmt(match.max_residual)))
        N = 13
        roots = circle.find_roots(synthetic_weight4_odd(N, BITS))
        want = sorted(
            (mp.expj(th) / (mp.mpc(0, 1) * mp.sqrt(N)) for th in circle.predict_angles(1, N, -1, BITS)),
            key=lambda z: z.imag,
        )
        err = gap(sorted(roots, key=lambda z: z.imag), want)
        tol = mp.mpf(2) ** (32 - BITS)
        details.append("k=4 eps=-1 roots at +-i/sqrt(13) to %s" % fmt(err))
        if len(roots) != 2 or not err <= tol:
            failures.append("synthetic roots off by %s" % fmt(err))
    verdict(8, failures, "; ".join(details))
