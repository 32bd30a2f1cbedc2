"""Reference claims reproduced against the bundled fixtures.

Every claim is a Check whose margin is ``tol - |computed - expected|`` (or
the criterion's own margin); ``claim_checks`` evaluates them all.
"""
from __future__ import annotations

from dataclasses import dataclass
from mpmath import mp

from . import circle, lfunction, periodpoly
from .checks import Check, CheckList
from .fixtures import fixture_spec
from .lfunction import CriticalValues, PrecisionBudget
from .qexpansion import newform_coefficients

L_4_8 = ("0.3545006", "0.6900311", "0.8746953")
# ascending powers of z
RF_4_8 = ("-0.00705256701815496j", "0.0349573870", "0.0564205361j")
ROOT_4_8 = ("0.17037672", "0.30979311")
L_10_12 = ("343.041936898889", "140.422365373567", "32.9164131544840", "6.41626479306637", "1.71889934464323")
# constant term, then cos(theta) .. cos(4 theta)
COS_10_12 = ("73.5501402820398", "199.188643773093", "308.910589184567", "341.466246468159", "189.128932153817")
INTERVALS_10_12 = ((4, 5), (10, 11), (14, 15), (18, 19))
THRESHOLDS = {8: 142, 10: 64, 12: 45, 14: 42}
DELTA_TOP = ("0.114379", "0.00926927")


@dataclass
class Analysis:
    cv: CriticalValues
    rf: periodpoly.PeriodPolynomial
    pf: periodpoly.PPoly
    roots: list


def analyze(label, budget=PrecisionBudget()):
    """Critical values, r_f, P_f and the roots of r_f for a bundled fixture."""
    spec = fixture_spec(label)
    k, N = spec.weight, spec.level
    q = newform_coefficients(spec, lfunction.choose_truncation(k, N, budget))
    sign = lfunction.resolve_sign(q, k, N, spec.sign, budget)
    cv = lfunction.lambda_values(q, k, N, sign, budget)
    rf = periodpoly.build_rf(cv)
    return Analysis(cv, rf, periodpoly.build_pf(cv), circle.find_roots(rf))


def synthetic_weight4_odd(N=13, bits=128):
    """A weight-4 eps = -1 value vector: Lambda(2) = 0, Lambda(3) = -Lambda(1)."""
    cv = CriticalValues.from_lambdas([1, 0, -1], 4, N, -1, bits=bits)
    return periodpoly.build_rf(cv)


def _close(name, computed, expected, tol):
    gap = max(abs(mp.mpmathify(c) - mp.mpmathify(e)) for c, e in zip(computed, expected))
    return Check(name, gap <= tol, tol - gap, gap, tol)


def claim_checks(budget=PrecisionBudget()):
    out = CheckList()
    with mp.workprec(budget.bits):
        a = analyze("4.8.a", budget)
        out.add(_close("4.8.a L(1..3)", a.cv.lvalues, L_4_8, 5e-7))
        out.add(_close("4.8.a r_f coefficients", a.rf.coefficients, RF_4_8, 1e-9))
        x, y = (mp.mpf(v) for v in ROOT_4_8)
        want = sorted([mp.mpc(x, y), mp.mpc(-x, y)], key=lambda z: z.real)
        got = sorted([r for r in a.roots if r.imag > 0], key=lambda z: z.real)
        if len(got) == 2:
            out.add(_close("4.8.a roots", got, want, 1e-7))
        else:
            out.add(Check("4.8.a roots", False, -1, note="%d roots in upper half plane" % len(got)))
        dev = max(abs(abs(r) - 1 / (2 * mp.sqrt(2))) for r in a.roots)
        out.add(Check("4.8.a root norms", dev < 1e-9, 1e-9 - dev, dev, 1e-9))

        d = analyze("12.1.a", budget)
        dev = max(abs(abs(r) - 1) for r in d.roots)
        ok = dev < 1e-9 and len(d.roots) == 10
        out.add(Check("12.1.a ten roots on |z|=1", ok, 1e-9 - dev, dev, 1e-9))
        top, odd = (mp.mpf(v) for v in DELTA_TOP)
        out.add(
            _close(
                "12.1.a displayed combination",
                (d.rf.coefficients[10], d.rf.coefficients[9]),
                (mp.mpc(0, top * 36 / 691), 4 * odd),
                1e-5,
            )
        )

        t = analyze("10.12.a", budget)
        out.add(_close("10.12.a L(1..5)", t.cv.lvalues[:5], L_10_12, 1e-9))
        u = circle.trig_polynomial(t.pf)
        out.add(_close("10.12.a cosine coefficients", u.half_coefficients(), COS_10_12, 1e-9))
        sc = circle.count_sign_changes(u)
        upper = sc.in_range(0, mp.pi)
        windows = [(lo * mp.pi / 20, hi * mp.pi / 20) for lo, hi in INTERVALS_10_12]
        placed = len(upper) == 4 and all(w[0] < b[0] and b[1] < w[1] for b, w in zip(upper, windows))
        out.add(Check("10.12.a four sign changes in [0,pi)", placed, len(upper) - 4, len(upper), 4))

        for k, want in THRESHOLDS.items():
            got = int(mp.ceil(circle.level_threshold(k)))
            out.add(Check("(5.3) k=%d" % k, got == want, want - got, got, want))

        for m, N in circle.REFERENCE_TABLE:
            out.add(Check("(6.5) holds m=%d N=%d" % (m, N), circle.large_weight_criterion(m, N).ok, 0, m, N))
            if N > 1:
                below = circle.large_weight_criterion(m, N - 1)
                out.add(Check("(6.5) fails m=%d N=%d" % (m, N - 1), not below.ok, -below.margin, below.lhs, below.rhs))
            else:
                below = circle.large_weight_criterion(m - 1, N)
                out.add(Check("(6.5) fails m=%d N=%d" % (m - 1, N), not below.ok, -below.margin, below.lhs, below.rhs))

        for name, an in (("12.1.a", d), ("10.12.a", t)):
            cv = an.cv
            thetas = circle.predict_angles(cv.m, cv.level, cv.sign, budget.bits)
            match = circle.match_roots_to_angles(an.roots, thetas, cv.level, cv.weight, bits=budget.bits)
            ok = match.passed and match.empirical_ok
            out.add(Check("%s angle matching" % name, ok, match.empirical_tol - match.max_residual, match.max_residual, match.empirical_tol))

        N = 13
        rf = synthetic_weight4_odd(N, budget.bits)
        roots = circle.find_roots(rf)
        # theta is arg(i sqrt(N) rho), so rho = e^{i theta} / (i sqrt N)
        thetas = circle.predict_angles(1, N, -1, budget.bits)
        want = sorted((mp.expj(th) / (mp.mpc(0, 1) * mp.sqrt(N)) for th in thetas), key=lambda z: z.imag)
        got = sorted(roots, key=lambda z: z.imag)
        tol = mp.mpf(2) ** (32 - budget.bits)
        out.add(_close("k=4 eps=-1 roots at +-i/sqrt(N)", got, want, tol))
    return out

