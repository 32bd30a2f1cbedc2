"""Zeros of r_f on |z| = 1/sqrt(N): roots, sign changes, criteria, angles."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional

import mpmath
from mpmath import mp

from .checks import Check, CheckList
from .errors import AmbiguousAngleError, ConvergenceError, DomainError, MatchingError
from .lfunction import CriticalValues
from .periodpoly import PeriodPolynomial, PPoly, QEvaluator
from .special import zeta

MAX_ITER = 200
CIRCLE_TOL = 1e-9
RESIDUAL_TOL = 1e-12
ANGLE_CONSTANT = 1e9
EMPIRICAL_ANGLE_TOL = 0.1

# (m, N(m)) from the large-weight table
REFERENCE_TABLE = (
    (29, 1), (21, 2), (18, 3), (16, 4), (14, 5), (13, 6),
    (12, 7), (11, 9), (10, 11), (9, 14), (8, 20), (7, 28),
)


# -- roots --------------------------------------------------------------------


def _horner(coeffs, z):
    acc = mp.zero
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def find_roots(rf: PeriodPolynomial, max_iter=MAX_ITER, residual_tol=RESIDUAL_TOL):
    """All k-2 roots of r_f by Aberth's simultaneous iteration.

    Seeds sit on |z| = 1/sqrt(N) at half-spacing offsets, turned by a small
    fixed extra angle so that no seed pair is exactly mirror-symmetric.
    """
    coeffs = list(rf.coefficients)
    with mp.workprec(rf.bits):
        scale = max(abs(c) for c in coeffs)
        if scale == 0:
            raise DomainError("zero polynomial has no roots to find")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        d = len(coeffs) - 1
        if d < 1:
            raise DomainError("r_f is constant")
        if abs(coeffs[-1]) < scale * mp.mpf(2) ** (-rf.bits // 2):
            warnings.warn("leading coefficient of r_f is tiny; roots are ill-conditioned")
        dcoeffs = [n * c for n, c in enumerate(coeffs)][1:]
        r0 = 1 / mp.sqrt(rf.level)
        z = [r0 * mp.expjpi((2 * j + 1.1) / mp.mpf(d)) for j in range(d)]
        eps = mp.mpf(2) ** (24 - rf.bits)
        for _ in range(max_iter):
            worst = mp.zero
            for j in range(d):
                p = _horner(coeffs, z[j])
                if p == 0:
                    continue
                ratio = p / _horner(dcoeffs, z[j])
                repel = mpmath.fsum(1 / (z[j] - z[l]) for l in range(d) if l != j)
                step = ratio / (1 - ratio * repel)
                z[j] -= step
                worst = max(worst, abs(step) / abs(z[j]))
            if worst < eps:
                break
        else:
            res = [abs(_horner(coeffs, r)) for r in z]
            raise ConvergenceError("Aberth iteration did not converge", z, res)
        # one polishing pass of Newton steps on each root
        for j in range(d):
            dp = _horner(dcoeffs, z[j])
            if dp != 0:
                z[j] -= _horner(coeffs, z[j]) / dp
        res = [abs(_horner(coeffs, r)) for r in z]
        if max(res) > residual_tol * scale:
            raise ConvergenceError("root residual %s too large" % mpmath.nstr(max(res), 5), z, res)
    return sorted(z, key=lambda r: (float(mp.arg(r)), float(abs(r))))


def hausdorff(a, b):
    if not a and not b:
        return mp.zero
    return max(
        max(min(abs(x - y) for y in b) for x in a),
        max(min(abs(x - y) for x in a) for y in b),
    )


@dataclass
class CircleReport:
    roots: list
    level: int
    deviations: list
    max_deviation: object
    tol: float
    passed: bool
    fricke_closure: object = None
    mirror_closure: object = None
    sign_changes: Optional["SignChanges"] = None
    angles: Optional["AngleMatch"] = None

    @property
    def root_count(self):
        return len(self.roots)


def certify_circle(roots, N, tol=CIRCLE_TOL, bits=128) -> CircleReport:
    """Radial deviations |sqrt(N)|rho| - 1| and closure of the root set."""
    with mp.workprec(bits):
        sqN = mp.sqrt(N)
        dev = [abs(sqN * abs(r) - 1) for r in roots]
        worst = max(dev) if dev else mp.zero
        fricke = hausdorff(roots, [-1 / (N * r) for r in roots]) if roots else mp.zero
        mirror = hausdorff(roots, [-mp.conj(r) for r in roots]) if roots else mp.zero
    return CircleReport(
        roots=list(roots),
        level=N,
        deviations=dev,
        max_deviation=worst,
        tol=tol,
        passed=bool(worst < tol),
        fricke_closure=fricke,
        mirror_closure=mirror,
    )


# -- the trigonometric polynomial --------------------------------------------


class TrigPolynomial:
    """u(theta) = P_f(e^{i theta}) + eps P_f(e^{-i theta}), as a real function.

    eps = +1: 2 p_0 + 2 sum p_j cos(j theta).
    eps = -1: the value is 2i sum p_j sin(j theta); u returns 2 sum p_j sin(j theta).
    """

    def __init__(self, coefficients, sign, bits=128):
        self.coefficients = tuple(coefficients)
        self.sign = sign
        self.bits = bits

    @property
    def m(self):
        return len(self.coefficients) - 1

    def __call__(self, theta):
        with mp.workprec(self.bits):
            theta = mp.mpf(theta)
            p = self.coefficients
            if self.sign == 1:
                acc = p[0] + mpmath.fsum(p[j] * mp.cos(j * theta) for j in range(1, len(p)))
            else:
                acc = mpmath.fsum(p[j] * mp.sin(j * theta) for j in range(1, len(p)))
            return 2 * acc

    def half_coefficients(self):
        """Coefficients of u/2: constant term first for cosines, then j = 1..m."""
        return self.coefficients if self.sign == 1 else (mp.zero,) + self.coefficients[1:]

    def with_bits(self, bits):
        return TrigPolynomial(self.coefficients, self.sign, bits)


def trig_polynomial(pf: PPoly, sign=None) -> TrigPolynomial:
    sign = pf.sign if sign is None else sign
    coeffs = pf.coefficients
    if sign == -1:
        coeffs = (mp.zero,) + tuple(coeffs[1:])
    return TrigPolynomial(coeffs, sign, pf.bits)


@dataclass
class SignChanges:
    count: int
    brackets: list
    expected: int
    indeterminate: bool = False
    grid: int = 0

    @property
    def passed(self):
        return self.count == self.expected and not self.indeterminate

    def in_range(self, lo, hi):
        return [b for b in self.brackets if lo <= b[0] and b[1] <= hi]


def _bisect(u, a, b, ua, width):
    while b - a > width:
        mid = (a + b) / 2
        um = u(mid)
        if um == 0:
            return mid, mid
        if (um > 0) == (ua > 0):
            a, ua = mid, um
        else:
            b = mid
    return a, b


def _scan(u, grid, width):
    two_pi = 2 * mp.pi
    thetas = [(i + mp.mpf(1) / 2) * two_pi / grid for i in range(grid)]
    vals = [u(t) for t in thetas]
    scale = max(abs(v) for v in vals)
    near = scale * mp.mpf(2) ** (-u.bits // 2)
    flagged = any(abs(v) <= near for v in vals)
    brackets = []
    for i in range(grid):
        a, ua = thetas[i], vals[i]
        j = (i + 1) % grid
        b, ub = thetas[j] + (two_pi if j == 0 else 0), vals[j]
        # an exact zero at a grid point is credited to the interval it closes
        if ua != 0 and (ub == 0 or (ua > 0) != (ub > 0)):
            lo, hi = _bisect(u, a, b, ua, width)
            shift = two_pi if lo >= two_pi else 0
            brackets.append((lo - shift, hi - shift))
    brackets.sort()
    return brackets, flagged


def count_sign_changes(u: TrigPolynomial, m=None, N=None, grid=None, width=1e-12) -> SignChanges:
    """Sign changes of u over one period, each bracketed to ``width``.

    The grid is offset by half a step so that the forced zeros of the sine
    form at 0 and pi fall strictly inside brackets.  If the count is short and
    some grid value is numerically zero (a possible tangency), the scan is
    repeated once at doubled precision on a finer grid before the result is
    declared indeterminate.
    """
    m = u.m if m is None else m
    grid = grid or max(64 * m, 256)
    expected = 2 * m
    with mp.workprec(u.bits):
        brackets, flagged = _scan(u, grid, mp.mpf(width))
    if len(brackets) != expected and flagged:
        finer = u.with_bits(2 * u.bits)
        with mp.workprec(finer.bits):
            brackets, flagged = _scan(finer, 4 * grid, mp.mpf(width))
        return SignChanges(len(brackets), brackets, expected, flagged and len(brackets) != expected, 4 * grid)
    return SignChanges(len(brackets), brackets, expected, False, grid)


def szego_intervals(m):
    """((l - 1/2) pi/(m + 1/2), (l + 1/2) pi/(m + 1/2)) for l = 1..m."""
    h = mp.mpf(m) + mp.mpf(1) / 2
    return [((l - mp.mpf(1) / 2) * mp.pi / h, (l + mp.mpf(1) / 2) * mp.pi / h) for l in range(1, m + 1)]


# -- criteria -----------------------------------------------------------------


def level_threshold(k):
    """max_{1<=j<=k/2-2} (2pi/(k/2-j-1))^2 zeta(j+1/2)^4 / zeta(j+3/2)^4, or None for k = 4."""
    half = k // 2
    values = [
        (2 * mp.pi / (half - j - 1)) ** 2 * (zeta(j + mp.mpf(1) / 2) / zeta(j + mp.mpf(3) / 2)) ** 4
        for j in range(1, half - 1)
    ]
    return max(values) if values else None


def szego_criteria(cv: CriticalValues) -> CheckList:
    k, m, c, N = cv.weight, cv.m, cv.center, cv.level
    out = CheckList()
    with mp.workprec(cv.bits):
        lhs = comb(2 * m, m) * cv.Lambda(c)
        rhs = 2 * comb(2 * m, m + 1) * cv.Lambda(c + 1)
        out.add(Check("(5.1)", rhs - lhs >= 0, rhs - lhs, lhs, rhs))
        for j in range(1, m):
            lhs = comb(2 * m, m + j) * cv.Lambda(c + j)
            rhs = comb(2 * m, m + j + 1) * cv.Lambda(c + j + 1)
            out.add(Check("(5.2) j=%d" % j, rhs - lhs >= 0, rhs - lhs, lhs, rhs))
        threshold = level_threshold(k)
        if threshold is None:
            out.add(Check("(5.3)", True, mp.inf, N, None, "no (5.2) conditions for k=4"))
        else:
            out.add(Check("(5.3)", N >= threshold, N - threshold, N, threshold,
                          "N >= %d sufficient" % int(mp.ceil(threshold))))
    return out


def large_weight_sides(m, N):
    """Both sides of the large-weight sufficient condition."""
    x = 2 * mp.pi / mp.sqrt(N)
    lhs = mp.mpf(16) / 5 / mp.mpf(2) ** m * (mp.exp(2 * x) - 1) + mp.mpf(33) / 4 / factorial(m - 1) * x ** (m - 1)
    return lhs, mp.exp(-x)


def large_weight_criterion(m, N) -> Check:
    if m < 2 or N < 1:
        raise DomainError("need m >= 2 and N >= 1")
    lhs, rhs = large_weight_sides(m, N)
    return Check("(6.5)", lhs < rhs, rhs - lhs, lhs, rhs)


def least_level(m, limit=10**6):
    """Least N with the large-weight condition; it is monotone in N."""
    N = 1
    while not large_weight_criterion(m, N).ok:
        N += 1
        if N > limit:
            raise DomainError("no level up to %d satisfies (6.5) for m=%d" % (limit, m))
    return N


def large_weight_table(ms=None):
    ms = [m for m, _ in REFERENCE_TABLE] if ms is None else ms
    return [(m, least_level(m)) for m in ms]


def s_bound_63(m, N):
    x = 2 * mp.pi / mp.sqrt(N)
    return mp.mpf(16) / 5 / mp.mpf(2) ** m * (mp.exp(2 * x) - 1) + mp.mpf(17) / 4 / factorial(m - 1) * x ** (m - 1)


def s_bound_64(m, N):
    return large_weight_sides(m, N)[0]


def s_bounds(qf: QEvaluator, grid=None) -> CheckList:
    """Grid maxima of |S1+S2+S3|, |S1+S2| and |S1|+|S2|+|S3| against their bounds."""
    m, N = qf.m, qf.N
    grid = grid or 16 * m + 1
    out = CheckList()
    with mp.workprec(qf.bits):
        tot = pair = summed = mp.zero
        for i in range(grid):
            z = mp.expjpi(mp.mpf(2 * i) / grid)
            _, s1, s2, s3 = qf.decompose(z)
            tot = max(tot, abs(s1 + s2 + s3))
            pair = max(pair, abs(s1 + s2))
            summed = max(summed, abs(s1) + abs(s2) + abs(s3))
        floor = mp.exp(-qf.x)
        b63, b64 = s_bound_63(m, N), s_bound_64(m, N)
        out.add(Check("(6.2)", tot < floor, floor - tot, tot, floor))
        out.add(Check("(6.3)", pair <= b63, b63 - pair, pair, b63))
        note = "" if m >= 7 else "bound derived for m >= 7 only"
        out.add(Check("(6.4)", summed <= b64 or m < 7, b64 - summed, summed, b64, note))
    return out


def central_inequalities(cv: CriticalValues) -> CheckList:
    out = CheckList()
    if cv.sign != 1:
        return out
    k, m, c = cv.weight, cv.m, cv.center
    lam = cv.Lambda
    with mp.workprec(cv.bits):
        v = comb(2 * m, m) * (-1) ** m * lam(c) / 2
        v += mpmath.fsum((-1) ** j * comb(2 * m, 2 * m - j) * lam(k - 1 - j) for j in range(m))
        out.add(Check("(1.7)", v > 0, v, v, 0))
        if k == 6:
            lhs, rhs = lam(5) + 3 * lam(3), 4 * lam(4)
            out.add(Check("(4.2)", lhs > rhs, lhs - rhs, lhs, rhs))
            lhs, rhs = lam(5) ** 2 + 2 * lam(4) ** 2, 3 * lam(3) * lam(5)
            tol = 4 * cv.error_bound * lam(5)
            out.add(Check("(4.3)", lhs - rhs >= -tol, lhs - rhs, lhs, rhs))
    return out


# -- predicted angles ---------------------------------------------------------


def predict_angles(m, N, sign, bits=128):
    """theta_l in [0, 2pi) solving m theta - (2pi/sqrt N) sin theta = target_l.

    target_l = pi/2 + l pi (eps = +1) or l pi (eps = -1), l = 0..2m-1.  For
    weight 4 with eps = -1 the zeros are exactly at theta = 0 and pi.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    with mp.workprec(bits):
        if m == 1:
            if sign == -1:
                return [mp.zero, +mp.pi]
            raise DomainError("weight 4 with eps = +1 has no closed-form angle prediction")
        if m < 1:
            raise DomainError("m must be positive")
        a = 2 * mp.pi / mp.sqrt(N)
        two_pi = 2 * mp.pi

        def phase(t):
            return m * t - a * mp.sin(t)

        cuts = [mp.zero, two_pi]
        if a > m:
            tc = mp.acos(m / a)
            cuts = [mp.zero, tc, two_pi - tc, two_pi]
        width = mp.mpf(2) ** (20 - bits)
        thetas = []
        for ell in range(2 * m):
            target = (ell + (mp.mpf(1) / 2 if sign == 1 else 0)) * mp.pi
            found = []
            for lo, hi in zip(cuts, cuts[1:]):
                flo, fhi = phase(lo) - target, phase(hi) - target
                if flo == 0:
                    found.append(lo)
                    continue
                if fhi == 0 or (flo > 0) == (fhi > 0):
                    continue
                a_, b_ = lo, hi
                while b_ - a_ > width:
                    mid = (a_ + b_) / 2
                    if (phase(mid) - target > 0) == (flo > 0):
                        a_ = mid
                    else:
                        b_ = mid
                found.append((a_ + b_) / 2)
            found = [t for t in found if t < two_pi]
            if len(found) != 1:
                raise AmbiguousAngleError(
                    "angle equation for l=%d has %d solutions in [0, 2pi)" % (ell, len(found))
                )
            thetas.append(found[0])
        return thetas


@dataclass
class AngleMatch:
    predicted: list
    observed: list
    residuals: list
    max_residual: object
    bound: object
    passed: bool
    empirical_tol: float = EMPIRICAL_ANGLE_TOL
    empirical_ok: bool = True
    pairs: list = field(default_factory=list)


def _circular(a, b):
    d = abs(a - b) % (2 * mp.pi)
    return min(d, 2 * mp.pi - d)


def root_angle(rho, N):
    """arg(i sqrt(N) rho) in [0, 2pi)."""
    return mp.arg(mp.mpc(0, 1) * mp.sqrt(N) * rho) % (2 * mp.pi)


def match_roots_to_angles(
    roots, thetas, N, k, constant=ANGLE_CONSTANT, empirical_tol=EMPIRICAL_ANGLE_TOL, bits=128
):
    """Greedy nearest matching of observed root angles to predicted angles."""
    if isinstance(roots, CircleReport):
        roots = roots.roots
    if len(roots) != len(thetas):
        raise MatchingError("%d roots but %d predicted angles" % (len(roots), len(thetas)))
    with mp.workprec(bits):
        observed = [root_angle(r, N) for r in roots]
        candidates = sorted(
            (_circular(o, t), i, j) for i, o in enumerate(observed) for j, t in enumerate(thetas)
        )
        bound = constant / (mp.mpf(2) ** k * mp.sqrt(N))
    used_roots, used_angles, pairs = set(), set(), []
    for dist, i, j in candidates:
        if i in used_roots or j in used_angles:
            continue
        used_roots.add(i)
        used_angles.add(j)
        pairs.append((i, j, dist))
    if len(pairs) != len(roots):
        raise MatchingError("matching is not a bijection")
    pairs.sort()
    residuals = [d for _, _, d in pairs]
    worst = max(residuals) if residuals else mp.zero
    return AngleMatch(
        predicted=list(thetas),
        observed=observed,
        residuals=residuals,
        max_residual=worst,
        bound=bound,
        passed=bool(worst <= bound),
        empirical_tol=empirical_tol,
        empirical_ok=bool(worst <= empirical_tol),
        pairs=pairs,
    )
