"""Critical values of the completed L-function of a newform.

Lambda(f, s) = (sqrt(N)/2pi)^s Gamma(s) L(f, s) is evaluated at the
integers s = 1, ..., k-1 from the Mellin integral of f(iy), split at a
point y = c/sqrt(N) and folded back with the Fricke involution:

    Lambda(s) = sum_n a(n) [ u^s Gamma(s, 2 pi n c/sqrt N)
                             + eps u^{k-s} Gamma(k-s, 2 pi n/(c sqrt N)) ],
    u = sqrt(N) / (2 pi n).

The value is independent of c only when the coefficients and the sign are
right.  Values are reported from c = 1; a second evaluation at
c = CHECK_SPLIT supplies the functional-equation residual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from .checks import Check, CheckList
from .errors import AmbiguousSignError, InconsistencyError, TruncationError
from .special import incomplete_gamma_int, zeta

CHECK_SPLIT = 1.25
# how much larger the rejected sign's residual must be than the error bound
SIGN_SEPARATION = 1e3


@dataclass(frozen=True)
class PrecisionBudget:
    eps_rel: float = 1e-15
    bits: int = 128
    guard: int = 16

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError("working precision must be at least 53 bits")
        if not 0 < self.guard < self.bits:
            raise ValueError("guard bits must be in (0, bits)")
        if not self.eps_rel > 0:
            raise ValueError("target relative error must be positive")
        if self.eps_rel < 2.0 ** (self.guard - self.bits):
            raise ValueError(
                "eps_rel=%g is below what %d bits (%d guard) can realize"
                % (self.eps_rel, self.bits, self.guard)
            )

    @property
    def unit_roundoff(self):
        return mp.mpf(2) ** (self.guard - self.bits)

    @property
    def digits(self):
        """Significant decimal digits worth printing."""
        return int((self.bits - self.guard) * math.log10(2))

    def doubled(self):
        return PrecisionBudget(self.eps_rel, 2 * self.bits, self.guard)


@dataclass(frozen=True)
class CriticalValues:
    weight: int
    level: int
    sign: int
    lambdas: tuple
    lvalues: tuple
    truncation: int = 0
    error_bound: object = 0
    fe_residual: object = 0
    bits: int = 128

    @property
    def m(self):
        return (self.weight - 2) // 2

    @property
    def center(self):
        return self.weight // 2

    def Lambda(self, s):
        if not 1 <= s <= self.weight - 1:
            raise IndexError("s=%d outside the critical strip 1..%d" % (s, self.weight - 1))
        return self.lambdas[s - 1]

    def L(self, s):
        if not 1 <= s <= self.weight - 1:
            raise IndexError("s=%d outside the critical strip 1..%d" % (s, self.weight - 1))
        return self.lvalues[s - 1]

    @classmethod
    def from_lambdas(cls, lambdas, k, N, sign, error_bound=0, bits=128):
        """Build from a Lambda vector (synthetic data, external values)."""
        if len(lambdas) != k - 1:
            raise ValueError("need %d values, got %d" % (k - 1, len(lambdas)))
        with mp.workprec(bits):
            lam = tuple(mp.mpf(v) for v in lambdas)
            lv = tuple(lambda_to_l(v, s, N) for s, v in enumerate(lam, 1))
        return cls(k, N, sign, lam, lv, 0, mp.mpf(error_bound), mp.zero, bits)


def lambda_to_l(value, s, N):
    return value * (2 * mp.pi / mp.sqrt(N)) ** s / mp.gamma(s)


def l_to_lambda(value, s, N):
    return value * (mp.sqrt(N) / (2 * mp.pi)) ** s * mp.gamma(s)


# -- truncation ---------------------------------------------------------------


def lambda_scale(k, N):
    """A lower bound for Lambda(f, k-1), the largest critical value.

    |L(f, s)| >= (zeta(2u)/zeta(u))^2 with u = s - (k-1)/2 on the Euler
    product side, here at s = k-1.
    """
    with mp.workprec(53):
        u = mp.mpf(k - 1) / 2
        lower_l = (zeta(2 * u) / zeta(u)) ** 2
        return (mp.sqrt(N) / (2 * mp.pi)) ** (k - 1) * mp.factorial(k - 2) * lower_l


@lru_cache(maxsize=4096)
def _envelope(n, k, N, split):
    # n^{(k+1)/2} bounds |a(n)| (d(n) <= n times Deligne); max over s of the kernel
    with mp.workprec(53):
        u = mp.sqrt(N) / (2 * mp.pi * n)
        x1 = 2 * mp.pi * n * split / mp.sqrt(N)
        x2 = 2 * mp.pi * n / (split * mp.sqrt(N))
        kern = max(
            u**s * incomplete_gamma_int(s, x1) + u ** (k - s) * incomplete_gamma_int(k - s, x2)
            for s in range(1, k)
        )
        return float(mp.mpf(n) ** (mp.mpf(k + 1) / 2) * kern)


def _envelope_both(n, k, N, split):
    return max(_envelope(n, k, N, 1.0), _envelope(n, k, N, float(split)))


def _tail_table(k, N, split, stop):
    """Envelope values E(1..n_end) and a bound for sum_{n > n_end} E(n)."""
    values = []
    n = 1
    while True:
        e = _envelope_both(n, k, N, split)
        values.append(e)
        if n > 2 and values[-1] < values[-2] and e < stop:
            r = values[-1] / values[-2]
            if r < 0.9:
                return values, e * r / (1 - r)
        n += 1


def tail_bound(k, N, M, split=CHECK_SPLIT):
    """Bound on |sum_{n>M} a(n) kernel_n(s)|, uniformly in s."""
    stop = 1e-40 * float(lambda_scale(k, N))
    values, closing = _tail_table(k, N, split, stop)
    return math.fsum(values[M:]) + closing


def choose_truncation(k, N, budget=PrecisionBudget(), split=CHECK_SPLIT):
    """Smallest M whose series tail is below eps_rel times the Lambda scale."""
    target = budget.eps_rel * float(lambda_scale(k, N))
    values, closing = _tail_table(k, N, split, 1e-6 * target)
    tail = closing
    tails = [0.0] * (len(values) + 1)
    tails[len(values)] = tail
    for i in range(len(values) - 1, -1, -1):
        tail += values[i]
        tails[i] = tail
    for M in range(1, len(values) + 1):
        if tails[M] < target:
            return M
    return len(values)


def fricke_truncation(k, N, bits=128, y=None):
    """Coefficients needed to evaluate f(iy) to ``bits`` at y = 1/(2 sqrt N)."""
    y = 1 / (2 * math.sqrt(N)) if y is None else y
    log_target = -bits * math.log(2)
    n = 1
    while (k + 1) / 2 * math.log(n) - 2 * math.pi * n * y > log_target or n < 3:
        n += 1
    return n


# -- the series ---------------------------------------------------------------


def _pieces(coeffs, k, N, split):
    """Per-s sums A(s), B(s) with Lambda = A + eps B, and their absolute sums."""
    sqN = mp.sqrt(N)
    two_pi = 2 * mp.pi
    split = mp.mpf(split)
    A = [mp.zero] * (k - 1)
    B = [mp.zero] * (k - 1)
    absum = mp.zero
    for n, an in enumerate(coeffs, 1):
        if an == 0:
            continue
        u = sqN / (two_pi * n)
        x1 = two_pi * n * split / sqN
        x2 = two_pi * n / (split * sqN)
        for s in range(1, k):
            ta = an * u**s * incomplete_gamma_int(s, x1)
            tb = an * u ** (k - s) * incomplete_gamma_int(k - s, x2)
            A[s - 1] += ta
            B[s - 1] += tb
            absum = max(absum, abs(ta) + abs(tb))
    return A, B, absum


def _residual(values, k, sign):
    return max(abs(values[s - 1] - sign * values[k - s - 1]) for s in range(1, k))


@dataclass
class _Evaluation:
    k: int
    N: int
    M: int
    sym: tuple
    chk: tuple
    error_bound: object

    def lambdas(self, sign, which="sym"):
        A, B = self.sym if which == "sym" else self.chk
        return [a + sign * b for a, b in zip(A, B)]

    def residual(self, sign):
        return _residual(self.lambdas(sign, "chk"), self.k, sign)


def _evaluate(q, k, N, budget):
    M = choose_truncation(k, N, budget)
    if len(q) < M:
        raise TruncationError(M, len(q))
    coeffs = q.coefficients[:M]
    A, B, abs1 = _pieces(coeffs, k, N, 1)
    A2, B2, abs2 = _pieces(coeffs, k, N, CHECK_SPLIT)
    # rounding: each term carries relative error ~ s unit roundoffs
    rounding = budget.unit_roundoff * M * k * max(abs1, abs2)
    err = 2 * (mp.mpf(tail_bound(k, N, M)) + rounding)
    return _Evaluation(k, N, M, (A, B), (A2, B2), err)


def lambda_values(q, k, N, sign, budget=PrecisionBudget()):
    """Lambda(f, s) and L(f, s) for s = 1..k-1 with a verified error bound."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    with mp.workprec(budget.bits):
        ev = _evaluate(q, k, N, budget)
        return _finish(ev, sign, budget)


def _finish(ev, sign, budget):
    k, N = ev.k, ev.N
    lam = ev.lambdas(sign)
    chk = ev.lambdas(sign, "chk")
    residual = _residual(chk, k, sign)
    err = ev.error_bound
    if residual > err:
        raise InconsistencyError(
            "functional-equation residual %s exceeds error bound %s (sign %+d)"
            % (mpmath.nstr(residual, 5), mpmath.nstr(err, 5), sign)
        )
    center = chk[k // 2 - 1]
    if sign == -1 and abs(center) > err:
        raise InconsistencyError(
            "sign -1 but Lambda(k/2) = %s is not zero" % mpmath.nstr(center, 5)
        )
    if lam[k // 2 - 1] < -err:
        raise InconsistencyError("negative central value %s" % mpmath.nstr(lam[k // 2 - 1], 5))
    lv = [lambda_to_l(v, s, N) for s, v in enumerate(lam, 1)]
    return CriticalValues(
        weight=k,
        level=N,
        sign=sign,
        lambdas=tuple(lam),
        lvalues=tuple(lv),
        truncation=ev.M,
        error_bound=err,
        fe_residual=residual,
        bits=budget.bits,
    )


# -- the sign of the functional equation -------------------------------------


def fricke_sign_estimate(q, k, N, y0=None):
    """eps from g(1/(N y0)) = eps N^{k/2} y0^k g(y0), g(y) = f(iy)."""
    sqN = mp.sqrt(N)
    y0 = 2 / sqN if y0 is None else mp.mpf(y0)
    y1 = 1 / (N * y0)

    def g(y):
        return mpmath.fsum(an * mp.exp(-2 * mp.pi * n * y) for n, an in enumerate(q.coefficients, 1))

    return g(y1) / (mp.mpf(N) ** (mp.mpf(k) / 2) * y0**k * g(y0))


def detect_sign(q, k, N, budget=PrecisionBudget()):
    """Return the root number eps = +1 or -1 of the form with coefficients ``q``.

    Both signs are tried on the asymmetric split; the consistent one must
    have a residual inside the error bound and the other one a residual at
    least SIGN_SEPARATION times larger.  The numeric Fricke test on f(iy)
    must agree.
    """
    with mp.workprec(budget.bits):
        ev = _evaluate(q, k, N, budget)
        res = {s: ev.residual(s) for s in (1, -1)}
        err = ev.error_bound
        good = [s for s in (1, -1) if res[s] <= err]
        if len(good) != 1 or res[-good[0]] < SIGN_SEPARATION * err:
            raise AmbiguousSignError(
                "cannot decide sign: residuals +1: %s, -1: %s, bound %s"
                % tuple(mpmath.nstr(v, 5) for v in (res[1], res[-1], err))
            )
        sign = good[0]
        need = fricke_truncation(k, N, budget.bits)
        if len(q) >= need:
            est = fricke_sign_estimate(q, k, N)
            if abs(est - sign) > 1e-6:
                raise AmbiguousSignError(
                    "Fricke test gives %s, L-series test gives %+d" % (mpmath.nstr(est, 8), sign)
                )
        return sign


def resolve_sign(q, k, N, declared=None, budget=PrecisionBudget()):
    """Declared signs are verified by :func:`lambda_values`; unknown ones detected."""
    if declared in (1, -1):
        return declared
    return detect_sign(q, k, N, budget)


# -- validity checks ----------------------------------------------------------


def check_monotonicity(cv: CriticalValues) -> CheckList:
    """Monotone chains 0 <= Lambda(k/2) <= Lambda(k/2+1) <= ... (and the
    sharper Lambda(k/2+j)/j chain when eps = -1)."""
    k, c = cv.weight, cv.center
    tol = cv.error_bound
    out = CheckList()
    v0 = cv.Lambda(c)
    out.add(Check("Lambda(%d) >= 0" % c, v0 >= -tol, v0, v0, 0))
    for s in range(c, k - 1):
        lhs, rhs = cv.Lambda(s), cv.Lambda(s + 1)
        out.add(Check("Lambda(%d) <= Lambda(%d)" % (s, s + 1), rhs - lhs >= -tol, rhs - lhs, lhs, rhs))
    if cv.sign == -1:
        out.add(Check("Lambda(%d) = 0" % c, abs(v0) <= tol, -abs(v0), v0, 0))
        for j in range(1, k - 1 - c):
            lhs = cv.Lambda(c + j) / j
            rhs = cv.Lambda(c + j + 1) / (j + 1)
            out.add(
                Check(
                    "Lambda(%d)/%d <= Lambda(%d)/%d" % (c + j, j, c + j + 1, j + 1),
                    rhs - lhs >= -tol,
                    rhs - lhs,
                    lhs,
                    rhs,
                )
            )
    return out


def _critical_point(k, shift):
    s = Fraction(k + 1, 2) + Fraction(shift).limit_denominator(10**6)
    if s.denominator != 1:
        raise ValueError("(k+1)/2 + %s = %s is not an integer" % (shift, s))
    return int(s)


def check_ratio_bound(cv: CriticalValues, a, b) -> Check:
    """L(f,(k+1)/2+a) / L(f,(k+1)/2+b) <= zeta(1+a)^2 / zeta(1+b)^2."""
    if not 0 < a <= b:
        raise ValueError("need 0 < a <= b, got a=%s b=%s" % (a, b))
    k = cv.weight
    sa, sb = _critical_point(k, a), _critical_point(k, b)
    for s in (sa, sb):
        if not 1 <= s <= k - 1:
            raise ValueError("L(f,%d) is outside the computed range 1..%d" % (s, k - 1))
    with mp.workprec(cv.bits):
        ratio = cv.L(sa) / cv.L(sb)
        bound = (zeta(1 + mp.mpf(Fraction(a).numerator) / Fraction(a).denominator) /
                 zeta(1 + mp.mpf(Fraction(b).numerator) / Fraction(b).denominator)) ** 2
        # relative error of the ratio is at most twice the relative error of L(sb)
        tol = 4 * cv.error_bound / cv.Lambda(sb) * ratio if cv.Lambda(sb) else 0
        margin = bound - ratio
    return Check("L(%d)/L(%d) <= zeta ratio" % (sa, sb), margin >= -tol, margin, ratio, bound)


def check_ratio_bounds(cv: CriticalValues) -> CheckList:
    """The ratio bound for every integer pair in the absolutely convergent range."""
    k = cv.weight
    out = CheckList()
    lo = k // 2 + 1
    for sa in range(lo, k - 1):
        for sb in range(sa + 1, k):
            a = Fraction(2 * sa - k - 1, 2)
            b = Fraction(2 * sb - k - 1, 2)
            out.add(check_ratio_bound(cv, a, b))
    return out
