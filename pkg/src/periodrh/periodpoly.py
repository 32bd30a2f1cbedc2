"""Period polynomial r_f, its half-range companion P_f, and the Q_f evaluator."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import mpmath
from mpmath import mp

from .checks import Check
from .errors import DomainError, IdentityError
from .lfunction import CriticalValues


def _horner(coeffs, z):
    acc = mp.zero
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class PeriodPolynomial:
    """r_f(z) = sum_n coefficients[n] z^n, degree k-2."""

    coefficients: tuple
    weight: int
    level: int
    sign: int
    lambda_error: object = 0
    bits: int = 128

    @property
    def m(self):
        return (self.weight - 2) // 2

    @property
    def degree(self):
        return self.weight - 2

    def __call__(self, z):
        with mp.workprec(self.bits):
            return _horner(self.coefficients, mp.mpc(z))

    def derivative(self, z):
        d = [n * c for n, c in enumerate(self.coefficients)][1:]
        with mp.workprec(self.bits):
            return _horner(d, mp.mpc(z))

    def scale(self):
        return max(abs(c) for c in self.coefficients)

    def symmetry_residual(self):
        """max_j |c_{2m-j} + i^k eps (-1)^j N^{m-j} c_j|.

        This is r_f(z) = -i^k eps (N z^2)^m r_f(-1/(Nz)) read off
        coefficient by coefficient.
        """
        k, N, m, eps = self.weight, self.level, self.m, self.sign
        c = self.coefficients
        with mp.workprec(self.bits):
            ik = mp.mpc(0, 1) ** k
            N = mp.mpf(N)
            return max(
                abs(c[2 * m - j] + ik * eps * (-1) ** j * N ** (m - j) * c[j]) for j in range(2 * m + 1)
            )


@dataclass(frozen=True)
class PPoly:
    """P_f(z) = p_0 + p_1 z + ... + p_m z^m with real p_j."""

    coefficients: tuple
    weight: int
    level: int
    sign: int
    bits: int = 128

    @property
    def m(self):
        return len(self.coefficients) - 1

    def __call__(self, z):
        with mp.workprec(self.bits):
            return _horner(self.coefficients, mp.mpc(z))


def build_rf(cv: CriticalValues) -> PeriodPolynomial:
    """Coefficients from the L-values; the Lambda-value form must agree."""
    k, N = cv.weight, cv.level
    with mp.workprec(cv.bits):
        two_pi_i = 2 * mp.pi * mp.mpc(0, 1)
        lead = -mp.factorial(k - 2) / two_pi_i ** (k - 1)
        from_l = [lead * two_pi_i**n / mp.factorial(n) * cv.L(k - n - 1) for n in range(k - 1)]

        i = mp.mpc(0, 1)
        pref = i ** (k - 1) * mp.mpf(N) ** (-mp.mpf(k - 1) / 2)
        from_lambda = [
            pref * comb(k - 2, n) * (mp.sqrt(N) * i) ** n * cv.Lambda(k - 1 - n) for n in range(k - 1)
        ]
        scale = max([abs(c) for c in from_lambda] + [mp.mpf(2) ** -mp.prec])
        gap = max(abs(a - b) for a, b in zip(from_l, from_lambda))
        if gap > scale * mp.mpf(2) ** (24 - cv.bits):
            raise IdentityError("two expansions of r_f disagree by %s" % mpmath.nstr(gap, 5))
        # absolute error of the Lambda values, at least the rounding level
        err = max(mp.mpf(cv.error_bound), max(abs(v) for v in cv.lambdas) * mp.mpf(2) ** (16 - cv.bits))
    return PeriodPolynomial(tuple(from_l), k, N, cv.sign, err, cv.bits)


def build_pf(cv: CriticalValues) -> PPoly:
    k, m, c = cv.weight, cv.m, cv.center
    with mp.workprec(cv.bits):
        coeffs = [comb(2 * m, m) * cv.Lambda(c) / 2]
        coeffs += [comb(2 * m, m + j) * cv.Lambda(c + j) for j in range(1, m + 1)]
    return PPoly(tuple(coeffs), k, cv.level, cv.sign, cv.bits)


def circle_samples(count):
    with mp.workprec(mp.prec):
        return [mp.expjpi(mp.mpf(2 * j) / count) for j in range(count)]


def identity_tolerance(rf: PeriodPolynomial):
    """Ten times the error of an r_f value on |z| = 1/sqrt(N) caused by the Lambda errors."""
    k, N, m = rf.weight, rf.level, rf.m
    with mp.workprec(rf.bits):
        return 10 * mp.mpf(N) ** (-mp.mpf(k - 1) / 2) * 4**m * rf.lambda_error


def check_identity_16(rf: PeriodPolynomial, pf: PPoly, samples=None, tol=None) -> Check:
    """r_f(z/(i sqrt N)) = i^{k-1} N^{-(k-1)/2} eps z^m (P_f(z) + eps P_f(1/z))."""
    k, N, m, eps = rf.weight, rf.level, rf.m, rf.sign
    with mp.workprec(rf.bits):
        if samples is None:
            samples = circle_samples(4 * m + 1)
        i = mp.mpc(0, 1)
        pref = i ** (k - 1) * mp.mpf(N) ** (-mp.mpf(k - 1) / 2) * eps
        worst = mp.zero
        for z in samples:
            z = mp.mpc(z)
            lhs = rf(z / (i * mp.sqrt(N)))
            rhs = pref * z**m * (pf(z) + eps * pf(1 / z))
            worst = max(worst, abs(lhs - rhs))
        tol = identity_tolerance(rf) if tol is None else tol
    if worst > tol:
        raise IdentityError(
            "r_f / P_f identity residual %s exceeds %s" % (mpmath.nstr(worst, 5), mpmath.nstr(tol, 5))
        )
    return Check("r_f/P_f identity", True, tol - worst, worst, tol)


class QEvaluator:
    """Q_f(z) = P_f(z) / ((2m)! (sqrt N / 2pi)^{2m+1} L(f, 2m+1)) and its pieces.

    ``decompose(z)`` returns (main, S1, S2, S3) with
    Q = z^m exp(2pi/(z sqrt N)) + S1 + S2 + S3.
    """

    def __init__(self, cv: CriticalValues):
        m = cv.m
        if m < 2:
            raise DomainError("Q_f needs weight >= 6, got %d" % cv.weight)
        self.m, self.N, self.bits, self.sign = m, cv.level, cv.bits, cv.sign
        with mp.workprec(self.bits):
            top = cv.L(2 * m + 1)
            if top == 0:
                raise DomainError("L(f, 2m+1) vanishes")
            self.x = 2 * mp.pi / mp.sqrt(cv.level)
            self.ratios = tuple(cv.L(2 * m + 1 - j) / top for j in range(m))
            self.s3 = self.x ** (2 * m + 1) * cv.Lambda(cv.center) / (2 * mp.factorial(m) ** 2 * top)
            self.normalizer = (
                factorial(2 * m) * (mp.sqrt(cv.level) / (2 * mp.pi)) ** (2 * m + 1) * top
            )

    def __call__(self, z):
        with mp.workprec(self.bits):
            z = mp.mpc(z)
            w = self.x / z
            acc = mp.zero
            term = mp.one
            for j in range(self.m):
                acc += term * self.ratios[j]
                term = term * w / (j + 1)
            return z**self.m * acc + self.s3

    def decompose(self, z):
        with mp.workprec(self.bits):
            z = mp.mpc(z)
            m = self.m
            w = self.x / z
            zm = z**m
            main = zm * mp.exp(w)
            s1 = mp.zero
            term = mp.one
            for j in range(1, m):
                term = term * w / j
                s1 += term * (self.ratios[j] - 1)
            s1 = zm * s1
            # S2: tail of the exponential from j = m on
            term = term * w / m
            s2 = mp.zero
            j = m
            eps = mp.mpf(2) ** -mp.prec
            while True:
                s2 += term
                if abs(term) <= eps * abs(s2):
                    break
                j += 1
                term = term * w / j
            s2 = -zm * s2
            return main, s1, s2, mp.mpc(self.s3)


def build_qf(cv: CriticalValues) -> QEvaluator:
    return QEvaluator(cv)
