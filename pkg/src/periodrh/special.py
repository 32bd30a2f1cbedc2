"""Special functions at arbitrary precision.

Only what the pipeline needs: the upper incomplete gamma function at
positive integer order and the Riemann zeta function on the real axis.
"""
from functools import lru_cache
from math import factorial

import mpmath
from mpmath import mp


def incomplete_gamma_int(s, x):
    """Upper incomplete gamma Gamma(s, x) for integer ``s >= 1`` and ``x >= 0``.

    Uses the closed form (s-1)! e^{-x} sum_{j<s} x^j/j!.  The terms are all
    positive; they are summed smallest first and scaled once at the end.
    """
    if int(s) != s or s < 1:
        raise ValueError("order must be a positive integer, got %r" % (s,))
    s = int(s)
    x = mp.mpf(x)
    if x < 0:
        raise ValueError("argument must be non-negative")
    terms = [mp.one]
    term = mp.one
    for j in range(1, s):
        term = term * x / j
        terms.append(term)
    terms.sort()
    return mpmath.factorial(s - 1) * mp.exp(-x) * mpmath.fsum(terms)


def scaled_incomplete_gamma_int(s, x):
    """x^{-s} Gamma(s, x), the kernel of the L-series; ``x > 0``."""
    x = mp.mpf(x)
    return incomplete_gamma_int(s, x) / x**s


@lru_cache(maxsize=None)
def _weights(n):
    # d_j = n sum_{i<=j} (n+i-1)! 4^i / ((n-i)! (2i)!), exact integers
    d = []
    acc = 0
    for i in range(n + 1):
        acc += factorial(n + i - 1) * 4**i // (factorial(n - i) * factorial(2 * i))
        d.append(n * acc)
    return tuple(d)


def zeta(s):
    """Riemann zeta at real ``s > 0``, ``s != 1``, to the current precision.

    Borwein's acceleration of the alternating Dirichlet eta series; the
    error is about 3 / (3 + sqrt 8)^n relative to eta(s).
    """
    s = mp.mpf(s)
    if s <= 0:
        raise ValueError("zeta implemented for s > 0 only")
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    n = int(mp.prec * 0.3934) + 10  # log(2) / log(3 + sqrt 8)
    d = _weights(n)
    dn = d[n]
    acc = mp.zero
    for j in range(n):
        term = mp.mpf(d[j] - dn) / mp.mpf(j + 1) ** s
        acc += term if j % 2 == 0 else -term
    eta = -acc / dn
    return eta / (1 - mp.mpf(2) ** (1 - s))
