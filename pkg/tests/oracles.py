"""Independent reference computations used only by the tests.

They share no code path with the library: Lambda values come from direct
numerical quadrature of the Mellin integral, roots from numpy's companion
matrix eigenvalues, and predicted angles from a dense scan plus findroot.
"""
import mpmath
import numpy as np
from mpmath import mp


def lambda_values_by_quadrature(coeffs, k, N, sign, dps=20):
    """Lambda(f, s), s = 1..k-1, from

    Lambda(s) = int_{1/sqrt N}^inf f(iy) (N^{s/2} y^{s-1} + eps N^{(k-s)/2} y^{k-s-1}) dy.
    """
    with mp.workdps(dps):
        y0 = 1 / mp.sqrt(N)
        # terms beyond this are below 10^-(dps+5) relative on the whole range
        keep = int((dps + 5 + k) * mp.log(10) / (2 * mp.pi * y0)) + 2
        coeffs = coeffs[:keep]
        cache = {}

        def f(y):
            # quadrature nodes repeat for every s
            if y not in cache:
                cache[y] = mpmath.fsum(a * mp.exp(-2 * mp.pi * n * y) for n, a in enumerate(coeffs, 1) if a)
            return cache[y]

        out = []
        for s in range(1, k):
            def integrand(y, s=s):
                return f(y) * (mp.mpf(N) ** (mp.mpf(s) / 2) * y ** (s - 1)
                               + sign * mp.mpf(N) ** (mp.mpf(k - s) / 2) * y ** (k - s - 1))

            out.append(mp.quad(integrand, [y0, y0 + 1, y0 + 4, mp.inf]))
        return out


def companion_roots(coefficients):
    """Roots of sum c_n z^n via numpy (companion matrix eigenvalues)."""
    c = [complex(x) for x in coefficients]
    return np.roots(c[::-1])


def angles_by_scan(m, N, sign, points=20000):
    """Solutions in [0, 2pi) of m t - (2pi/sqrt N) sin t = target, by scan and findroot."""
    a = 2 * mp.pi / mp.sqrt(N)
    out = []
    grid = [2 * mp.pi * i / points for i in range(points + 1)]
    for ell in range(2 * m):
        target = (ell + (mp.mpf(1) / 2 if sign == 1 else 0)) * mp.pi
        g = lambda t: m * t - a * mp.sin(t) - target
        sols = []
        for lo, hi in zip(grid, grid[1:]):
            if g(lo) == 0:
                sols.append(lo)
            elif g(lo) * g(hi) < 0:
                sols.append(mp.findroot(g, (lo, hi), solver="anderson"))
        out.append(sols)
    return out
