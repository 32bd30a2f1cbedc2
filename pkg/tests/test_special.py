import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from periodrh.special import incomplete_gamma_int, scaled_incomplete_gamma_int, zeta


@pytest.mark.parametrize(
    "s, x, expected",
    [(1, 0, lambda: 1), (2, 0, lambda: 1), (3, 0, lambda: 2), (3, 1, lambda: 5 / mp.e), (1, 2, lambda: mp.exp(-2))],
)
def test_incomplete_gamma_closed_forms(s, x, expected):
    with mp.workprec(128):
        assert abs(incomplete_gamma_int(s, x) - expected()) < mp.mpf(10) ** -30


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.floats(0.01, 40))
def test_incomplete_gamma_against_quadrature(s, x):
    with mp.workdps(30):
        # Gamma(s, x) = e^{-x} int_0^inf (x + u)^{s-1} e^{-u} du keeps the integral O(1)
        ref = mp.exp(-x) * mp.quad(lambda u: (x + u) ** (s - 1) * mp.exp(-u), [0, 10, mp.inf])
        got = incomplete_gamma_int(s, x)
        assert abs(got - ref) <= mp.mpf(10) ** -25 * abs(ref)


def test_scaled_kernel():
    with mp.workprec(128):
        assert abs(scaled_incomplete_gamma_int(2, 3) - incomplete_gamma_int(2, 3) / 9) < mp.mpf(10) ** -35


@pytest.mark.parametrize("s, x", [(0, 1), (1.5, 1), (2, -1)])
def test_incomplete_gamma_rejects_bad_input(s, x):
    with pytest.raises(ValueError):
        incomplete_gamma_int(s, x)


@pytest.mark.parametrize("s", ["0.5", "1.5", "2", "2.5", "3.5", "7", "15.5", "40"])
def test_zeta_against_mpmath(s):
    with mp.workprec(160):
        assert abs(zeta(mp.mpf(s)) - mpmath.zeta(mp.mpf(s))) < mp.mpf(2) ** -140 * abs(mpmath.zeta(mp.mpf(s)))


def test_zeta_known_values():
    with mp.workprec(128):
        assert abs(zeta(2) - mp.pi**2 / 6) < mp.mpf(10) ** -36
        assert abs(zeta(4) - mp.pi**4 / 90) < mp.mpf(10) ** -36


def test_zeta_domain():
    with pytest.raises(ValueError):
        zeta(1)
    with pytest.raises(ValueError):
        zeta(-1)
