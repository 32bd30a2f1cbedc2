from fractions import Fraction

import pytest
from mpmath import mp

from oracles import lambda_values_by_quadrature
from periodrh.errors import AmbiguousSignError, InconsistencyError, TruncationError
from periodrh.fixtures import LABELS, fixture_spec
from periodrh.lfunction import (
    CriticalValues,
    PrecisionBudget,
    _pieces,
    check_monotonicity,
    check_ratio_bound,
    check_ratio_bounds,
    choose_truncation,
    detect_sign,
    fricke_truncation,
    l_to_lambda,
    lambda_scale,
    lambda_to_l,
    lambda_values,
    tail_bound,
)
from periodrh.qexpansion import QExpansion, newform_coefficients

L_4_8 = ["0.3545006", "0.6900311", "0.8746953"]
L_10_12 = ["343.041936898889", "140.422365373567", "32.9164131544840", "6.41626479306637", "1.71889934464323"]


def coefficients(label, extra=0):
    spec = fixture_spec(label)
    M = max(choose_truncation(spec.weight, spec.level), fricke_truncation(spec.weight, spec.level))
    return spec, newform_coefficients(spec, 2 * M + extra)


def test_budget_invariants():
    b = PrecisionBudget()
    assert (b.eps_rel, b.bits, b.guard) == (1e-15, 128, 16)
    assert b.digits == 33
    assert b.doubled().bits == 256
    with pytest.raises(ValueError):
        PrecisionBudget(bits=40)
    with pytest.raises(ValueError):
        PrecisionBudget(eps_rel=1e-40, bits=64)
    with pytest.raises(ValueError):
        PrecisionBudget(eps_rel=0)


def test_level8_reference_values(analysis):
    cv = analysis("4.8.a").cv
    for got, want in zip(cv.lvalues, L_4_8):
        assert abs(got - mp.mpf(want)) < 5e-7


def test_level12_reference_values(analysis):
    cv = analysis("10.12.a").cv
    for got, want in zip(cv.lvalues, L_10_12):
        assert abs(got - mp.mpf(want)) < 1e-9


@pytest.mark.parametrize("label", LABELS)
def test_quadrature_oracle(label, analysis):
    cv = analysis(label).cv
    _, q = coefficients(label)
    ref = lambda_values_by_quadrature(q.coefficients, cv.weight, cv.level, cv.sign)
    scale = max(abs(v) for v in cv.lambdas)
    for s, want in enumerate(ref, 1):
        assert abs(cv.Lambda(s) - want) <= 10 * cv.error_bound + 10 * 1e-15 * scale, s


@pytest.mark.parametrize("label", LABELS)
def test_doubling_stability(label, analysis):
    cv = analysis(label).cv
    _, q = coefficients(label)
    with mp.workprec(cv.bits):
        A, B, _ = _pieces(q.coefficients[: 2 * cv.truncation], cv.weight, cv.level, 1)
        for s in range(1, cv.weight):
            assert abs(A[s - 1] + cv.sign * B[s - 1] - cv.Lambda(s)) <= cv.error_bound


@pytest.mark.parametrize("label", LABELS)
def test_critical_value_invariants(label, analysis):
    cv = analysis(label).cv
    k = cv.weight
    with mp.workprec(cv.bits):
        assert cv.fe_residual <= cv.error_bound
        # tail target is eps_rel times a lower bound for Lambda(k-1); the bound doubles it
        assert cv.error_bound <= 2 * 1e-15 * cv.Lambda(k - 1) * (1 + 1e-6)
        for s in range(1, k):
            assert abs(cv.Lambda(s) - cv.sign * cv.Lambda(k - s)) <= cv.error_bound
            assert abs(lambda_to_l(cv.Lambda(s), s, cv.level) - cv.L(s)) <= mp.mpf(2) ** -100 * abs(cv.L(s))
            back = l_to_lambda(cv.L(s), s, cv.level)
            assert abs(back - cv.Lambda(s)) <= mp.mpf(2) ** -100 * abs(cv.Lambda(s)) + mp.mpf(2) ** -200
        if cv.sign == -1:
            assert abs(cv.Lambda(cv.center)) <= cv.error_bound
        assert cv.Lambda(cv.center) >= -cv.error_bound
        assert lambda_scale(k, cv.level) <= cv.Lambda(k - 1)


def test_critical_value_index_range(analysis):
    cv = analysis("4.8.a").cv
    with pytest.raises(IndexError):
        cv.Lambda(0)
    with pytest.raises(IndexError):
        cv.L(4)


def test_truncation_level8():
    M = choose_truncation(4, 8)
    assert mp.exp(-2 * mp.pi * M / mp.sqrt(8)) * mp.mpf(M) ** 2.5 < 1e-17


def test_truncation_delta_is_minimal():
    M = choose_truncation(12, 1)
    target = 1e-15 * float(lambda_scale(12, 1))
    assert tail_bound(12, 1, M) < target
    assert tail_bound(12, 1, M - 1) >= target


def test_truncation_loose_budget():
    budget = PrecisionBudget(eps_rel=0.5)
    for k, N in ((4, 8), (12, 1), (10, 12)):
        M = choose_truncation(k, N, budget)
        target = 0.5 * float(lambda_scale(k, N))
        assert tail_bound(k, N, M) < target
        if M > 1:
            assert tail_bound(k, N, M - 1) >= target


def test_truncation_too_short():
    spec, q = coefficients("10.12.a")
    with pytest.raises(TruncationError, match="need at least"):
        lambda_values(q.truncate(3), 10, 12, 1)


@pytest.mark.parametrize("label, sign", [("4.8.a", 1), ("12.1.a", 1), ("4.13.a", -1), ("6.7.a", -1), ("8.5.a", -1), ("10.12.a", 1)])
def test_detect_sign(label, sign):
    spec, q = coefficients(label)
    assert detect_sign(q, spec.weight, spec.level) == sign


@pytest.mark.parametrize("label", ["4.8.a", "6.7.a", "12.1.a"])
def test_wrong_sign_is_inconsistent(label, analysis):
    cv = analysis(label).cv
    _, q = coefficients(label)
    with pytest.raises(InconsistencyError):
        lambda_values(q, cv.weight, cv.level, -cv.sign)


def test_ambiguous_sign():
    # a(1) = 1 and nothing else is no modular form; neither sign fits
    k, N = 4, 8
    q = QExpansion([1] + [0] * (fricke_truncation(k, N) + 10))
    with pytest.raises(AmbiguousSignError):
        detect_sign(q, k, N)


@pytest.mark.parametrize("label", LABELS)
def test_monotonicity_fixtures(label, analysis):
    report = check_monotonicity(analysis(label).cv)
    assert report.passed, report.failures
    cv = analysis(label).cv
    if cv.sign == -1 and cv.weight >= 6:
        assert any("/" in c.name for c in report)


def test_monotonicity_level8_chain(analysis):
    report = check_monotonicity(analysis("4.8.a").cv)
    names = [c.name for c in report]
    assert names == ["Lambda(2) >= 0", "Lambda(2) <= Lambda(3)"]


def test_monotonicity_zero_vector():
    cv = CriticalValues.from_lambdas([0] * 9, 10, 12, 1)
    report = check_monotonicity(cv)
    assert report.passed
    assert all(c.margin == 0 for c in report)


def test_monotonicity_flags_violation():
    cv = CriticalValues.from_lambdas([3, 2, 3], 4, 8, 1)
    assert check_monotonicity(cv).passed
    cv = CriticalValues.from_lambdas([1, 2, 1], 4, 8, 1)
    assert [c.name for c in check_monotonicity(cv).failures] == ["Lambda(2) <= Lambda(3)"]


def test_ratio_bound_level12(analysis):
    cv = analysis("10.12.a").cv
    check = check_ratio_bound(cv, Fraction(5, 2), Fraction(7, 2))
    assert check.ok and check.name == "L(8)/L(9) <= zeta ratio"
    with mp.workprec(128):
        assert abs(check.lhs - cv.L(8) / cv.L(9)) < 1e-30
        assert abs(check.rhs - (mp.zeta(3.5) / mp.zeta(4.5)) ** 2) < 1e-30


def test_ratio_bound_equality(analysis):
    check = check_ratio_bound(analysis("10.12.a").cv, 1.5, 1.5)
    assert check.ok and check.margin == 0


@pytest.mark.parametrize("label", LABELS)
def test_ratio_bounds_fixtures(label, analysis):
    assert check_ratio_bounds(analysis(label).cv).passed


def test_ratio_bound_negative_control():
    # L(8) much larger than L(9) breaks the bound
    lam = [1] * 7 + [100, 1]
    cv = CriticalValues.from_lambdas(lam, 10, 12, 1)
    assert not check_ratio_bound(cv, 2.5, 3.5).ok


def test_ratio_bound_range_errors(analysis):
    cv = analysis("10.12.a").cv
    with pytest.raises(ValueError):
        check_ratio_bound(cv, 2.5, 1.5)
    with pytest.raises(ValueError):
        check_ratio_bound(cv, 2.5, 5.5)
    with pytest.raises(ValueError):
        check_ratio_bound(cv, 0.3, 1.5)
