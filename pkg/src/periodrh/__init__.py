"""Zeros of period polynomials of newforms.

Computes critical values of newform L-functions, builds the period
polynomial r_f and its companions P_f and Q_f, certifies that the zeros of
r_f lie on |z| = 1/sqrt(N), and evaluates the known sufficient criteria and
the predicted root angles.
"""
from .checks import Check, CheckList
from .circle import (
    AngleMatch,
    CircleReport,
    certify_circle,
    central_inequalities,
    count_sign_changes,
    find_roots,
    large_weight_criterion,
    large_weight_table,
    level_threshold,
    match_roots_to_angles,
    predict_angles,
    s_bounds,
    szego_criteria,
    trig_polynomial,
)
from .errors import PeriodRHError
from .lfunction import (
    CriticalValues,
    PrecisionBudget,
    check_monotonicity,
    check_ratio_bound,
    choose_truncation,
    detect_sign,
    lambda_values,
)
from .periodpoly import PeriodPolynomial, PPoly, build_pf, build_qf, build_rf, check_identity_16
from .pipeline import RunConfig, lvalues_form, verify_form
from .qexpansion import (
    EtaQuotient,
    NewformSpec,
    QExpansion,
    expand_eta_quotient,
    ingest_coefficients,
    load_spec,
    newform_coefficients,
    validate_hecke,
)

__version__ = "0.1.0"
