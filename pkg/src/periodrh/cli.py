"""Command-line front end: ``periodrh verify|lvalues|criteria|angles``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from mpmath import mp

from . import circle, lfunction
from .errors import AmbiguousAngleError, DomainError, PeriodRHError, SpecError
from .fixtures import all_fixture_paths
from .periodpoly import build_rf
from .pipeline import (
    EXIT_INCONSISTENT,
    EXIT_INPUT,
    EXIT_OK,
    RunConfig,
    check_dict,
    classify,
    combined_exit_code,
    default_bits,
    expand_inputs,
    lvalues_form,
    num,
    verify_form,
)
from .qexpansion import load_spec, newform_coefficients
from .suite import claim_checks


class UsageError(Exception):
    pass


# -- argument parsing ---------------------------------------------------------


def _common(p):
    p.add_argument("--precision-bits", type=int, default=None,
                   help="working precision in bits (default: $PERIODRH_PRECISION_BITS or 128)")
    p.add_argument("--eps-rel", type=float, default=1e-15, help="target relative error of Lambda values")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")


def _batch(p):
    p.add_argument("inputs", nargs="*", help="spec documents, coefficient files or directories")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    p.add_argument("--timings", action="store_true", help="include per-stage timings (not deterministic)")


def build_parser():
    parser = argparse.ArgumentParser(prog="periodrh", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="full pipeline: L-values, r_f, roots, certification, criteria")
    _common(p)
    _batch(p)
    p.add_argument("--tol-circle", type=float, default=circle.CIRCLE_TOL)
    p.add_argument("--tol-residual", type=float, default=circle.RESIDUAL_TOL)
    p.add_argument("--tol-identity", type=float, default=None)
    p.add_argument("--no-criteria", action="store_true", help="skip the sufficiency criteria")
    p.add_argument("--no-angles", action="store_true", help="skip angle prediction and matching")
    p.add_argument("--paper-suite", action="store_true",
                   help="add the bundled fixtures and check the reference values")

    p = sub.add_parser("lvalues", help="critical L- and Lambda-values")
    _common(p)
    _batch(p)

    p = sub.add_parser("criteria", help="level thresholds and criterion verdicts")
    _common(p)
    p.add_argument("--weight", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--spec", help="form whose values feed the value-dependent criteria")
    p.add_argument("--table", action="store_true", help="least level N(m) for the large-weight criterion")

    p = sub.add_parser("angles", help="predicted root angles, optionally matched to a form")
    _common(p)
    p.add_argument("--weight", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--sign", type=int, choices=(1, -1))
    p.add_argument("--spec")
    return parser


def make_config(args, inputs=()):
    bits = args.precision_bits if args.precision_bits is not None else default_bits()
    jobs = getattr(args, "jobs", None) or os.cpu_count() or 1
    return RunConfig(
        inputs=list(inputs),
        bits=bits,
        eps_rel=args.eps_rel,
        tol_circle=getattr(args, "tol_circle", circle.CIRCLE_TOL),
        tol_residual=getattr(args, "tol_residual", circle.RESIDUAL_TOL),
        tol_identity=getattr(args, "tol_identity", None),
        fmt=args.format,
        out=args.out,
        criteria=not getattr(args, "no_criteria", False),
        angles=not getattr(args, "no_angles", False),
        jobs=jobs,
        timings=getattr(args, "timings", False),
    )


# -- running forms ------------------------------------------------------------


def run_batch(func, config):
    paths = [str(p) for p in config.inputs]
    if config.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=min(config.jobs, len(paths))) as pool:
            return list(pool.map(func, paths, [config] * len(paths)))
    return [func(p, config) for p in paths]


def _inputs(args, extra=()):
    paths = expand_inputs(args.inputs) + list(extra)
    if not paths:
        if any(os.path.isdir(p) for p in args.inputs):
            raise UsageError("input directory contains no spec or coefficient files")
        raise UsageError("no inputs given")
    return paths


def cmd_verify(args):
    extra = all_fixture_paths() if args.paper_suite else []
    if args.paper_suite and not args.inputs:
        paths = extra
    else:
        paths = _inputs(args, extra)
    config = make_config(args, paths)
    reports = run_batch(verify_form, config)
    doc = {"command": "verify", "reports": reports}
    codes = [r["exit_code"] for r in reports]
    if args.paper_suite:
        claims = claim_checks(config.budget)
        doc["claims"] = [check_dict(c, config.digits) for c in claims]
        if not claims.passed:
            codes.append(EXIT_INCONSISTENT)
    doc["exit_code"] = combined_exit_code(codes)
    return doc, config


def cmd_lvalues(args):
    config = make_config(args, _inputs(args))
    reports = run_batch(lvalues_form, config)
    return {
        "command": "lvalues",
        "reports": reports,
        "exit_code": combined_exit_code([r["exit_code"] for r in reports]),
    }, config


def _spec_values(path, config):
    spec = load_spec(path)
    budget = config.budget
    k, N = spec.weight, spec.level
    q = newform_coefficients(spec, lfunction.choose_truncation(k, N, budget))
    sign = lfunction.resolve_sign(q, k, N, spec.sign, budget)
    return spec, lfunction.lambda_values(q, k, N, sign, budget)


def _weight_level(args, spec):
    k, N = args.weight, args.level
    if spec is not None:
        if k is not None and k != spec.weight:
            raise SpecError("--weight %d disagrees with spec weight %d" % (k, spec.weight))
        if N is not None and N != spec.level:
            raise SpecError("--level %d disagrees with spec level %d" % (N, spec.level))
        k, N = spec.weight, spec.level
    if k is None:
        raise SpecError("--weight (or --spec) is required")
    if k < 4 or k % 2:
        raise SpecError("weight must be even and >= 4, got %d" % k)
    if N is not None and N < 1:
        raise SpecError("level must be positive, got %d" % N)
    return k, N


def cmd_criteria(args):
    config = make_config(args)
    d = config.digits
    spec = cv = None
    if args.spec:
        spec, cv = _spec_values(args.spec, config)
    k, N = _weight_level(args, spec)
    m = (k - 2) // 2
    doc = {"command": "criteria", "weight": k, "level": N, "m": m}
    with mp.workprec(config.bits):
        threshold = circle.level_threshold(k)
        if threshold is None:
            doc["threshold"] = {
                "value": None,
                "note": "k=4: (5.1) reduces to Lambda(2) <= Lambda(3), which always holds; no (5.2) conditions",
            }
        else:
            ceil = int(mp.ceil(threshold))
            doc["threshold"] = {"value": num(threshold, d), "ceil": ceil, "note": "N >= %d sufficient" % ceil}
            if N is not None:
                doc["threshold"]["level_ok"] = N >= threshold
        if N is not None and m >= 2:
            doc["large_weight"] = check_dict(circle.large_weight_criterion(m, N), d)
        if cv is not None:
            checks = list(circle.szego_criteria(cv)) + list(circle.central_inequalities(cv))
            doc["sign"] = cv.sign
            doc["value_criteria"] = [check_dict(c, d) for c in checks]
        if args.table:
            rows = []
            for pm, pN in circle.REFERENCE_TABLE:
                least = circle.least_level(pm)
                rows.append({
                    "m": pm,
                    "tabulated_N": pN,
                    "least_N": least,
                    "holds_at_tabulated_N": circle.large_weight_criterion(pm, pN).ok,
                    "matches_table": least == pN,
                })
            doc["table"] = rows
    doc["exit_code"] = EXIT_OK
    return doc, config


def cmd_angles(args):
    config = make_config(args)
    d = config.digits
    spec = cv = None
    if args.spec:
        spec, cv = _spec_values(args.spec, config)
    k, N = _weight_level(args, spec)
    if N is None:
        raise SpecError("--level (or --spec) is required")
    sign = cv.sign if cv is not None else args.sign
    if args.sign is not None and sign != args.sign:
        raise SpecError("--sign %+d disagrees with the form's sign %+d" % (args.sign, sign))
    if sign is None:
        raise SpecError("--sign (or --spec) is required")
    m = (k - 2) // 2
    thetas = circle.predict_angles(m, N, sign, config.bits)
    doc = {
        "command": "angles",
        "weight": k,
        "level": N,
        "sign": sign,
        "predicted": [num(t, d) for t in thetas],
    }
    if cv is not None:
        roots = circle.find_roots(build_rf(cv))
        match = circle.match_roots_to_angles(roots, thetas, N, k, bits=config.bits)
        doc["observed"] = [num(t, d) for t in match.observed]
        doc["residuals"] = [num(r, d) for r in match.residuals]
        doc["max_residual"] = num(match.max_residual, d)
        doc["bound"] = num(match.bound, d)
        doc["passed"] = match.passed
        doc["empirical_ok"] = match.empirical_ok
    doc["exit_code"] = EXIT_OK
    return doc, config


COMMANDS = {"verify": cmd_verify, "lvalues": cmd_lvalues, "criteria": cmd_criteria, "angles": cmd_angles}


# -- rendering ----------------------------------------------------------------


def render_json(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_csv(doc):
    cmd = doc["command"]
    if cmd == "verify":
        header = ["label", "weight", "level", "sign", "summary", "exit_code",
                  "root", "re", "im", "radial_deviation", "angle"]
        rows = []
        for r in doc["reports"]:
            base = [r.get("label"), r.get("weight"), r.get("level"), r.get("sign"),
                    r.get("summary"), r.get("exit_code")]
            roots = r.get("circle", {}).get("roots", [])
            if not roots:
                rows.append(base + [""] * 5)
            for i, z in enumerate(roots):
                rows.append(base + [i, z["re"], z["im"], z["radial_deviation"], z["angle"]])
        return _csv(header, rows)
    if cmd == "lvalues":
        rows = []
        for r in doc["reports"]:
            for s, (lv, lam) in enumerate(zip(r.get("L", []), r.get("Lambda", [])), 1):
                rows.append([r["label"], r["weight"], r["level"], r["sign"], s, lv, lam, r["error_bound"]])
            if "error" in r:
                rows.append([r.get("label"), r.get("weight"), r.get("level"), r.get("sign"),
                             "", "", "", r["error"]["message"]])
        return _csv(["label", "weight", "level", "sign", "s", "L", "Lambda", "error_bound"], rows)
    if cmd == "criteria":
        rows = []
        th = doc["threshold"]
        rows.append(["(5.3) threshold", th.get("level_ok", ""), th.get("value") or "", "", "", th["note"]])
        checks = ([doc["large_weight"]] if "large_weight" in doc else []) + doc.get("value_criteria", [])
        for c in checks:
            rows.append([c["name"], c["ok"], c["margin"], c.get("lhs", ""), c.get("rhs", ""), c.get("note", "")])
        for t in doc.get("table", []):
            rows.append(["(6.5) table m=%d" % t["m"], t["matches_table"], "", t["least_N"], t["tabulated_N"], ""])
        return _csv(["name", "ok", "margin", "lhs", "rhs", "note"], rows)
    # residuals come sorted from the matching, so they get their own rows
    rows = [["predicted", i, t] for i, t in enumerate(doc["predicted"])]
    rows += [["observed", i, t] for i, t in enumerate(doc.get("observed", []))]
    rows += [["residual", i, t] for i, t in enumerate(doc.get("residuals", []))]
    return _csv(["kind", "index", "value"], rows)


def _text_report(r):
    lines = ["%s  k=%s N=%s eps=%s  %s (exit %d)" % (
        r.get("label"), r.get("weight"), r.get("level"), r.get("sign"),
        r.get("summary", "ok" if r["exit_code"] == 0 else "error"), r["exit_code"])]
    if "error" in r:
        lines.append("  error in stage %s: %s" % (r["error"]["stage"], r["error"]["message"]))
    for s, v in enumerate(r.get("L", []), 1):
        lines.append("  L(%d) = %s" % (s, v))
    if "circle" in r:
        c = r["circle"]
        lines.append("  roots: %d/%d, max radial deviation %s (tol %s)"
                     % (c["root_count"], c["expected_roots"], c["max_deviation"], c["tol"]))
    if "sign_changes" in r:
        s = r["sign_changes"]
        lines.append("  sign changes: %d (expected %d)" % (s["count"], s["expected"]))
    for c in r.get("checks", []):
        lines.append("  %-24s %s" % (c["name"], "ok" if c["ok"] else "FAIL"))
    # sufficient conditions: failing one is information, not an error
    for c in r.get("criteria", []):
        lines.append("  %-24s %s" % (c["name"], "holds" if c["ok"] else "does not hold"))
    a = r.get("angles")
    if a:
        if a["applicable"]:
            lines.append("  angles: max residual %s" % a["max_residual"])
        else:
            lines.append("  angles: not applicable (%s)" % a["reason"])
    return lines


def render_text(doc):
    lines = []
    if doc["command"] in ("verify", "lvalues"):
        for r in doc["reports"]:
            lines.extend(_text_report(r))
        for c in doc.get("claims", []):
            lines.append("claim %-40s %s" % (c["name"], "PASS" if c["ok"] else "FAIL"))
    elif doc["command"] == "criteria":
        lines.append("weight %d, m = %d%s" % (doc["weight"], doc["m"],
                     "" if doc["level"] is None else ", level %d" % doc["level"]))
        lines.append("(5.3): " + doc["threshold"]["note"])
        if "large_weight" in doc:
            lines.append("(6.5): %s" % ("holds" if doc["large_weight"]["ok"] else "fails"))
        for c in doc.get("value_criteria", []):
            lines.append("%-12s %s" % (c["name"], "holds" if c["ok"] else "fails"))
        for t in doc.get("table", []):
            lines.append("m=%-3d N(m) tabulated %-3d least %-3d" % (t["m"], t["tabulated_N"], t["least_N"]))
    else:
        for i, t in enumerate(doc["predicted"]):
            lines.append("theta_%d = %s" % (i, t))
        if "max_residual" in doc:
            lines.append("max residual %s (bound %s)" % (doc["max_residual"], doc["bound"]))
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, config = COMMANDS[args.command](args)
    except UsageError as exc:
        print("periodrh: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (SpecError, DomainError, AmbiguousAngleError) as exc:
        print("periodrh: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except PeriodRHError as exc:
        print("periodrh: %s" % exc, file=sys.stderr)
        return classify(exc)
    text = RENDERERS[config.fmt](doc)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return doc["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
