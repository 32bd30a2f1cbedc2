"""Fourier coefficients of newforms: eta-quotient expansion and coefficient files.

All coefficient arithmetic is exact (Python integers).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd, isqrt
from pathlib import Path
from typing import Optional, Union

from .errors import CoefficientFileError, SpecError

SIGNS = {"+1": 1, "1": 1, "-1": -1, "unknown": None, "?": None}


@dataclass(frozen=True)
class EtaQuotient:
    """prod_d eta(d tau)^{r_d}, stored as sorted ``(d, r_d)`` pairs."""

    factors: tuple

    def __init__(self, factors):
        pairs = []
        for d, r in factors:
            d, r = int(d), int(r)
            if d < 1:
                raise SpecError("eta divisor must be positive, got %d" % d)
            if r == 0:
                raise SpecError("eta exponent for divisor %d is zero" % d)
            pairs.append((d, r))
        pairs.sort()
        divisors = [d for d, _ in pairs]
        if len(set(divisors)) != len(divisors):
            raise SpecError("eta divisors must be distinct: %s" % divisors)
        if not pairs:
            raise SpecError("eta quotient has no factors")
        total = sum(r for _, r in pairs)
        if total % 2:
            raise SpecError("exponent sum %d is odd; weight must be an integer" % total)
        order = sum(d * r for d, r in pairs)
        if order != 24:
            raise SpecError(
                "sum of divisor*exponent is %d, must be 24 for an expansion starting at q^1"
                % order
            )
        object.__setattr__(self, "factors", tuple(pairs))

    @property
    def weight(self):
        return sum(r for _, r in self.factors) // 2

    @classmethod
    def parse(cls, text):
        """Parse ``"2^4 4^4"`` (or ``"1^24"``) into an EtaQuotient."""
        factors = []
        for token in text.replace(",", " ").split():
            m = re.fullmatch(r"(\d+)\^(-?\d+)", token)
            if not m:
                raise SpecError("cannot parse eta factor %r (expected d^r)" % token)
            factors.append((int(m.group(1)), int(m.group(2))))
        return cls(factors)

    def __str__(self):
        return " ".join("%d^%d" % f for f in self.factors)


@dataclass(frozen=True)
class NewformSpec:
    weight: int
    level: int
    sign: Optional[int]
    source: Union[EtaQuotient, Path]
    label: str = ""

    def __post_init__(self):
        if self.weight % 2 or self.weight < 4:
            raise SpecError("weight must be even and >= 4, got %d" % self.weight)
        if self.level < 1:
            raise SpecError("level must be positive, got %d" % self.level)
        if self.sign not in (1, -1, None):
            raise SpecError("sign must be +1, -1 or unknown, got %r" % (self.sign,))
        if isinstance(self.source, EtaQuotient) and self.source.weight != self.weight:
            raise SpecError(
                "eta quotient %s has weight %d (half the exponent sum), declared %d"
                % (self.source, self.source.weight, self.weight)
            )

    @property
    def m(self):
        return (self.weight - 2) // 2


@dataclass(frozen=True)
class QExpansion:
    """Coefficients a(1), ..., a(M) with a(1) = 1."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs:
            raise CoefficientFileError("empty coefficient list")
        if coeffs[0] != 1:
            raise CoefficientFileError("normalization: a(1) = %d, expected 1" % coeffs[0])
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def truncation(self):
        return len(self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, n):
        """a(n), 1-based."""
        if n < 1:
            raise IndexError(n)
        return self.coefficients[n - 1]

    def truncate(self, M):
        return QExpansion(self.coefficients[:M])


# -- exact power series over Z, truncated to a fixed length -------------------


def _mul(a, b, n):
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: n - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def _inverse(a, n):
    # a[0] == 1
    inv = [0] * n
    inv[0] = 1
    for i in range(1, n):
        inv[i] = -sum(a[j] * inv[i - j] for j in range(1, min(i, len(a) - 1) + 1))
    return inv


def _power(a, r, n):
    if r < 0:
        a, r = _inverse(a, n), -r
    result = [1] + [0] * (n - 1)
    base = list(a[:n]) + [0] * max(0, n - len(a))
    while r:
        if r & 1:
            result = _mul(result, base, n)
        r >>= 1
        if r:
            base = _mul(base, base, n)
    return result


def euler_product(n, d=1):
    """prod_{j>=1} (1 - q^{dj}) to n terms, from the pentagonal number theorem."""
    out = [0] * n
    out[0] = 1
    j = 1
    while True:
        placed = False
        for pent in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if d * pent < n:
                out[d * pent] += -1 if j % 2 else 1
                placed = True
        if not placed:
            break
        j += 1
    return out


def expand_eta_quotient(spec: EtaQuotient, M: int) -> QExpansion:
    """First ``M`` coefficients of q^{-1} prod_d eta(d tau)^{r_d}."""
    if M < 1:
        raise ValueError("truncation must be >= 1")
    series = [1] + [0] * (M - 1)
    for d, r in spec.factors:
        series = _mul(series, _power(euler_product(M, d), r, M), M)
    return QExpansion(series)


# -- coefficient files --------------------------------------------------------


def parse_coefficient_file(text: str):
    """Parse a coefficient file; returns ``(metadata, QExpansion)``.

    Header lines are ``key=value``; every other non-comment line holds one
    integer, the n-th of them being a(n).
    """
    meta = {}
    coeffs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            if coeffs:
                raise CoefficientFileError("header line after coefficient body", lineno)
            key, _, value = line.partition("=")
            key, value = key.strip().lower(), value.strip()
            if key in ("weight", "level"):
                try:
                    meta[key] = int(value)
                except ValueError:
                    raise CoefficientFileError("%s is not an integer: %r" % (key, value), lineno)
            elif key == "sign":
                if value not in SIGNS:
                    raise CoefficientFileError("bad sign %r" % value, lineno)
                meta[key] = SIGNS[value]
            elif key == "label":
                meta[key] = value
            else:
                raise CoefficientFileError("unknown header key %r" % key, lineno)
            continue
        try:
            coeffs.append(int(line.replace("−", "-")))
        except ValueError:
            raise CoefficientFileError("not an integer: %r" % line, lineno)
    if not coeffs:
        raise CoefficientFileError("coefficient body is empty")
    if coeffs[0] != 1:
        raise CoefficientFileError("normalization: a(1) = %d, expected 1" % coeffs[0])
    return meta, QExpansion(coeffs)


def ingest_coefficients(document: str, spec: Optional[NewformSpec] = None) -> QExpansion:
    """Parse a coefficient file and check its metadata against ``spec``."""
    meta, q = parse_coefficient_file(document)
    if spec is not None:
        for key, want in (("weight", spec.weight), ("level", spec.level)):
            if key in meta and meta[key] != want:
                raise CoefficientFileError(
                    "%s mismatch: file declares %d, spec has %d" % (key, meta[key], want)
                )
    return q


def format_coefficient_file(q: QExpansion, weight, level, sign=None, label=""):
    sign_text = {1: "+1", -1: "-1", None: "unknown"}[sign]
    lines = ["weight=%d" % weight, "level=%d" % level, "sign=%s" % sign_text]
    if label:
        lines.append("label=%s" % label)
    lines.extend(str(c) for c in q.coefficients)
    return "\n".join(lines) + "\n"


# -- form specifications -----------------------------------------------------


def load_spec(path) -> NewformSpec:
    """Read a spec document or coefficient file from ``path``.

    A spec document names an eta-quotient recipe::

        eta: 2^4 4^4
        weight: 4
        level: 8
        sign: +1
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CoefficientFileError("cannot read %s: %s" % (path, exc))
    fields = {}
    is_doc = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if re.match(r"^eta\s*:", line):
            is_doc = True
        if ":" in line:
            key, _, value = line.partition(":")
            fields[key.strip().lower()] = (value.strip(), lineno)
    if is_doc:
        return _spec_from_document(fields, path)
    meta, q = parse_coefficient_file(text)
    for key in ("weight", "level"):
        if key not in meta:
            raise CoefficientFileError("%s: missing %s= header" % (path, key))
    return NewformSpec(
        weight=meta["weight"],
        level=meta["level"],
        sign=meta.get("sign"),
        source=path,
        label=meta.get("label") or path.stem,
    )


def _spec_from_document(fields, path):
    def get(key, convert, default=KeyError):
        if key not in fields:
            if default is KeyError:
                raise CoefficientFileError("%s: missing '%s:' line" % (path, key))
            return default
        value, lineno = fields[key]
        try:
            return convert(value)
        except (ValueError, KeyError):
            raise CoefficientFileError("bad %s value %r" % (key, value), lineno)

    eta = EtaQuotient.parse(fields["eta"][0])
    return NewformSpec(
        weight=get("weight", int, eta.weight),
        level=get("level", int),
        sign=get("sign", lambda v: SIGNS[v], None),
        source=eta,
        label=get("label", str, path.stem),
    )


def newform_coefficients(spec: NewformSpec, M: int) -> QExpansion:
    """At least ``M`` coefficients for ``spec`` (files may hold more)."""
    if isinstance(spec.source, EtaQuotient):
        return expand_eta_quotient(spec.source, M)
    try:
        text = Path(spec.source).read_text()
    except OSError as exc:
        raise CoefficientFileError("cannot read %s: %s" % (spec.source, exc))
    return ingest_coefficients(text, spec)


# -- Hecke structure ----------------------------------------------------------


@dataclass
class HeckeReport:
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self):
        return not self.violations


def _primes(limit):
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def validate_hecke(q: QExpansion, k: int, N: int) -> HeckeReport:
    """Check multiplicativity, the prime-power recursion and Deligne's bound."""
    a = q.coefficients
    M = len(a)
    report = HeckeReport()
    for m in range(2, isqrt(M) + 1):
        for n in range(m + 1, M // m + 1):
            if gcd(m, n) != 1:
                continue
            report.checked += 1
            if a[m * n - 1] != a[m - 1] * a[n - 1]:
                report.violations.append(
                    "multiplicativity: a(%d) = %d != a(%d)a(%d) = %d"
                    % (m * n, a[m * n - 1], m, n, a[m - 1] * a[n - 1])
                )
    for p in _primes(M):
        if N % p == 0:
            continue
        ap = a[p - 1]
        report.checked += 1
        if ap * ap > 4 * p ** (k - 1):
            report.violations.append(
                "Deligne bound: |a(%d)| = %d > 2*%d^%s" % (p, abs(ap), p, "(%d/2)" % (k - 1))
            )
        prev, cur, r = 1, ap, 1
        while p ** (r + 1) <= M:
            want = ap * cur - p ** (k - 1) * prev
            got = a[p ** (r + 1) - 1]
            report.checked += 1
            if got != want:
                report.violations.append(
                    "recursion: a(%d^%d) = %d, expected %d" % (p, r + 1, got, want)
                )
            prev, cur, r = cur, got, r + 1
    return report
