"""Regenerate the bundled coefficient files with PARI/GP (cypari2).

Not a runtime dependency: the files under src/periodrh/fixtures/ are the
product of this script and are checked in.  Run with

    python tools/make_fixtures.py [count]
"""
import sys
from pathlib import Path

import cypari2

# (weight, level, index of the rational eigenform in mfeigenbasis, label)
FORMS = [
    (4, 13, 0, "4.13.a"),
    (6, 5, 0, "6.5.a"),
    (6, 7, 0, "6.7.a"),
    (8, 2, 0, "8.2.a"),
    (8, 5, 0, "8.5.a"),
    (10, 12, 0, "10.12.a"),
    (16, 1, 0, "16.1.a"),
]

OUT = Path(__file__).resolve().parents[1] / "src" / "periodrh" / "fixtures"


def main(count=300):
    pari = cypari2.Pari()
    pari.allocatemem(2 * 10**9)
    for k, N, idx, label in FORMS:
        pari("mf=mfinit([%d,%d],0); B=mfeigenbasis(mf); F=mffields(mf)" % (N, k))
        assert int(pari("poldegree(F[%d])" % (idx + 1))) == 1, label
        sign = int(pari("lfunrootres(lfunmf(mf,B[%d]))[3]" % (idx + 1)))
        coeffs = [int(c) for c in pari("mfcoefs(B[%d],%d)" % (idx + 1, count))][1:]
        lines = [
            "# newform %s, exported from PARI/GP mfeigenbasis" % label,
            "weight=%d" % k,
            "level=%d" % N,
            "sign=%+d" % sign,
            "label=%s" % label,
        ]
        lines += [str(c) for c in coeffs]
        (OUT / ("%s.txt" % label)).write_text("\n".join(lines) + "\n")
        print(label, "sign", sign, coeffs[:6])


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))
