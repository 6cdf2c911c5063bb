"""Horizontal moments of one cubic field, vertical moments of the cubic family, and the measure table."""

import argparse
import math

from frobclt.cubic import enumerate_fields, maximal_form
from frobclt.densities import ramification_mass
from frobclt.frobenius import FieldData, cubic_trace_family, trace_series
from frobclt.satotate import cdf_measure_moment, horizontal_moment, semicircle_moment, vertical_moment
from frobclt.symchar import trivial_multiplicity


def horizontal(poly, xs, R=4):
    form = maximal_form((1, poly[2], poly[1], poly[0]))
    rec = FieldData(tuple(poly), form.disc, form.coeffs)
    print("# horizontal: x,r,moment,n_r")
    for x in xs:
        s = trace_series(rec, x)
        for r in range(1, R + 1):
            print(f"{x},{r},{horizontal_moment(s, r):.6f},{trivial_multiplicity(3, r)}")


def vertical(X, primes, R=4):
    fields = enumerate_fields(X)
    fam = cubic_trace_family([f.form.coeffs for f in fields], [f.d_K for f in fields], max(primes))
    print(f"# vertical over {len(fam)} cubic fields: p,r,moment,n_r/(1+f(p))")
    for p in primes:
        for r in range(1, R + 1):
            ref = trivial_multiplicity(3, r) / (1 + float(ramification_mass("S3", p)))
            print(f"{p},{r},{vertical_moment(fam, p, r):.6f},{ref:.6f}")


def measure(ps, nmax=8):
    print("# measure: p,n,moment,catalan")
    for p in ps:
        for n in range(0, nmax + 1, 2):
            print(f"{p},{n},{cdf_measure_moment(p, n):.10f},{semicircle_moment(n)}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--poly", default="-1,-1,0,1", help="c0,c1,c2,1")
    ap.add_argument("--X", type=int, default=10**5)
    args = ap.parse_args(argv)
    horizontal([int(t) for t in args.poly.split(",")], [10**3, 10**4, 10**5, 10**6])
    vertical(args.X, [2, 3, 5, 7, 11, 101])
    measure([2, 3, 5, 101, 10**6, math.inf])


if __name__ == "__main__":
    main()
