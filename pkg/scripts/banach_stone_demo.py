#!/usr/bin/env python3
"""Recover a self-map of [0, 1] from the isometry f -> f o psi it induces.

The isometry is only available as an oracle on vector names; the
recovered map is compared with psi at a handful of rational points.
"""
import argparse
from fractions import Fraction

from evalpres.cstar import VectorName, induce
from evalpres.duality import composition_operator, composition_oracle, spatial_realization
from evalpres.exactnum import two_pow
from evalpres.fixtures import EXACT_UNIT_MAPS, UNIT_MAPS, dyadic_name, unit_map
from evalpres.space import dyadic_point, unit_interval
from evalpres.starpoly import format_poly, index_of, StarPoly

POINTS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(5, 8), Fraction(1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--psi", choices=sorted(UNIT_MAPS), default="square")
    ap.add_argument("--prec", type=int, default=6)
    args = ap.parse_args()

    A = induce(unit_interval())
    psi = unit_map(args.psi)
    exact = EXACT_UNIT_MAPS[args.psi]

    f1 = VectorName.constant(index_of(StarPoly.var(1)))
    g = composition_operator(psi, A, A, f1, 3)
    print(f"d(0, .) o {args.psi}:")
    for k in range(4):
        print(f"  k={k}: {format_poly(g.poly(k))}")

    T = composition_oracle(psi, A, A, k_limit=args.prec + 6)
    print(f"spatial realization at precision 2^-{args.prec}:")
    for x in POINTS:
        y = dyadic_point(spatial_realization(T, A, A, dyadic_name(x))(args.prec))
        ok = abs(y - exact(x)) <= two_pow(args.prec)
        print(f"  x={x}: recovered {y}, exact {exact(x)}  {'ok' if ok else 'MISMATCH'}")


if __name__ == "__main__":
    main()
