#!/usr/bin/env python3
"""Build cylinder assignments for a presentation of Cantor space.

Prints the number of balls and the radius used at each level, then the
machine check of every level.  ``--space cantor_standard`` shows the
search giving up: that presentation has no cover by formally disjoint
balls.
"""
import argparse
import time

from evalpres.cantor import build_homeomorphism, check_assignment
from evalpres.errors import SearchBudgetExhausted
from evalpres.exactnum import format_rational
from evalpres.space import builtin


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--space", choices=["cantor_variant", "cantor_standard"], default="cantor_variant")
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--budget", type=int, default=None)
    args = ap.parse_args()

    X = builtin(args.space)
    t0 = time.perf_counter()
    try:
        phi = build_homeomorphism(X, args.depth, budget=args.budget)
    except SearchBudgetExhausted as exc:
        print(f"search stopped after {time.perf_counter() - t0:.1f}s: {exc}")
        return
    for s, level in enumerate(phi.levels):
        radii = sorted({format_rational(b.radius) for b in level.balls()})
        problems = check_assignment(X, level, phi.levels[s - 1] if s else None)
        print(f"level {s}: {len(level.entries):4d} balls, radius {', '.join(radii)}, "
              f"longest string {level.max_sigma_length()}, {'ok' if not problems else problems[0]}")
    print(f"built in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
