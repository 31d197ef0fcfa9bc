#!/usr/bin/env python3
"""Run the acceptance criteria and write a JSON report.

    python3 scripts/run_acceptance.py                 # all criteria
    python3 scripts/run_acceptance.py --only 1,6,9    # a subset
"""
import argparse
import json
import sys

from evalpres.acceptance import run


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--only", help="comma-separated criterion numbers")
    ap.add_argument("--report", default="acceptance_report.json")
    args = ap.parse_args()
    numbers = [int(x) for x in args.only.split(",")] if args.only else None

    def show(res):
        print(f"{res.line()}  ({res.seconds:.1f}s)", flush=True)

    results = run(numbers, emit=show)
    with open(args.report, "w") as fh:
        json.dump([json.loads(r.to_json()) for r in results], fh, indent=2, sort_keys=True)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed; report in {args.report}")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
