"""Approximation ratios of the full pipeline on planted instances.

Thin wrapper over ``hsse bench`` that also prints a summary table.

    python3 scripts/bench.py --sizes 8 12 16 --count 3
"""
import argparse
import json
import statistics
from fractions import Fraction
import sys

from hsse.cli import run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", nargs="+", default=["8", "10", "12"])
    ap.add_argument("--count", default="3")
    ap.add_argument("--variant", choices=["l1", "l2"], default="l2")
    ap.add_argument("--max-samples", default="20000")
    ap.add_argument("-o", "--output", default="bench.json")
    args = ap.parse_args()

    code = run(["bench", "--sizes", *args.sizes, "--count", args.count, "--variant", args.variant,
                "--max-samples", args.max_samples, "-o", args.output])
    if code:
        sys.exit(code)
    with open(args.output) as f:
        rows = json.load(f)["rows"]
    print(f"{'n':>4} {'delta':>6} {'runs':>5} {'median phi/opt':>15} {'max phi/opt':>12} {'zero opt hit':>13}")
    keys = sorted({(r["n"], r["delta"]) for r in rows}, key=lambda k: (k[0], Fraction(k[1])))
    for n, d in keys:
        sel = [r for r in rows if r["n"] == n and r["delta"] == d]
        ratios = [r["ratio_to_opt"] for r in sel if r["ratio_to_opt"] is not None]
        zero = sum(1 for r in sel if r["opt_delta"] == 0 and r["phi"] == 0)
        med = f"{statistics.median(ratios):.3f}" if ratios else "-"
        mx = f"{max(ratios):.3f}" if ratios else "-"
        print(f"{n:>4} {d:>6} {len(sel):>5} {med:>15} {mx:>12} {zero:>13}")


if __name__ == "__main__":
    main()
