"""Integrality gap of the relaxation on the single-hyperedge instance.

For each r the relaxation value is about 2/r while every admissible set
cuts the edge, so the gap grows like r/2.

    python3 scripts/gap_reproduction.py --r 4 8 16 24
"""
import argparse
import json
import time

from hsse.oracle import brute_force_hsse, gen_gap_instance
from hsse.sdp import build_relaxation, check_feasibility, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, nargs="+", default=[4, 8, 16])
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args()

    rows = []
    for r in args.r:
        H, delta = gen_gap_instance(r)
        spec = build_relaxation(H, delta)
        t0 = time.perf_counter()
        sol = solve(spec, tol=args.tol)
        dt = time.perf_counter() - t0
        _, opt = brute_force_hsse(H, delta)
        rows.append({
            "r": r,
            "sdpcost": sol.sdpcost,
            "expected": 2 / r,
            "opt": float(opt),
            "gap": float(opt) / sol.sdpcost,
            "half_r": r / 2,
            "worst_residual": float(check_feasibility(sol, spec, args.tol).worst),
            "iterations": sol.iterations,
            "seconds": round(dt, 3),
        })
        print(f"r={r:3d} sdpcost={sol.sdpcost:.6f} gap={rows[-1]['gap']:.3f} (r/2={r / 2}) {dt:.2f}s")
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
