"""Monte Carlo estimates of the separator laws on a solved instance.

Prints the marginal rates against alpha |u|^2, the worst far-pair joint rate
against alpha min |u|^2 / m and the distortion lower bound for a few m.

    python3 scripts/separator_mc.py --samples 200000
"""
import argparse
from fractions import Fraction

from hsse import checks
from hsse.embedding import normalize
from hsse.oracle import gen_gap_instance, gen_random_hypergraph, separator_lower_bound_test
from hsse.sdp import build_relaxation, solve
from hsse.separators import SeparatorParams, estimate_p
from hsse.streams import make_rng


def instance(name):
    if name == "gap":
        H, delta = gen_gap_instance(8)
    else:
        H, delta = gen_random_hypergraph(14, 18, (2, 4), seed=3), Fraction(1, 4)
    sol = solve(build_relaxation(H, delta))
    return delta, normalize(sol, tol_zero=1e-5)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--instance", choices=["gap", "random"], default="gap")
    ap.add_argument("--eps", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    delta, emb = instance(args.instance)
    m, beta = 4 / (args.eps * float(delta)), args.eps / 4
    for variant in ("l2", "l1"):
        p = estimate_p(emb, beta, make_rng(args.seed)) if variant == "l1" else None
        P = SeparatorParams.build(m, beta, emb.n, variant, p=p)
        print(f"[{variant}] {P.describe()}")
        for c in (
            checks.marginal_law(emb, P, args.samples, seed=args.seed),
            checks.far_pair_law(emb, P, args.samples, seed=args.seed + 1),
        ):
            print("  " + c.line())
    for mm in (6, 8, 12, 16):
        rep = separator_lower_bound_test(mm, args.samples, seed=args.seed + mm)
        print(f"lower bound m={mm}: distortion {rep.distortion:.3f} vs ceil(m)/4 = {rep.threshold:.2f} "
              f"({'PASS' if rep.passed else 'FAIL'})")


if __name__ == "__main__":
    main()
