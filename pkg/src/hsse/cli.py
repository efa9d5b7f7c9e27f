"""Command-line front end.

    hsse gen gap --r 8 -o gap8.hgr
    hsse round gap8.hgr --delta 0.125 --eps 0.5 --seed 1
    hsse oracle gap8.hgr --delta 0.125

Reports are JSON with sorted keys and a ``schema_version`` field; identical
flags and seed give byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import checks
from .embedding import NotNormalizable, normalize
from .formats import FormatError, format_graph, format_hmetis, format_hypergraph_json, read_graph, read_hypergraph
from .hypergraph import Graph, InvalidInstance, as_fraction
from .oracle import TooLarge, brute_force_hsse, brute_force_ssve, gen_gap_instance, gen_planted, gen_random_hypergraph, separator_lower_bound_test
from .reductions import ssve_solve, vertex_to_hypergraph
from .rounding import AllSamplesEmpty, RoundingConfig, jsonable, solve_hsse
from .sdp import SCHEMA_VERSION, NonConvergence, build_relaxation, solve
from .separators import SeparatorParams
from .streams import make_rng

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_NONCONVERGENCE = 4
EXIT_EMPTY = 5


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _delta(value: Fraction) -> Fraction:
    if not 0 < value <= Fraction(1, 2):
        raise UsageError(f"--delta must lie in (0, 1/2], got {value}")
    return value


def _dump(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    comment = f"generated by hsse gen {args.kind} seed={args.seed}"
    if args.kind == "gap":
        H, delta = gen_gap_instance(args.r)
        comment = f"generated by hsse gen gap r={args.r} delta={delta}"
    elif args.kind == "random":
        H = gen_random_hypergraph(args.n, args.m, (args.size_min, args.size_max), seed=args.seed)
    elif args.kind == "planted":
        inst = gen_planted(args.n, args.clusters, args.intra, args.inter, seed=args.seed, size_law=(args.size_min, args.size_max))
        H = inst.H
        comment += " clusters=" + ";".join(",".join(map(str, c)) for c in inst.partition)
    else:  # graph
        rng = make_rng(args.seed)
        pairs = [(u, v) for u in range(args.n) for v in range(u + 1, args.n) if rng.random() < args.p]
        _emit(format_graph(Graph.from_edges(args.n, pairs), comment), args.output)
        return EXIT_OK
    text = format_hypergraph_json(H, comment) if args.format == "json" else format_hmetis(H, comment)
    _emit(text, args.output)
    return EXIT_OK


def cmd_sdp(args) -> int:
    H = read_hypergraph(args.file)
    spec = build_relaxation(H, _delta(args.delta))
    sol = solve(spec, tol=args.tol, max_iters=args.max_iters)
    _emit(sol.to_json() + "\n", args.output)
    return EXIT_OK


def _config(args) -> RoundingConfig:
    return RoundingConfig(
        eps=args.eps,
        delta=_delta(args.delta),
        variant=args.variant,
        budget=args.budget,
        max_samples=args.max_samples,
        repeats=args.repeats,
        seed=args.seed,
        threads=args.threads,
        p=args.p,
        C=args.C,
        d_star=args.d_star,
        tol=args.tol,
        max_iters=args.max_iters,
    )


def cmd_round(args) -> int:
    if not 0 < args.eps < 1:
        raise UsageError(f"--eps must lie in (0, 1), got {args.eps}")
    cfg = _config(args)
    if args.graph:
        G = read_graph(args.file)
        rep = ssve_solve(G, cfg=cfg)
        if args.oracle:
            rep.hypergraph.oracle_opt = brute_force_ssve(G, cfg.delta)[2]
    else:
        H = read_hypergraph(args.file)
        rep = solve_hsse(H, cfg=cfg)
        if args.oracle:
            rep.oracle_opt = brute_force_hsse(H, cfg.delta)[1]
    _emit(rep.to_json(), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    delta = as_fraction(args.delta)
    if not 0 < delta < 1:
        raise UsageError("--delta must lie in (0, 1)")
    if args.graph:
        G = read_graph(args.file)
        S, phi_v, sym = brute_force_ssve(G, delta)
        obj = {"S": S.sorted(), "vertex_expansion": str(phi_v), "symmetric_vertex_expansion": str(sym)}
    else:
        H = read_hypergraph(args.file)
        S, phi = brute_force_hsse(H, delta)
        obj = {"S": S.sorted(), "phi": str(phi), "phi_float": float(phi)}
    obj.update({"schema_version": SCHEMA_VERSION, "delta": str(delta)})
    _emit(_dump(obj), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    H = vertex_to_hypergraph(read_graph(args.file))
    comment = f"vertex-to-hypergraph reduction of {Path(args.file).name}"
    # anchors only survive in JSON
    text = format_hmetis(H, comment) if args.format == "hmetis" else format_hypergraph_json(H, comment)
    _emit(text, args.output)
    return EXIT_OK


def _verify_checks(samples: int, level: str, seed: int) -> list:
    gap = normalize(np.eye(8) / 8)
    out = [
        checks.parity_law(trials=samples, seed=seed),
        checks.l2_separation(trials=samples, seed=seed + 1),
        checks.amplified_separation(trials=samples, seed=seed + 2),
    ]
    for i, v in enumerate(("l2", "l1")):
        P = SeparatorParams.build(64, 0.125, 8, v)
        out.append(checks.marginal_law(gap, P, samples, seed=seed + 10 + i))
        out.append(checks.far_pair_law(gap, P, samples, seed=seed + 20 + i))
    rep = separator_lower_bound_test(8, samples, seed=seed + 30)
    out.append(checks.Check("lower_bound[m=8]", rep.passed, rep.distortion or 0.0, (1 - rep.slack) * rep.threshold, rep.to_dict()))
    if level == "full":
        P = SeparatorParams.build(64, 0.125, 8, "l2")
        out.append(checks.word_collision(gap, P, samples, seed=seed + 40))
        out.append(checks.l1_split(gap, 0.125, range(8), trials=samples, seed=seed + 41))
    return out


def cmd_verify(args) -> int:
    results = _verify_checks(args.samples, args.level, args.seed)
    for c in results:
        print(c.line(), file=sys.stderr)
    obj = {"schema_version": SCHEMA_VERSION, "samples": args.samples, "level": args.level, "seed": args.seed,
           "checks": [c.to_dict() for c in results]}
    _emit(_dump(obj), args.output)
    return EXIT_OK if all(c.passed for c in results) else EXIT_FAIL


def cmd_bench(args) -> int:
    rows = []
    for n in args.sizes:
        for i in range(args.count):
            seed = args.seed + 1000 * n + i
            inst = gen_planted(n, 2, args.intra, args.inter, seed=seed)
            H = inst.H
            for delta in args.deltas:
                if delta * n < 1:
                    continue
                cfg = RoundingConfig(eps=args.eps, delta=delta, variant=args.variant, seed=seed,
                                     max_samples=args.max_samples, threads=args.threads)
                rep = solve_hsse(H, cfg=cfg)
                _, opt = brute_force_hsse(H, delta)
                _, opt_relaxed = brute_force_hsse(H, (1 + as_fraction(args.eps)) * delta)
                rows.append({
                    "n": n, "m": H.m, "instance": i, "delta": str(delta), "eps": args.eps, "variant": args.variant,
                    "size": len(rep.S), "phi": float(rep.phi), "sdpcost": rep.sdpcost,
                    "opt_delta": float(opt), "opt_relaxed": float(opt_relaxed),
                    "ratio_to_opt": None if opt == 0 else float(rep.phi / opt),
                    "ratio_to_sdp": rep.ratio,
                })
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["n"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(buf.getvalue(), args.output)
    else:
        _emit(_dump({"schema_version": SCHEMA_VERSION, "rows": rows}), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hsse", description="Small-set expansion in hypergraphs by SDP rounding.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=["gap", "random", "planted", "graph"])
    g.add_argument("--r", type=int, default=4)
    g.add_argument("--n", type=int, default=12)
    g.add_argument("--m", type=int, default=16)
    g.add_argument("--size-min", type=int, default=2)
    g.add_argument("--size-max", type=int, default=3)
    g.add_argument("--clusters", type=int, default=2)
    g.add_argument("--intra", type=float, default=1.0)
    g.add_argument("--inter", type=float, default=0.1)
    g.add_argument("--p", type=float, default=0.3, help="edge probability for random graphs")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["hmetis", "json"], default="hmetis")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sdp", help="build and solve the relaxation")
    s.add_argument("file")
    s.add_argument("--delta", type=_fraction, required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--max-iters", type=int, default=50_000)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sdp)

    r = sub.add_parser("round", help="solve and round")
    r.add_argument("file")
    r.add_argument("--delta", type=_fraction, required=True)
    r.add_argument("--eps", type=float, default=0.5)
    r.add_argument("--variant", choices=["l1", "l2"], default="l2")
    r.add_argument("--budget", type=int, help="samples per repetition (default 4n/alpha or 4n^2/alpha)")
    r.add_argument("--max-samples", type=int, default=200_000, help="cap on samples over all repetitions")
    r.add_argument("--repeats", type=int, help="rounding repetitions (default n)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--p", type=float, help="base separation probability (l1: estimated when omitted)")
    r.add_argument("--C", type=float, default=1.0)
    r.add_argument("--d-star", type=float, help="distortion estimate for the threshold diagnostic")
    r.add_argument("--tol", type=float, default=1e-6)
    r.add_argument("--max-iters", type=int, default=50_000)
    r.add_argument("--graph", action="store_true", help="input is a graph; solve small-set vertex expansion")
    r.add_argument("--oracle", action="store_true", help="also record the brute-force optimum")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_round)

    o = sub.add_parser("oracle", help="exact brute force (n <= 24)")
    o.add_argument("file")
    o.add_argument("--delta", type=_fraction, required=True)
    o.add_argument("--graph", action="store_true")
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("reduce", help="graph to hypergraph")
    d.add_argument("file")
    d.add_argument("--format", choices=["hmetis", "json"], default="json")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="statistical property checks of the samplers")
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--level", choices=["quick", "full"], default="quick")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="ratio tables over generated planted instances")
    b.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12])
    b.add_argument("--count", type=int, default=3)
    b.add_argument("--deltas", type=_fraction, nargs="+", default=[Fraction(1, 4), Fraction(1, 2)])
    b.add_argument("--eps", type=float, default=0.5)
    b.add_argument("--variant", choices=["l1", "l2"], default="l2")
    b.add_argument("--intra", type=float, default=1.5)
    b.add_argument("--inter", type=float, default=0.2)
    b.add_argument("--max-samples", type=int, default=20_000)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--format", choices=["json", "csv"], default="json")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, InvalidInstance, TooLarge) as exc:
        print(f"hsse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        print(f"hsse: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except NonConvergence as exc:
        print(f"hsse: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except NotNormalizable as exc:
        print(f"hsse: solver output not normalizable: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except AllSamplesEmpty as exc:
        print(f"hsse: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except ValueError as exc:
        print(f"hsse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
