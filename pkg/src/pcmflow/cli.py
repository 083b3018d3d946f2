"""Command-line entry point: ``pcmflow {solve,analyze,gen,bench}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench
from .lwae import DEFAULT_EPSILON, METHODS, solve
from .pcm import (
    deviations,
    geometric_mean_vector,
    gp_error,
    is_consistent,
    principal_eigenvector,
    random_pcm,
    read_matrix_csv,
    saaty_index,
    write_matrix_csv,
)
from .refine import refine_to_unique


def _weights_out(v, normalize):
    v = np.asarray(v, dtype=float)
    if normalize == "sum":
        return v / v.sum()
    return v / v[0]


def _fmt(x) -> str:
    return f"{x:.12g}"


def _pairs_1based(cycles):
    return [[k + 1 for k in c] for c in cycles]


def solve_report(A, epsilon, method, refine, normalize="first") -> dict:
    """The JSON-ready report printed by ``pcmflow solve``."""
    n = A.n
    first = solve(A, epsilon, method)
    report = {
        "n": n,
        "z_opt": first.z_opt,
        "weights": None,
        "method": method,
        "iterations": first.iterations,
        "subproblems": first.subproblems_solved,
        "levels": [first.z_opt],
        "dimension": None,
        "unique": None,
        "epsilon": epsilon,
        "cycles": _pairs_1based(first.cycle_trace),
    }
    v = first.v.v
    if refine:
        ref = refine_to_unique(A, epsilon, method=method)
        v = ref.final_v.v
        report.update(
            levels=ref.levels,
            dimension=ref.dimension_at_first_level,
            unique=ref.unique_at_first_level,
            refine_iterations=ref.iterations,
        )
    report["weights"] = _weights_out(v, normalize).tolist()
    dev = deviations(A, v)
    report["deviations"] = [
        {"i": i + 1, "j": j + 1, "a_ij": float(A[i, j]), "ratio": float(v[i] / v[j]), "deviation": float(dev[i, j])}
        for i in range(n)
        for j in range(n)
        if i != j
    ]
    return report


def _print_solve(rep, out):
    print(f"n = {rep['n']}   method = {rep['method']}   epsilon = {rep['epsilon']:g}", file=out)
    print(f"z_opt = {_fmt(rep['z_opt'])}", file=out)
    print(f"iterations = {rep['iterations']}   subproblems = {rep['subproblems']}", file=out)
    if rep["dimension"] is not None:
        print("levels = [" + ", ".join(_fmt(z) for z in rep["levels"]) + "]", file=out)
        print(f"dimension of optimal set = {rep['dimension']}   unique = {str(rep['unique']).lower()}", file=out)
    print("weights:", file=out)
    for k, x in enumerate(rep["weights"], start=1):
        print(f"  v{k} = {_fmt(x)}", file=out)
    print("deviations |a_ij - v_i/v_j|:", file=out)
    for d in sorted(rep["deviations"], key=lambda d: -d["deviation"]):
        print(f"  ({d['i']},{d['j']})  a = {_fmt(d['a_ij'])}  v_i/v_j = {_fmt(d['ratio'])}  dev = {_fmt(d['deviation'])}", file=out)


def analyze_report(A, epsilon=DEFAULT_EPSILON) -> dict:
    gm = geometric_mean_vector(A)
    ev, lam = principal_eigenvector(A)
    lw = refine_to_unique(A, epsilon)
    methods = {"geometric_mean": gm.v, "eigenvector": ev.v, "lwae": lw.final_v.v}
    return {
        "n": A.n,
        "consistent": is_consistent(A),
        "lambda_max": lam,
        "saaty_index": saaty_index(A, lam),
        "methods": {
            name: {"weights": v.tolist(), "g2": gp_error(A, v, 2), "ginf": gp_error(A, v, np.inf)}
            for name, v in methods.items()
        },
    }


def _print_analyze(rep, out):
    print(f"n = {rep['n']}   consistent = {str(rep['consistent']).lower()}", file=out)
    print(f"lambda_max = {_fmt(rep['lambda_max'])}   Saaty index = {_fmt(rep['saaty_index'])}", file=out)
    for name, m in rep["methods"].items():
        w = ", ".join(_fmt(x) for x in m["weights"])
        print(f"{name:15s} G2 = {_fmt(m['g2'])}  Ginf = {_fmt(m['ginf'])}  v = [{w}]", file=out)


def cmd_solve(args, out):
    A = read_matrix_csv(args.matrix)
    rep = solve_report(A, args.epsilon, args.method, args.refine, args.normalize)
    if args.output == "json":
        json.dump(rep, out, indent=2)
        out.write("\n")
    else:
        _print_solve(rep, out)


def cmd_analyze(args, out):
    A = read_matrix_csv(args.matrix)
    rep = analyze_report(A, args.epsilon)
    if args.output == "json":
        json.dump(rep, out, indent=2)
        out.write("\n")
    else:
        _print_analyze(rep, out)


def gen_files(n, a_max, seed, count, out_dir) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    for k in range(count):
        A = random_pcm(n, a_max, rng)
        path = out_dir / f"pcm_n{n}_a{a_max}_s{seed}_{k}.csv"
        write_matrix_csv(A, path, header=f"n={n} a_max={a_max} seed={seed} k={k}")
        paths.append(path)
    return paths


def cmd_gen(args, out):
    for p in gen_files(args.n, args.a_max, args.seed, args.count, args.out_dir):
        print(p, file=out)


def cmd_bench(args, out):
    summaries, records = bench.run_bench(args.n, args.a_max, args.trials, args.epsilon, args.seed)
    if args.output == "json":
        out.write(bench.summaries_to_json(summaries) + "\n")
    else:
        out.write(bench.format_table(summaries))
    if args.records:
        Path(args.records).write_text(json.dumps(records, indent=1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcmflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
        p.add_argument("--output", choices=("text", "json"), default="text")

    p = sub.add_parser("solve", help="minimize the worst deviation and refine to the Pareto-optimal point")
    p.add_argument("matrix")
    common(p)
    p.add_argument("--method", choices=sorted(METHODS), default="cycle-cancel")
    p.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--normalize", choices=("first", "sum"), default="first")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("analyze", help="compare baseline priority vectors with the LWAE solution")
    p.add_argument("matrix")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", help="write random matrices as CSV files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a-max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="timing experiment over random matrices")
    p.add_argument("--n", type=int, nargs="+", default=[10, 20])
    p.add_argument("--a-max", type=int, nargs="+", default=[3, 5, 10])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--records", help="also write per-instance records to this JSON file")
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    for name in ("n", "a_max", "trials", "count"):
        val = getattr(args, name, None)
        vals = val if isinstance(val, list) else [val]
        if val is not None and any(x < 1 for x in vals):
            print(f"pcmflow: error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return 2
    if getattr(args, "epsilon", 1.0) <= 0:
        print("pcmflow: error: --epsilon must be positive", file=sys.stderr)
        return 2
    try:
        args.func(args, out)
    except (ValueError, OSError) as exc:
        print(f"pcmflow: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
