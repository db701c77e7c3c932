"""Command-line interface.

Subcommands: gen (construct + save alist), girth, decode (one-shot),
simulate (Monte Carlo sweep from a JSON config), verify (property suites),
bounds (closed-form tables).  Usage errors exit 2, runtime failures exit 1
with a diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from . import verify as verify_mod
from .channel import Channel, sample_llrs, threshold_param
from .errors import LpwitnessError
from .experiment import ExperimentConfig, run_experiment, write_results
from .lp import dump_inequalities, lp_decode, polytope_constraints
from .minsum import run_standard_msa
from .tanner import CodeParams, construct_regular, girth, load_alist, save_alist
from .witness import witness


def _cmd_gen(args) -> int:
    params = CodeParams(n=args.n, j_weight=args.j, k_weight=args.k,
                        seed=args.seed)
    graph = construct_regular(params, args.min_girth,
                              max_restarts=args.max_restarts)
    text = save_alist(graph)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    print(f"wrote ({args.j},{args.k})-regular N={args.n} graph, "
          f"girth {girth(graph)}", file=sys.stderr)
    return 0


def _cmd_girth(args) -> int:
    graph = load_alist(Path(args.alist).read_text())
    g = girth(graph)
    print("inf" if g == math.inf else int(g))
    return 0


def _cmd_decode(args) -> int:
    graph = load_alist(Path(args.alist).read_text())
    if args.llrs:
        llrs = np.array([float(t) for t in Path(args.llrs).read_text().split()])
        if llrs.shape != (graph.n_vars,):
            raise LpwitnessError(
                f"LLR file has {llrs.size} values, graph has {graph.n_vars}")
    else:
        ch = Channel(args.channel, args.param)
        llrs = sample_llrs(ch, graph.n_vars, args.seed)
    if np.any(llrs == 0.0):
        print("warning: zero LLR entries present; optimizer ties are likely",
              file=sys.stderr)
    depth = args.l
    if depth == 0:
        g = girth(graph)
        depth = bounds_mod.max_depth_for_girth(g)
        if depth == bounds_mod.UNBOUNDED_DEPTH or depth < 1:
            raise LpwitnessError(f"girth {g} admits no automatic tree depth")
    result = {"n": graph.n_vars, "depth": int(depth)}
    decoders = args.decoders.split(",")
    if "lp" in decoders:
        cons = polytope_constraints(graph)
        if args.dump_lp:
            Path(args.dump_lp).write_text(dump_inequalities(cons))
        sol = lp_decode(graph, llrs, tol=args.tol, constraints=cons)
        result["lp"] = {
            "value": sol.value,
            "integral": sol.is_integral,
            "unique": sol.is_unique,
            "all_zeros_optimal": bool(sol.value >= -args.tol),
            "x": [round(float(v), 9) for v in sol.x],
        }
    if "msa_standard" in decoders:
        _, hard = run_standard_msa(graph, llrs, int(depth))
        result["msa_standard"] = {"hard_decision": hard.tolist(),
                                  "all_zeros": bool(not hard.any())}
    if "witness" in decoders:
        res = witness(graph, llrs, int(depth))
        result["witness"] = res.to_json_dict()
    if args.dump_messages:
        from .minsum import run_modified_msa
        log = run_modified_msa(graph, llrs, int(depth), 0.0)
        Path(args.dump_messages).write_text(
            json.dumps(log.to_json_dict()) + "\n")
    json.dump(result, sys.stdout, indent=2)
    print()
    return 0


def _cmd_simulate(args) -> int:
    raw = json.loads(Path(args.config).read_text())
    cfg = ExperimentConfig.from_json_dict(raw)
    if args.code is not None:
        cfg = ExperimentConfig(**{**cfg.__dict__, "alist_path": args.code,
                                  "code_params": None})
    if args.seed is not None:
        cfg = ExperimentConfig(**{**cfg.__dict__, "seed": args.seed})
    if args.trials is not None:
        cfg = ExperimentConfig(**{**cfg.__dict__, "trials": args.trials})
    cfg.validate()
    records, points = run_experiment(cfg, threads=args.threads)
    written = write_results(args.out, cfg, records, points,
                            figures=not args.no_figures)
    for path in written:
        print(path)
    return 0


def _cmd_verify(args) -> int:
    suite = verify_mod.SUITES.get(args.suite)
    if suite is None:
        print(f"unknown suite {args.suite!r}; available: "
              f"{', '.join(sorted(verify_mod.SUITES))}", file=sys.stderr)
        return 2
    kwargs = {}
    if args.j is not None:
        kwargs["j_weight"] = args.j
    if args.k is not None:
        if args.suite in ("check-minima",):
            kwargs["k_weights"] = (args.k,)
        elif args.suite == "tree-words":
            kwargs["k_weights"] = (args.k,)
        else:
            kwargs["k_weight"] = args.k
    if args.l is not None:
        if args.suite in ("init-offset",):
            kwargs["depths"] = (args.l,)
        elif args.suite == "tree-words":
            kwargs["depths"] = (args.l,)
        elif args.suite in ("aggregation", "telescoping", "certificate",
                            "aj-bound"):
            kwargs["depth"] = args.l
    if args.n is not None and args.suite in ("aggregation", "init-offset",
                                             "telescoping", "certificate"):
        kwargs["n"] = args.n
    if args.seed is not None and args.suite != "tree-words":
        kwargs["seed"] = args.seed
    if args.trials is not None and args.suite != "tree-words":
        kwargs["trials"] = args.trials
    result = suite(**kwargs)
    status = "PASS" if result["passed"] else "FAIL"
    detail = " ".join(f"{k}={v}" for k, v in result.items()
                      if k not in ("passed", "cases"))
    print(f"{status} {args.suite}: {detail}")
    for case in result.get("cases", []):
        print("  " + " ".join(f"{k}={v}" for k, v in case.items()))
    return 0 if result["passed"] else 1


def _cmd_bounds(args) -> int:
    rows = {
        "j": args.j, "k": args.k, "l": args.l,
        "gamma_threshold": bounds_mod.gamma_threshold(args.k),
        "min_tree_codeword_weight":
            bounds_mod.min_tree_codeword_weight(args.j, args.l),
        "num_min_tree_codewords":
            bounds_mod.num_min_tree_codewords(args.j, args.k, args.l),
    }
    rows.update(bounds_mod.error_exponents(args.j, args.k))
    for kind in ("bsc", "biawgn"):
        rows[f"threshold_param_{kind}"] = threshold_param(kind, args.k)
    if args.gamma is not None:
        rows["gamma"] = args.gamma
        rows["p_aj_union_bound"] = bounds_mod.p_aj_union_bound(
            args.j, args.k, args.l, args.gamma)
        if args.n is not None:
            rows["pw_union_bound"] = bounds_mod.pw_union_bound(
                args.n, args.j, args.k, args.gamma, args.l)
    if args.n is not None and args.kappa is not None:
        rows["depth_from_blocklength"] = bounds_mod.depth_from_blocklength(
            args.n, args.j, args.k, args.kappa)
    width = max(len(k) for k in rows)
    for key, value in rows.items():
        if isinstance(value, float):
            value = f"{value:.9g}"
        print(f"{key:<{width}}  {value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpwitness",
        description="LP decoding of regular LDPC codes with min-sum based "
                    "dual-witness certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="construct a regular graph, save alist")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-girth", type=int, default=6)
    p.add_argument("--max-restarts", type=int, default=80)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("girth", help="print the girth of an alist graph")
    p.add_argument("--alist", required=True)
    p.set_defaults(func=_cmd_girth)

    p = sub.add_parser("decode", help="one-shot decode of provided LLRs")
    p.add_argument("--alist", required=True)
    p.add_argument("--llrs", help="text file of whitespace-separated LLRs")
    p.add_argument("--channel", default="bsc", choices=("bsc", "biawgn"))
    p.add_argument("--param", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--l", type=int, default=0,
                   help="tree depth; 0 means derive from the girth")
    p.add_argument("--decoders", default="lp,witness")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--dump-lp", help="write the inequality system to a file")
    p.add_argument("--dump-messages",
                   help="write the zero-init message log as JSON to a file")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--code", help="alist file overriding the config's code")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes; 1 forces serial execution")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", help="closed-form bound and count tables")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--kappa", type=float)
    p.set_defaults(func=_cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LpwitnessError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
