"""Command-line entry point: ``contractlearn {gen,oracle,learn,regret,audit}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import instgen
from .driver import compute_params, discover_and_cover
from .environment import Environment
from .find_contract import suboptimality_audit
from .model import InstanceError, load_instance, principal_utility, save_instance
from .oracle_ref import grid_opt, solve_opt
from .regret import run_grid_baseline, run_regret, write_regret_csv

SEED_ENV = "CONTRACT_LEARNER_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _mix(value: str):
    if value in ("gamma", "eps"):
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("mix must be 'gamma', 'eps' or a number") from None


def _add_learning_flags(p):
    p.add_argument("--instance", required=True)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--n-bound", type=int, default=None,
                   help="upper bound on the number of agent actions (default: the instance's n)")
    p.add_argument("--eps", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--q", type=int)
    p.add_argument("--mix", type=_mix, default="gamma")
    p.add_argument("--seed", type=int)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)


def build_parser():
    parser = _Parser(prog="contractlearn")
    parser.add_argument("--config", help="JSON file of option defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs = {}

    g = subs["gen"] = sub.add_parser("gen", help="write an instance file")
    g.add_argument("family", choices=["random", "hardness"])
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--min-sep", type=float, default=0.0)
    g.add_argument("--eps", type=float, default=0.1, help="hardness parameter")
    g.add_argument("--strict", action="store_true", help="enforce eps < 1/80 for hardness")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)

    o = subs["oracle"] = sub.add_parser("oracle", help="optimal bounded contract")
    o.add_argument("--instance", required=True)
    o.add_argument("--B", type=float, default=1.0)
    o.add_argument("--grid", type=float, help="also report the grid brute force at this step")
    o.add_argument("--out")

    lp = subs["learn"] = sub.add_parser("learn", help="learn a contract from samples")
    _add_learning_flags(lp)
    lp.add_argument("--rho", type=float, default=0.5)
    lp.add_argument("--whitebox", action="store_true", help="report the audit against the true optimum")
    lp.add_argument("--trace-cover", help="append covering state as JSON lines to this file")
    lp.add_argument("--max-rounds", type=int, default=10**9)
    lp.add_argument("--out")

    rp = subs["regret"] = sub.add_parser("regret", help="explore-then-commit regret run")
    _add_learning_flags(rp)
    rp.add_argument("--T", type=int, required=True)
    rp.add_argument("--rho", type=float)
    rp.add_argument("--grid-baseline", type=float, metavar="STEP",
                    help="also run commit-to-best-of-grid with the same exploration budget")
    rp.add_argument("--csv", required=True)
    rp.add_argument("--out", help="JSON summary")

    a = subs["audit"] = sub.add_parser("audit", help="suboptimality of a given contract")
    a.add_argument("--instance", required=True)
    a.add_argument("--B", type=float, default=1.0)
    a.add_argument("--contract", required=True, help="JSON list of payments")
    a.add_argument("--out")
    return parser, subs


def parse_args(argv):
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("no subcommand given")
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        known = {a.dest for a in subs[args.command]._actions}
        unknown = set(cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        subs[args.command].set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer") from None


def _emit(payload, out) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params_for(args, inst, rho):
    n = args.n_bound if args.n_bound is not None else inst.n
    return compute_params(rho, args.delta, args.B, inst.m, n, eps=args.eps, eta=args.eta,
                          alpha=args.alpha, q=args.q, mix=args.mix)


def _learn_one(args, inst, seed):
    params = _params_for(args, inst, args.rho)
    env = Environment(inst, seed=seed)
    if args.trace_cover:
        with open(args.trace_cover, "a", newline="\n") as dump:
            res = discover_and_cover(env, params, max_rounds=args.max_rounds, dump=dump)
    else:
        res = discover_and_cover(env, params, max_rounds=args.max_rounds)
    out = {"seed": seed, **res.to_dict(), "params": params.to_dict(), "rho_effective": params.rho}
    if args.whitebox:
        opt = solve_opt(inst, args.B)
        out["opt_value"] = opt.value
        out["utility"] = principal_utility(inst, res.contract)
        out["audit"] = suboptimality_audit(inst, res.contract, args.B)
    return out


def _regret_one(args, inst, seed):
    run = run_regret(inst, args.T, args.delta, args.B, seed=seed, rho=args.rho,
                     n_bound=args.n_bound, eps=args.eps, eta=args.eta, alpha=args.alpha,
                     q=args.q, mix=args.mix)
    csv_path = args.csv if args.replicates == 1 else f"{args.csv}.seed{seed}"
    write_regret_csv(run, csv_path)
    out = {
        "seed": seed,
        "T": run.horizon,
        "regret": run.regret,
        "opt_value": run.opt_value,
        "exploration_rounds": run.exploration_rounds,
        "all_exploration": run.all_exploration,
        "contract": None if run.contract is None else run.contract.tolist(),
        "rho": run.rho,
        "csv": csv_path,
    }
    if args.grid_baseline:
        base = run_grid_baseline(inst, args.T, args.B, args.grid_baseline,
                                 run.exploration_rounds, seed=seed)
        out["grid_baseline_regret"] = base.regret
    return out


def _replicate(fn, args, inst):
    seed = resolve_seed(args.seed)
    seeds = [seed + k for k in range(args.replicates)]
    if args.replicates < 1 or args.jobs < 1:
        raise UsageError("--replicates and --jobs must be positive")
    if args.jobs == 1 or len(seeds) == 1:
        results = [fn(args, inst, s) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(fn, [args] * len(seeds), [inst] * len(seeds), seeds))
    results.sort(key=lambda r: r["seed"])
    return results[0] if len(results) == 1 else results


def run(args) -> None:
    if args.command == "gen":
        if args.family == "random":
            inst = instgen.gen_random(args.n, args.m, resolve_seed(args.seed), args.min_sep)
        else:
            inst = instgen.gen_hardness(args.eps, strict=args.strict)
        save_instance(inst, args.out)
        return

    inst = load_instance(args.instance)
    if args.command == "oracle":
        opt = solve_opt(inst, args.B)
        out = {"value": opt.value, "contract": opt.contract.tolist(), "action": opt.inducing_action}
        if args.grid:
            out["grid_value"] = grid_opt(inst, args.B, args.grid)
        _emit(out, args.out)
    elif args.command == "learn":
        _emit(_replicate(_learn_one, args, inst), args.out)
    elif args.command == "regret":
        summary = _replicate(_regret_one, args, inst)
        if args.out:
            _emit(summary, args.out)
    elif args.command == "audit":
        try:
            p = np.asarray(json.loads(args.contract), dtype=float)
        except (json.JSONDecodeError, ValueError, TypeError):
            raise UsageError("--contract must be a JSON list of numbers") from None
        if p.shape != (inst.m,):
            raise UsageError(f"contract must have {inst.m} entries")
        opt = solve_opt(inst, args.B)
        _emit({"audit": suboptimality_audit(inst, p, args.B), "opt_value": opt.value,
               "utility": principal_utility(inst, p)}, args.out)


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        run(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (InstanceError, OSError, ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
