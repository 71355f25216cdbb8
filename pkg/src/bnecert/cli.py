"""Command-line surface of the toolkit.

Exit codes: 0 success / certified, 2 exhausted without a certificate,
1 fatal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .certify import certify
from .discretize import build_finite, lift
from .driver import DIAGNOSTIC_GRID, RunConfig, run
from .errors import BnecertError
from .model import load_game_file
from .solver import check_prop1, default_alphas, solve_enum, solve_fp, solve_lp

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_UNCERTIFIED = 2


def _load(args):
    return load_game_file(args.spec, grid_check=args.grid_check)


def _solve(g, level, backend, epsilon=0.01, fp_max_iters=2000):
    fg = build_finite(g, level)
    prop1 = None
    if backend in ("auto", "lp"):
        prop1 = check_prop1(g)
    if backend == "auto":
        backend = "lp" if prop1.linearizable else "fp"
    if backend == "lp":
        if not prop1.linearizable:
            raise BnecertError(
                "lp backend requires the multiplier condition"
            )
        alpha1, alpha2 = default_alphas(fg, g, prop1)
        return fg, solve_lp(fg, alpha1, alpha2)
    if backend == "enum_oracle":
        return fg, solve_enum(fg)
    return fg, solve_fp(fg, max_iters=fp_max_iters, target_gap=epsilon / 10.0)


def cmd_check(args):
    g = _load(args)
    prop1 = check_prop1(g)
    print(json.dumps({
        "actions1": list(g.actions1),
        "actions2": list(g.actions2),
        "prior_norm": g.prior_norm,
        "shift1": g.shift1,
        "shift2": g.shift2,
        "multiplier_condition": prop1.kind,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_discretize(args):
    g = _load(args)
    fg = build_finite(g, args.level)
    doc = {
        "n": fg.n,
        "actions1": list(fg.actions1),
        "actions2": list(fg.actions2),
        "U": fg.U.tolist(),
        "V": fg.V.tolist(),
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_solve(args):
    g = _load(args)
    _, result = _solve(g, args.level, args.backend,
                       fp_max_iters=args.fp_max_iters)
    print(json.dumps({
        "backend": result.backend,
        "iterations": result.iterations,
        "finite_gap1": result.finite_gap1,
        "finite_gap2": result.finite_gap2,
        "objective": result.objective,
        "s": result.profile.s.tolist(),
        "t": result.profile.t.tolist(),
    }, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_certify(args):
    g = _load(args)
    _, result = _solve(g, args.level, args.backend, epsilon=args.epsilon,
                       fp_max_iters=args.fp_max_iters)
    F = lift(result.profile, 1, actions=g.actions1)
    G = lift(result.profile, 2, actions=g.actions2)
    cert = certify(g, F, G, args.epsilon, args.quad_tol)
    print(json.dumps(cert.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK if cert.certified else EXIT_UNCERTIFIED


def _write_curves(base, report):
    grid = np.linspace(0.0, 1.0, DIAGNOSTIC_GRID)
    for n, F, G, _ in report.level_strategies:
        for player, strat in ((1, F), (2, G)):
            path = f"{base}.curves.level{n}.player{player}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["theta", "action", "F"])
                for theta in grid:
                    for action in strat.actions:
                        writer.writerow(
                            [repr(float(theta)), action,
                             repr(strat.value(action, theta))]
                        )


def cmd_run(args):
    g = _load(args)
    cfg = RunConfig(
        epsilon=args.epsilon,
        max_level=args.max_level,
        schedule=args.schedule,
        backend=args.backend,
        fp_max_iters=args.fp_max_iters,
        quad_tol=args.quad_tol,
        output_path=args.output,
        emit_curves=args.emit_curves,
    )
    report = run(g, cfg)
    text = report.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        if args.emit_curves:
            _write_curves(args.output, report)
    else:
        print(text)
    return EXIT_OK if report.status == "certified" else EXIT_UNCERTIFIED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bnecert",
        description="Compute and certify epsilon-equilibria of "
                    "continuous-type Bayesian games by discretization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("spec", help="path to the JSON game spec")
        p.add_argument("--grid-check", type=int, default=101,
                       help="validation grid size (odd, >= 11)")
        p.add_argument("--fp-max-iters", type=int, default=2000)

    p = sub.add_parser("check", help="validate a game spec")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("discretize", help="dump level-n payoff tensors")
    add_common(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("solve", help="solve the level-n finite game")
    add_common(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--backend", default="auto",
                   choices=["auto", "lp", "fp", "enum_oracle"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", help="solve one level and certify it")
    add_common(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--backend", default="auto",
                   choices=["auto", "lp", "fp", "enum_oracle"])
    p.add_argument("--quad-tol", type=float, default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("run", help="full certification loop")
    add_common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--max-level", type=int, default=32)
    p.add_argument("--schedule", default="linear",
                   choices=["linear", "doubling"])
    p.add_argument("--backend", default="auto",
                   choices=["auto", "lp", "fp", "enum_oracle"])
    p.add_argument("--quad-tol", type=float, default=None)
    p.add_argument("--output")
    p.add_argument("--emit-curves", action="store_true")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BnecertError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
