"""Command-line interface: code construction, bounds evaluation, rate
allocation, curve sweeps, simulation campaigns, and table reproduction."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bounds import TestChannelPoint, bound_point, optimize_allocation
from .codes import get_preset, sample_ldgm, sample_ldpc
from .gf2 import write_alist
from .harness import emit_curves, load_config, reproduce_table1, run_experiment


def _probs(text):
    return tuple(float(x) for x in text.split(","))


def _cmd_construct_code(args):
    dd = get_preset(args.preset)
    seed = args.seed if args.seed is not None else 0
    if args.kind == "ldgm":
        code = sample_ldgm(args.n, args.m, dd, seed)
        matrix = code.generator
    else:
        code = sample_ldpc(args.m, args.k, dd, seed)
        matrix = code.parity
    with open(args.out, "w") as fp:
        write_alist(matrix, fp)
    print(f"wrote {args.kind} ({matrix.rows}x{matrix.cols}) to {args.out}")
    return 0


def _cmd_bounds(args):
    point = TestChannelPoint(d=_probs(args.d), p=_probs(args.p))
    bp = bound_point(point)
    print(f"sum_rate {bp.sum_rate:.6f}")
    print(f"distortion {bp.distortion:.6f}")
    return 0


def _cmd_optimize(args):
    point, bp = optimize_allocation(
        _probs(args.p), args.mode, args.value, grid_step=args.grid_step
    )
    print(f"d {','.join(f'{v:.4f}' for v in point.d)}")
    print(f"sum_rate {bp.sum_rate:.6f}")
    print(f"distortion {bp.distortion:.6f}")
    return 0


def _cmd_sweep(args):
    paths = emit_curves(args.out, grid_step=args.grid_step)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def _cmd_simulate(args):
    overrides = {}
    if args.seed is not None:
        overrides["scenario.seed"] = str(args.seed)
    if args.trials is not None:
        overrides["run.trials"] = str(args.trials)
    if args.out is not None:
        overrides["run.output_dir"] = args.out
    cfg = load_config(args.config, overrides)
    op = run_experiment(cfg, threads=args.threads)
    print(f"trials {op.trials} (shortfalls {op.shortfalls})")
    print(f"d_hat {','.join(f'{v:.4f}' for v in op.d_hat)}")
    print(f"stage_bers {','.join(f'{v:.4f}' for v in op.stage_bers)}")
    print(f"rates {','.join(f'{v:.4f}' for v in op.rates)}")
    if op.rates_formula is not None:
        print(f"rates_formula {','.join(f'{v:.4f}' for v in op.rates_formula)}")
    if op.alpha is not None:
        print(f"alpha {','.join(f'{v:.4f}' for v in op.alpha)}")
        print(f"beta {','.join(f'{v:.4f}' for v in op.beta)}")
    print(f"distortion_em {op.distortion_em:.6f} (stderr {op.stderr_em:.6f})")
    print(f"d_theory {op.d_theory:.6f}")
    print(f"gap {op.gap:.6f}")
    return 0


def _cmd_reproduce(args):
    profile = "quick" if args.quick else args.profile
    report = reproduce_table1(
        args.row, profile=profile, threads=args.threads, trials=args.trials
    )
    for line in report.lines():
        print(line)
    print(f"row {args.row} ({profile}): {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def _cmd_emit_curves(args):
    paths = emit_curves(args.out, grid_step=args.grid_step)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binceo",
        description="Multi-link binary source coding under log-loss",
    )
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--quick", action="store_true",
                        help="reduced-size profile where supported")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct-code", help="sample a code and write alist")
    p.add_argument("kind", choices=["ldgm", "ldpc"])
    p.add_argument("--n", type=int, help="codeword length (ldgm)", default=0)
    p.add_argument("--m", type=int, required=True, help="info bits / variables")
    p.add_argument("--k", type=int, default=0, help="checks (ldpc)")
    p.add_argument("--preset", default="reg-3")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_construct_code)

    p = sub.add_parser("bounds", help="evaluate the rate/distortion bound point")
    p.add_argument("--d", required=True, help="comma-separated test-channel d_i")
    p.add_argument("--p", required=True, help="comma-separated noise p_i")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("optimize", help="grid-optimize the d allocation")
    p.add_argument("--p", required=True)
    p.add_argument("--mode", choices=["fixed-distortion", "lagrangian"],
                   default="fixed-distortion")
    p.add_argument("--value", type=float, required=True,
                   help="target distortion or Lagrange multiplier")
    p.add_argument("--grid-step", type=float, default=0.005)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep", help="emit theoretical curve CSV bundles")
    p.add_argument("--out", required=True)
    p.add_argument("--grid-step", type=float, default=0.005)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="run a Monte Carlo campaign from a config")
    p.add_argument("config")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reproduce-table1", help="reproduce a published-table row")
    p.add_argument("row", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--profile", choices=["full", "quick"], default="full")
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("emit-curves", help="alias of sweep")
    p.add_argument("--out", required=True)
    p.add_argument("--grid-step", type=float, default=0.005)
    p.set_defaults(func=_cmd_emit_curves)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
