"""Command-line interface.

Subcommands:

    build      construct the measurement and print its JSON form
    verify     run the algebraic check battery, exit 2 on any failure
    simulate   Monte Carlo experiment (JSON summary or per-trial CSV)
    optimize   re-derive the optimal scale in the abstract representation

Exit codes: 0 success, 1 usage error, 2 a verification check failed.
The environment variable QID_THREADS is a parallelism hint for
`simulate`; it never changes the numbers.
"""

import argparse
import os
import sys

import numpy as np

from . import jsonio
from .analytics import verify_report
from .detection import build_povm, povm_to_dict
from .montecarlo import run_experiment
from .sym_optimizer import (
    build_symmetric_family,
    frame_operator,
    optimal_weight_eigen,
    optimal_weight_grid,
)


class _Parser(argparse.ArgumentParser):
    """argparse's default usage-error exit code is 2; this CLI reserves
    2 for failed verification checks, so usage errors exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _threads_hint():
    raw = os.environ.get("QID_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_build(args):
    povm = build_povm(args.d)
    _emit(jsonio.dumps(povm_to_dict(povm)), args.out)
    return 0


def _cmd_verify(args):
    report = verify_report(args.d)
    _emit(jsonio.dumps(report), args.out)
    return 0 if report["ok"] else 2


def _csv_lines(report):
    yield "trial,truth,outcome,p_success,p_inconclusive"
    for i in range(report.trials):
        yield (
            f"{i},{report.truths[i]},{report.outcomes[i]},"
            f"{jsonio.format_float(report.p_correct[i])},"
            f"{jsonio.format_float(report.p_inconclusive[i])}"
        )


def _cmd_simulate(args):
    try:
        report = run_experiment(args.d, args.trials, args.seed, _threads_hint())
    except RuntimeError as exc:
        _emit(jsonio.dumps({"failed_checks": ["trial_consistency"], "detail": str(exc)}), args.out)
        return 2
    if args.format == "csv":
        _emit("\n".join(_csv_lines(report)), args.out)
    else:
        _emit(jsonio.dumps(report.summary_dict()), args.out)
    return 0


def _cmd_optimize(args, parser):
    if args.mode == "grid" and args.d not in (2, 3):
        parser.error("--mode grid supports --d 2 or 3 only")
    if not 0.0 < args.resolution <= 0.1:
        parser.error("--resolution must lie in (0, 0.1]")
    fam = build_symmetric_family(args.d)
    spectrum = np.linalg.eigvalsh(frame_operator(fam))
    payload = {"d": args.d, "mode": args.mode, "spectrum": list(spectrum)}
    if args.mode == "eigen":
        alpha = optimal_weight_eigen(fam)
        payload["alpha_opt"] = alpha
        payload["S_opt"] = args.d * alpha
    else:
        weights, total = optimal_weight_grid(fam, args.resolution)
        payload["resolution"] = args.resolution
        payload["alpha_opt"] = list(weights)
        payload["S_opt"] = total
    _emit(jsonio.dumps(payload), args.out)
    return 0


def _build_parser():
    parser = _Parser(prog="quditid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="construct the measurement")
    build.add_argument("--d", type=int, choices=[2, 3, 4, 5], required=True)
    build.add_argument("--out", default=None)

    verify = sub.add_parser("verify", help="run the algebraic checks")
    verify.add_argument(
        "--d", type=int, choices=[2, 3, 4], required=True,
        help="dimension (5 needs dense eigensolves and is not supported here)",
    )
    verify.add_argument("--out", default=None)

    simulate = sub.add_parser("simulate", help="Monte Carlo experiment")
    simulate.add_argument("--d", type=int, choices=[2, 3, 4, 5], required=True)
    simulate.add_argument("--trials", type=_positive_int, default=100000)
    simulate.add_argument("--seed", type=_nonnegative_int, default=0)
    simulate.add_argument("--format", choices=["json", "csv"], default="json")
    simulate.add_argument("--out", default=None)

    optimize = sub.add_parser("optimize", help="re-derive the optimal scale")
    optimize.add_argument("--d", type=int, choices=[2, 3, 4, 5], required=True)
    optimize.add_argument("--mode", choices=["eigen", "grid"], default="eigen")
    optimize.add_argument("--resolution", type=float, default=0.01)
    optimize.add_argument("--out", default=None)

    return parser


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_optimize(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
