"""Command line interface.

Exit codes: 0 on success, 1 for input errors (files, flags), 2 for
numerical failures (branch restrictions, overflow, non-convergence), 3 when
the structural verification finds violations.
"""

from __future__ import annotations

import argparse
import functools
import sys

import numpy as np

from .errors import (
    BranchError,
    ConfluentSpectrumError,
    ConvergenceError,
    NonFiniteResultError,
    TriangularInputError,
)
from .experiments import EXPERIMENTS, run_experiment, summarize
from .frechet import condition_numbers, verify_scaling_structure
from .kernels import KernelOptions, acosm, expm_sas, logm_iss
from .matio import MatrixFileError, read_matrix, write_matrix
from .scaling import apply_similarity, block_scaling, choose_parameters, scalar_scaling, scaled_compute
from .triangular import frobenius_norm, nilpotent_ratio

_KERNELS = {"exp": expm_sas, "log": logm_iss, "acos": acosm}

_NUMERICAL_FAILURES = (
    BranchError,
    ConfluentSpectrumError,
    ConvergenceError,
    NonFiniteResultError,
)
_INPUT_FAILURES = (MatrixFileError, TriangularInputError, OSError, ValueError)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags by default; 2 is reserved for
    # numerical failures here, so remap flag errors to exit code 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_sizes(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"sizes must be start:step:stop, got {text!r}")
    start, step, stop = (int(p) for p in parts)
    if step < 1 or stop < start:
        raise ValueError(f"bad size range {text!r}")
    return range(start, stop + 1, step)


def _cmd_scale(args) -> int:
    T = read_matrix(args.input)
    n = T.shape[0]
    if args.m is None:
        svec = scalar_scaling(n, args.alpha)
    else:
        svec = block_scaling(n, args.alpha, args.m)
    out = apply_similarity(T, svec, "inverse" if args.inverse else "forward")
    write_matrix(out, args.output)
    return 0


def _cmd_plan(args) -> int:
    plan = choose_parameters(read_matrix(args.input))
    print(f"alpha = {plan.alpha!r}")
    print(f"m = {plan.m}")
    print(f"block sizes = {' '.join(str(b) for b in plan.block_sizes)}")
    return 0


def _print_report(tag, rep):
    print(
        f"{tag}: count_s={rep.count_s} pade_degree={rep.pade_degree} "
        f"alpha={rep.alpha_used:g} m={rep.m_used} "
        f"input_ratio={rep.input_ratio:.6g} "
        f"result_norm={frobenius_norm(rep.value):.9e}"
    )


def _cmd_fn(args) -> int:
    T = read_matrix(args.input)
    opts = KernelOptions(theta=args.theta) if args.theta is not None else KernelOptions()
    kernel = functools.partial(_KERNELS[args.function], opts=opts)
    print(f"n = {T.shape[0]}, nilpotent ratio = {nilpotent_ratio(T):.6g}")
    result = None
    if args.mode in ("direct", "both"):
        rep = kernel(T)
        _print_report("direct", rep)
        result = rep.value
    if args.mode in ("scaled", "both"):
        rep = scaled_compute(T, kernel)
        _print_report("scaled", rep)
        if args.mode == "both" and result is not None:
            denom = frobenius_norm(rep.value)
            if denom > 0:
                print(f"agreement: {frobenius_norm(result - rep.value) / denom:.3e}")
        result = rep.value
    if args.output is not None:
        # with --mode both the scaled result is written
        write_matrix(result, args.output)
    return 0


def _cmd_cond(args) -> int:
    T = read_matrix(args.input)
    rep = condition_numbers(_KERNELS[args.fn], T)
    print(f"cond_abs = {rep.cond_abs:.9e}")
    print(f"cond_rel = {rep.cond_rel:.9e}")
    print(f"operator_norm_L = {rep.operator_norm_L:.9e}")
    print(f"function_norm = {rep.function_norm:.9e}")
    print(f"input_norm = {rep.input_norm:.9e}")
    return 0


def _cmd_verify(args) -> int:
    T = read_matrix(args.input)
    report = verify_scaling_structure(_KERNELS[args.fn], T, args.alpha)
    print(report.summary())
    return 0 if report.ok else 3


def _cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes) if args.sizes is not None else None
    records = run_experiment(
        args.experiment, sizes=sizes, seed=args.seed, out_path=args.out
    )
    print(summarize(records))
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="trifun", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scale", help="apply or undo the diagonal scaling similarity")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, default=None, help="block count (default: order, i.e. scalar scaling)")
    p.add_argument("--inverse", action="store_true", help="undo instead of apply")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_scale)

    p = sub.add_parser("plan", help="print the chosen (alpha, m, block sizes)")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("fn", help="compute a matrix function and print diagnostics")
    p.add_argument("function", choices=sorted(_KERNELS))
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["direct", "scaled", "both"], default="both")
    p.add_argument("--theta", type=float, default=None, help="square-root phase threshold for log/acos")
    p.add_argument("--output", default=None, help="write the computed matrix (scaled one under --mode both)")
    p.set_defaults(func=_cmd_fn)

    p = sub.add_parser("cond", help="condition numbers via the Kronecker form (n <= 20)")
    p.add_argument("--fn", choices=["exp", "log"], required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_cond)

    p = sub.add_parser("verify", help="structural verification of the scaling relations")
    p.add_argument("--fn", choices=["exp", "log"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark suite and write CSV")
    p.add_argument("--experiment", choices=[e for e in EXPERIMENTS if e != "custom"], required=True)
    p.add_argument("--sizes", default=None, help="start:step:stop override for sized suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _NUMERICAL_FAILURES as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except _INPUT_FAILURES as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
