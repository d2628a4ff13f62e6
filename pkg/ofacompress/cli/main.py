# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import argparse
from typing import List, Optional

from ..errors import ExitCode, OfaCompressError
from ..options import RunOptions
from ..utils import verboselogs
from . import commands
from .enums import STOCHASTIC, Command
from .selftest import run_selftest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ofacompress",
        description="Once-for-all sequence compression: CIF subsampling with a λ-controlled compressing rate.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug")
    parser.add_argument("--seed", type=int, default=None, help="seed for stochastic commands (fallback: OFA_SEED)")
    parser.add_argument("--workers", type=int, default=None, help="worker threads (fallback: OFA_WORKERS)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(Command.GenData, help="generate a synthetic corpus")
    p.add_argument("--spec", default=None, help="SyntheticSpec JSON")
    p.add_argument("--out", required=True, help="output directory")

    for name, help_text in ((Command.Pretrain, "once-for-all pre-training"), (Command.PretrainFixed, "fixed-λ specialist")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="TrainConfig JSON")
        p.add_argument("--data", required=True, help="corpus directory")
        p.add_argument("--out", required=True, help="checkpoint path")
        p.add_argument("--trace", default=None, help="loss trace CSV (default: <out stem>.trace.csv)")
        if name == Command.Pretrain:
            p.add_argument("--range", dest="lambda_range", default=None, help="λ range low:high, e.g. 0:1.5")
        else:
            p.add_argument("--lambda", dest="fixed_lambda", type=float, required=True, help="the constant λ")

    p = sub.add_parser(Command.Sweep, help="evaluate a checkpoint over λ values")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--lambdas", required=True, help="comma list or grid:N")
    p.add_argument("--out", required=True, help="CSV path")

    p = sub.add_parser(Command.Adapt, help="learn λ on a downstream task")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--task", required=True, help="labeled corpus directory")
    p.add_argument("--config", default=None, help="AdaptConfig JSON")
    p.add_argument("--theta-lr", type=float, default=None, help="θ learning rate (default 1e-3)")
    p.add_argument("--level", choices=["utterance", "frame"], default=None)
    p.add_argument("--grid", type=int, default=None, help="also run an N-point grid search")
    p.add_argument("--out", required=True, help="JSON report path")

    p = sub.add_parser(Command.Profile, help="MACs reduction per frame period")
    p.add_argument("--config", default=None, help="MacsConfig JSON")
    p.add_argument("--periods", default="20,90,160,960", help="comma list of milliseconds")
    p.add_argument("--out", required=True, help="CSV path")

    p = sub.add_parser(Command.Selftest, help="run the invariant suite")
    p.add_argument("--full", action="store_true", help="add the training protocols")
    return parser


def _level(verbose: int) -> Optional[int]:
    if verbose >= 2:
        return verboselogs.DEBUG
    if verbose == 1:
        return verboselogs.VERBOSE
    return None


def _dispatch(args: argparse.Namespace, options: RunOptions) -> ExitCode:
    command = Command(args.command)
    verbose = options.verbose
    seed = options.require_seed(command) if command in STOCHASTIC else options.seed

    if command == Command.GenData:
        commands.gen_data(args.out, seed, args.spec, verbose)
    elif command in (Command.Pretrain, Command.PretrainFixed):
        commands.pretrain(
            args.data,
            args.out,
            seed,
            config_path=args.config,
            lambda_range=getattr(args, "lambda_range", None),
            fixed_lambda=getattr(args, "fixed_lambda", None),
            trace_path=args.trace,
            verbose=verbose,
        )
    elif command == Command.Sweep:
        commands.run_sweep(args.ckpt, args.data, commands.parse_lambdas(args.lambdas), args.out, options.workers, verbose)
    elif command == Command.Adapt:
        commands.adapt(
            args.ckpt,
            args.task,
            args.out,
            seed,
            config_path=args.config,
            theta_lr=args.theta_lr,
            level=args.level,
            grid_points=args.grid,
            verbose=verbose,
        )
    elif command == Command.Profile:
        commands.profile(commands.parse_periods(args.periods), args.out, args.config)
    else:
        report = run_selftest(args.full, verbose)
        for check in report.checks:
            print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}  {check.detail}".rstrip())
        if not report.passed:
            return ExitCode.INTERNAL
    return ExitCode.OK


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``ofacompress`` command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logger = verboselogs.component_logger(__name__, _level(args.verbose))
    logger.debug("main ENTER")
    try:
        options = RunOptions(seed=args.seed, verbose=_level(args.verbose), workers=args.workers)
        code = _dispatch(args, options)
    except OfaCompressError as e:
        logger.error("%s: %s", args.command, e.message)
        code = e.exit_code
    except Exception as e:  # pylint: disable=broad-except
        logger.exception("%s failed: %s", args.command, e)
        code = ExitCode.INTERNAL
    logger.debug("main LEAVE")
    return int(code)
