# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
The work behind each subcommand, callable without argparse.

Every function takes explicit arguments, writes its outputs and returns the
in-memory result; errors surface as :class:`~ofacompress.errors.OfaCompressError`.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from ..alphamod import LAMBDA_CEILING, SampleRange
from ..data_io import CorpusManifest, SyntheticSpec, generate_corpus, load_corpus, save_corpus
from ..errors import OfaCheckpointError, OfaConfigError
from ..model import StudentModel, TeacherModel, load_checkpoint, save_checkpoint
from ..profile import MacsConfig, ProfileRow, SweepRow, profile_periods, sweep, write_profile, write_sweep
from ..training import (
    AdaptConfig,
    AdaptReport,
    PretrainResult,
    TaskLevel,
    TrainConfig,
    adapt_lambda,
    build_task,
    fixed_lambda_pretrain,
    ofa_pretrain,
    write_trace,
)
from ..utils import verboselogs
from ..utils.jsonconfig import load_config

PathLike = Union[str, Path]


def parse_lambdas(text: str) -> List[float]:
    """
    ``0,0.5,1`` gives those values; ``grid:N`` gives N evenly spaced points on [0, 2).
    """
    text = text.strip()
    if text.startswith("grid:"):
        try:
            n = int(text[len("grid:") :])
        except ValueError as e:
            raise OfaConfigError(f"bad lambda grid {text!r}") from e
        if n < 1:
            raise OfaConfigError(f"lambda grid needs at least one point, got {n}")
        return (np.arange(n) * (2.0 / n)).tolist()
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise OfaConfigError(f"lambdas must be a comma list or grid:N, got {text!r}") from e


def parse_periods(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise OfaConfigError(f"periods must be a comma list of milliseconds, got {text!r}") from e


def trace_path_for(ckpt: PathLike) -> Path:
    path = Path(ckpt)
    return path.with_name(path.stem + ".trace.csv")


def gen_data(
    out_dir: PathLike, seed: int, spec_path: Optional[PathLike] = None, verbose: Optional[int] = None
) -> CorpusManifest:
    spec = load_config(SyntheticSpec, spec_path) if spec_path else SyntheticSpec()
    spec.seed = seed
    corpus = generate_corpus(spec)
    return save_corpus(corpus, out_dir, spec, verbose)


def _train_config(config_path: Optional[PathLike], seed: int, lambda_range: Optional[str]) -> TrainConfig:
    config = load_config(TrainConfig, config_path) if config_path else TrainConfig()
    config.seed = seed
    if lambda_range is not None:
        config.lambda_range = lambda_range
    config.check()
    return config


def pretrain(
    data_dir: PathLike,
    out: PathLike,
    seed: int,
    config_path: Optional[PathLike] = None,
    lambda_range: Optional[str] = None,
    fixed_lambda: Optional[float] = None,
    trace_path: Optional[PathLike] = None,
    verbose: Optional[int] = None,
) -> PretrainResult:
    """
    OFA pre-training, or a fixed-λ specialist when ``fixed_lambda`` is given.

    Writes the checkpoint (student, teacher and λ range) and the loss trace CSV.
    """
    logger = verboselogs.component_logger(__name__, verbose)
    config = _train_config(config_path, seed, lambda_range)
    corpus = load_corpus(data_dir)
    if corpus.feature_dim != config.model.input_dim:
        logger.verbose("input_dim %d -> %d to match the corpus", config.model.input_dim, corpus.feature_dim)
        config.model.input_dim = corpus.feature_dim
    student = StudentModel(config.model)
    teacher = TeacherModel(config.model)

    if fixed_lambda is None:
        result = ofa_pretrain(config, corpus, student, teacher, verbose=verbose)
        sample_range = config.sample_range()
    else:
        result = fixed_lambda_pretrain(config, fixed_lambda, corpus, student, teacher, verbose)
        # a specialist covers only its own λ
        sample_range = SampleRange(max(fixed_lambda - 1e-6, 0.0), fixed_lambda + 1e-6)

    save_checkpoint(out, result.student, teacher, sample_range)
    write_trace(trace_path or trace_path_for(out), result.trace)
    logger.notice("checkpoint written to %s", out)
    return result


def _load_checkpoint_with_teacher(ckpt: PathLike):
    checkpoint = load_checkpoint(ckpt)
    if checkpoint.teacher is None:
        raise OfaCheckpointError(f"{ckpt} carries no teacher; it cannot be evaluated")
    return checkpoint


def run_sweep(
    ckpt: PathLike,
    data_dir: PathLike,
    lambdas: Sequence[float],
    out: PathLike,
    workers: int = 1,
    verbose: Optional[int] = None,
) -> List[SweepRow]:
    checkpoint = _load_checkpoint_with_teacher(ckpt)
    corpus = load_corpus(data_dir)
    rows = sweep(
        checkpoint.student,
        checkpoint.teacher,
        corpus,
        lambdas,
        lambda_range=checkpoint.lambda_range,
        workers=workers,
        verbose=verbose,
    )
    write_sweep(out, rows)
    return rows


def adapt(
    ckpt: PathLike,
    task_dir: PathLike,
    out: PathLike,
    seed: int,
    config_path: Optional[PathLike] = None,
    theta_lr: Optional[float] = None,
    level: Optional[str] = None,
    grid_points: Optional[int] = None,
    verbose: Optional[int] = None,
) -> AdaptReport:
    config = load_config(AdaptConfig, config_path) if config_path else AdaptConfig()
    config.seed = seed
    if theta_lr is not None:
        config.theta_lr = theta_lr
    if level is not None:
        config.level = TaskLevel(level)
    if grid_points is not None:
        config.grid_points = grid_points
    config.check()

    checkpoint = load_checkpoint(ckpt)
    corpus = load_corpus(task_dir)
    task = build_task(corpus, config.level)
    lambda_max = checkpoint.lambda_range.high if checkpoint.lambda_range else LAMBDA_CEILING
    report = adapt_lambda(checkpoint.student, task, config, lambda_max, verbose)
    report.save(out)
    return report


def profile(periods: Sequence[float], out: PathLike, config_path: Optional[PathLike] = None) -> List[ProfileRow]:
    cfg = load_config(MacsConfig, config_path) if config_path else MacsConfig()
    rows = profile_periods(cfg, periods)
    write_profile(out, rows)
    return rows
