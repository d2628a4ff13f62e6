# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from ..alphamod import SampleRange, check_lambda
from ..data_io.types import Corpus
from ..model import StudentModel, TeacherModel
from ..training.pretrain import evaluate_distill
from ..utils import verboselogs
from .macs import frame_period, reduction_at_period
from .options import MacsConfig

SWEEP_COLUMNS = ("lambda", "frame_period_ms", "mean_fires", "loss", "macs_reduction", "extrapolated")


@dataclass
class SweepRow:
    """
    One evaluated λ.

    ``macs_reduction`` is read off the reference cost model at the row's mean
    frame period; ``extrapolated`` marks a λ outside the pre-training range.
    """

    lam: float
    frame_period_ms: float
    mean_fires: float
    loss: float
    macs_reduction: float
    extrapolated: bool = False


def sweep(
    student: StudentModel,
    teacher: TeacherModel,
    corpus: Corpus,
    lambdas: Sequence[float],
    macs_config: Optional[MacsConfig] = None,
    lambda_range: Optional[SampleRange] = None,
    workers: int = 1,
    cosine_weight: float = 1.0,
    verbose: Optional[int] = None,
) -> List[SweepRow]:
    """
    Evaluate the student at every λ without updates; rows come back sorted by λ.

    λ values run concurrently on ``workers`` threads.
    """
    logger = verboselogs.component_logger(__name__, verbose)
    logger.debug("sweep ENTER")
    cfg = macs_config or MacsConfig()
    cfg.check()
    values = sorted(check_lambda(lam) for lam in lambdas)

    def evaluate(lam: float) -> SweepRow:
        result = evaluate_distill(student, teacher, corpus, lam, cosine_weight)
        periods = [
            frame_period(t, n, utt.features.frame_period_ms)
            for t, n, utt in zip(result.frame_counts, result.fire_counts, corpus)
        ]
        period = float(np.mean(periods))
        extrapolated = lambda_range is not None and not lambda_range.contains(lam)
        if extrapolated:
            logger.warning("lambda %.4f lies outside the pre-training range %s", lam, lambda_range)
        return SweepRow(
            lam,
            period,
            result.mean_fires,
            result.loss,
            reduction_at_period(max(period, cfg.base_frame_period_ms), cfg),
            extrapolated,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate, values))
    else:
        rows = [evaluate(lam) for lam in values]

    logger.notice("swept %d lambda values", len(rows))
    logger.debug("sweep LEAVE")
    return rows


def write_sweep(path: Union[str, Path], rows: Iterable[SweepRow]) -> None:
    """CSV with header lambda, frame_period_ms, mean_fires, loss, macs_reduction, extrapolated."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    repr(float(row.lam)),
                    repr(float(row.frame_period_ms)),
                    repr(float(row.mean_fires)),
                    repr(float(row.loss)),
                    repr(float(row.macs_reduction)),
                    int(row.extrapolated),
                ]
            )
