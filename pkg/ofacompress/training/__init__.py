# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .enums import GuidanceMode, TaskLevel
from .options import AdaptConfig, TrainConfig
from .losses import (
    BCE_CLAMP,
    boundary_bce,
    distill_loss,
    guidance_loss,
    quantity_loss,
    total_loss,
)
from .optim import SGD
from .trace import TRACE_COLUMNS, StepRecord, read_trace, write_trace
from .pretrain import (
    EvalResult,
    OfaPretrainer,
    PretrainResult,
    SpecialistComparison,
    compare_with_specialists,
    evaluate_distill,
    fixed_lambda_pretrain,
    ofa_pretrain,
)
from .tasks import DownstreamHead, DownstreamTask, build_task, evaluate_task, task_loss
from .adapt import AdaptReport, GridPoint, LambdaAdapter, adapt_lambda, grid_search_lambda

__all__ = [
    "GuidanceMode",
    "TaskLevel",
    "AdaptConfig",
    "TrainConfig",
    "BCE_CLAMP",
    "boundary_bce",
    "distill_loss",
    "guidance_loss",
    "quantity_loss",
    "total_loss",
    "SGD",
    "TRACE_COLUMNS",
    "StepRecord",
    "read_trace",
    "write_trace",
    "EvalResult",
    "OfaPretrainer",
    "PretrainResult",
    "SpecialistComparison",
    "compare_with_specialists",
    "evaluate_distill",
    "fixed_lambda_pretrain",
    "ofa_pretrain",
    "DownstreamHead",
    "DownstreamTask",
    "build_task",
    "evaluate_task",
    "task_loss",
    "AdaptReport",
    "GridPoint",
    "LambdaAdapter",
    "adapt_lambda",
    "grid_search_lambda",
]
