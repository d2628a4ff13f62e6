# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass, field
from typing import Optional

from dataclasses_json import dataclass_json

from ..alphamod import SampleRange
from ..errors import OfaConfigError
from ..model import ModelConfig
from .enums import GuidanceMode, TaskLevel


@dataclass_json
@dataclass
class TrainConfig:
    """
    Options for OFA and fixed-λ pre-training.

    Attributes:
        model: Student and teacher dimensions
        lambda_range: λ sample range as ``low:high``; ``0:1``, ``0:1.5`` and ``0:2`` are the usual regimes
        learning_rate: Gradient descent step size
        momentum: Momentum of the pre-training optimizer, 0 for plain gradient descent
        steps: Optimization steps
        batch_size: Utterances per step
        distill_weight: Weight of the distillation loss
        cosine_weight: Weight of the log-sigmoid cosine term inside the distillation loss
        guidance_weight: Weight of the boundary cross-entropy
        quantity_weight: Weight of the quantity loss
        guidance_mode: Which guidance terms are active
        seed: Seed for batch selection and λ draws
        workers: Threads running per-utterance forward/backward passes
    """

    model: ModelConfig = field(default_factory=ModelConfig)
    lambda_range: str = "0:2"
    learning_rate: float = 0.05
    momentum: float = 0.0
    steps: int = 200
    batch_size: int = 8
    distill_weight: float = 1.0
    cosine_weight: float = 1.0
    guidance_weight: float = 1.0
    quantity_weight: float = 0.5
    guidance_mode: GuidanceMode = GuidanceMode.Both
    seed: int = 0
    workers: int = 1

    def sample_range(self) -> SampleRange:
        return SampleRange.parse(self.lambda_range)

    def check(self) -> bool:
        """Validate options, raising OfaConfigError on the first problem."""
        self.model.check()
        self.sample_range()
        if self.learning_rate <= 0:
            raise OfaConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0 <= self.momentum < 1:
            raise OfaConfigError(f"momentum must lie in [0, 1), got {self.momentum}")
        if self.steps < 0 or self.batch_size < 1 or self.workers < 1:
            raise OfaConfigError("need steps >= 0, batch_size >= 1 and workers >= 1")
        weights = (self.distill_weight, self.cosine_weight, self.guidance_weight, self.quantity_weight)
        if min(weights) < 0:
            raise OfaConfigError("loss weights must be >= 0")
        try:
            self.guidance_mode = GuidanceMode(self.guidance_mode)
        except ValueError as e:
            raise OfaConfigError(f"unknown guidance_mode {self.guidance_mode!r}") from e
        return True


@dataclass_json
@dataclass
class AdaptConfig:
    """
    Options for adaptive-λ fine-tuning on a downstream task.

    Attributes:
        level: Utterance-level or frame-level task
        theta_lr: Learning rate of θ (λ = lambda_max * sigmoid(θ))
        theta_momentum: Momentum of the θ optimizer
        head_lr: Learning rate of the downstream classifier
        epochs: Passes over the task data
        batch_size: Utterances per step
        lambda_init: Initial λ; drawn uniformly inside the range when unset
        lambda_max: Upper end of the λ range; the checkpoint's range when unset
        rate_weight: Weight of the soft constraint mean(modified α), which favors fewer frames
        grid_points: Size of the comparison grid search, 0 to skip it
        seed: Seed for initialization and batch order
    """

    level: TaskLevel = TaskLevel.Utterance
    theta_lr: float = 1e-3
    theta_momentum: float = 0.9
    head_lr: float = 0.1
    epochs: int = 20
    batch_size: int = 8
    lambda_init: Optional[float] = None
    lambda_max: Optional[float] = None
    rate_weight: float = 0.0
    grid_points: int = 0
    seed: int = 0

    def check(self) -> bool:
        """Validate options, raising OfaConfigError on the first problem."""
        try:
            self.level = TaskLevel(self.level)
        except ValueError as e:
            raise OfaConfigError(f"unknown task level {self.level!r}") from e
        if self.theta_lr < 0 or self.head_lr <= 0:
            raise OfaConfigError("need theta_lr >= 0 and head_lr > 0")
        if not 0 <= self.theta_momentum < 1:
            raise OfaConfigError("theta_momentum must lie in [0, 1)")
        if self.epochs < 0 or self.batch_size < 1 or self.grid_points < 0:
            raise OfaConfigError("need epochs >= 0, batch_size >= 1 and grid_points >= 0")
        if self.rate_weight < 0:
            raise OfaConfigError("rate_weight must be >= 0")
        if self.lambda_max is not None and not 0 < self.lambda_max <= 2:
            raise OfaConfigError(f"lambda_max must lie in (0, 2], got {self.lambda_max}")
        return True
