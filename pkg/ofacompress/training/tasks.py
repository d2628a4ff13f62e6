# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Synthetic downstream tasks on top of the compressed representation.

The utterance-level task predicts the utterance class from the mean of the
mixer output, so a single output frame carries all it needs. The frame-level
task predicts each input frame's latent segment label after spreading the
output frames back over the input frames they pooled, blending the two
neighbours at every boundary frame; it rewards short segments, and λ gets a
gradient through the blend.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..alphamod import LambdaControl
from ..cif import upsample_weights
from ..data_io.types import Corpus, Utterance
from ..diffmath import Matrix, ops
from ..errors import OfaDataError
from ..model import Linear, StudentModel
from .enums import TaskLevel


@dataclass
class DownstreamTask:
    """Labeled utterances for one task level."""

    level: TaskLevel
    num_classes: int
    utterances: List[Utterance] = field(default_factory=list)

    def labels(self, utt: Utterance) -> np.ndarray:
        if self.level == TaskLevel.Utterance:
            return np.array([utt.utterance_label])
        return np.asarray(utt.frame_labels, dtype=np.int64)


def build_task(corpus: Corpus, level: TaskLevel) -> DownstreamTask:
    """
    Raises:
        OfaDataError: a frame-level task on utterances without per-frame labels.
    """
    level = TaskLevel(level)
    if level == TaskLevel.Frame:
        for utt in corpus:
            if len(utt.frame_labels) != utt.num_frames:
                raise OfaDataError(f"{utt.name} has {len(utt.frame_labels)} frame labels for {utt.num_frames} frames")
        return DownstreamTask(level, corpus.vocab_size, list(corpus))
    return DownstreamTask(level, corpus.num_utterance_classes, list(corpus))


class DownstreamHead:
    """Linear classifier on the mixer output."""

    def __init__(self, model_dim: int, num_classes: int, seed: int):
        self.linear = Linear(model_dim, num_classes, np.random.default_rng(seed), "task")

    def parameters(self):
        return dict(self.linear.parameters())

    def __call__(self, x: Matrix) -> Matrix:
        return self.linear(x)


@dataclass
class TaskOutput:
    loss: Matrix
    correct: int
    count: int
    num_fires: int
    num_frames: int


def task_loss(
    student: StudentModel,
    head: DownstreamHead,
    task: DownstreamTask,
    utt: Utterance,
    lam_ctl: LambdaControl,
    rate_weight: float = 0.0,
) -> TaskOutput:
    """
    Cross-entropy of the head on one utterance, plus ``rate_weight * mean(modified α)``.

    Only the last layer (the mixer output) feeds the head.
    """
    out = student.compress(utt.features, lam_ctl)
    labels = task.labels(utt)
    if task.level == TaskLevel.Utterance:
        feats = ops.mean_rows(out.hidden)
    else:
        feats = ops.matmul(upsample_weights(out.alpha_mod, out.segmentation), out.hidden)
    logp = ops.log_softmax_rows(head(feats))
    onehot = np.zeros(logp.shape)
    onehot[np.arange(len(labels)), labels] = 1.0
    loss = ops.scale(ops.sum_(ops.mul(logp, Matrix.wrap(onehot))), -1.0 / len(labels))
    if rate_weight:
        loss = ops.add(loss, ops.scale(ops.mean(out.alpha_mod), rate_weight))
    correct = int(np.sum(np.argmax(logp.data, axis=1) == labels))
    return TaskOutput(loss, correct, len(labels), out.num_fires, utt.num_frames)


def evaluate_task(
    student: StudentModel, head: DownstreamHead, task: DownstreamTask, lam: float
) -> Tuple[float, float]:
    """Mean cross-entropy and accuracy over the task at a fixed λ."""
    lam_ctl = LambdaControl.fixed(lam)
    losses, correct, count = [], 0, 0
    for utt in task.utterances:
        res = task_loss(student, head, task, utt, lam_ctl)
        losses.append(res.loss.item())
        correct += res.correct
        count += res.count
    return float(np.mean(losses)), correct / max(count, 1)
