# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Once-for-all and fixed-λ distillation pre-training.

Both loops share :class:`OfaPretrainer`; they differ only in the λ sampler, so a
sampler that replays a constant reproduces the fixed-λ run bit for bit.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..alphamod import (
    LAMBDA_CEILING,
    FixedLambdaSampler,
    LambdaControl,
    LambdaMode,
    LambdaSampler,
    UniformLambdaSampler,
)
from ..cif import pool_teacher
from ..data_io.types import Corpus, FeatureSequence
from ..diffmath import Tape
from ..errors import OfaDivergenceError, OfaNonFiniteError
from ..model import StudentModel, TeacherModel
from ..utils import verboselogs
from .enums import GuidanceMode
from .losses import boundary_bce, distill_loss, quantity_loss, total_loss
from .optim import SGD
from .options import TrainConfig
from .trace import StepRecord


@dataclass
class PretrainResult:
    """The trained student (a copy; the input model is untouched) and its loss trace."""

    student: StudentModel
    trace: List[StepRecord] = field(default_factory=list)


@dataclass
class EvalResult:
    """Distillation loss of a student at one λ, without updates."""

    lam: float
    loss: float
    mean_fires: float
    fire_counts: List[int] = field(default_factory=list)
    frame_counts: List[int] = field(default_factory=list)


@dataclass
class SpecialistComparison:
    """OFA loss against the fixed-λ specialist trained with the same budget."""

    lam: float
    ofa_loss: float
    specialist_loss: float

    @property
    def ratio(self) -> float:
        return self.ofa_loss / self.specialist_loss if self.specialist_loss > 0 else float("inf")


@dataclass
class _UtteranceStep:
    distill: float
    guidance: float
    quantity: float
    total: float
    grads: Dict[str, np.ndarray]


def _lambda_control(lam: float) -> LambdaControl:
    return LambdaControl(lam, LAMBDA_CEILING, LambdaMode.Sampled)


class OfaPretrainer:
    """
    Distillation pre-training with one λ draw per step.

    Each step draws λ, picks a batch, runs every utterance through the student
    (possibly on ``config.workers`` threads, each with its own tape), pools the
    teacher layers with the student's segmentation, and applies the averaged
    gradient. Guidance terms always see the raw α.
    """

    _logger: verboselogs.VerboseLogger

    def __init__(
        self,
        config: TrainConfig,
        corpus: Corpus,
        teacher: TeacherModel,
        sampler: Optional[LambdaSampler] = None,
        verbose: Optional[int] = None,
    ):
        self._logger = verboselogs.component_logger(__name__, verbose)
        config.check()
        self.config = config
        self.corpus = corpus
        self.teacher = teacher

        batch_seed, lambda_seed = np.random.SeedSequence(config.seed).spawn(2)
        self._batch_rng = np.random.default_rng(batch_seed)
        if sampler is None:
            sampler = UniformLambdaSampler(config.sample_range(), lambda_seed, verbose)
        self.sampler = sampler
        self._teacher_layers: List[List[FeatureSequence]] = [teacher.forward(u.features) for u in corpus]

    def _utterance_step(self, student: StudentModel, index: int, lam_ctl: LambdaControl) -> _UtteranceStep:
        cfg = self.config
        utt = self.corpus[index]
        params = student.parameters()
        with Tape() as tape:
            out = student.forward(utt.features, lam_ctl)
            pooled = pool_teacher(self._teacher_layers[index], out.alpha_mod, out.segmentation)
            distill = distill_loss(out.head_outputs, pooled, cfg.cosine_weight)
            bce = boundary_bce(out.alpha_raw, utt.targets)
            qty = quantity_loss(out.alpha_raw, utt.targets.num_segments)
            total = total_loss(
                distill,
                bce,
                qty,
                cfg.guidance_mode,
                cfg.distill_weight,
                cfg.guidance_weight,
                cfg.quantity_weight,
            )
        grads = tape.backward(total)
        mode = GuidanceMode(cfg.guidance_mode)
        # inactive guidance terms are reported as 0
        return _UtteranceStep(
            distill.item(),
            bce.item() if mode in (GuidanceMode.BoundaryBce, GuidanceMode.Both) else 0.0,
            qty.item() if mode in (GuidanceMode.Quantity, GuidanceMode.Both) else 0.0,
            total.item(),
            {name: grads[p] for name, p in params.items()},
        )

    def _batch(self) -> List[int]:
        n = len(self.corpus)
        picked = self._batch_rng.choice(n, size=min(self.config.batch_size, n), replace=False)
        return [int(i) for i in picked]

    def run(self, student: StudentModel) -> PretrainResult:
        """
        Train a copy of ``student`` for ``config.steps`` steps.

        Raises:
            OfaDivergenceError: a step produced a non-finite loss or update.
        """
        self._logger.debug("OfaPretrainer.run ENTER")
        cfg = self.config
        student = student.clone()
        optimizer = SGD(student.parameters(), cfg.learning_rate, cfg.momentum)
        trace: List[StepRecord] = []

        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            for step in range(cfg.steps):
                lam = self.sampler.draw()
                lam_ctl = _lambda_control(lam)
                batch = self._batch()
                try:
                    if cfg.workers > 1:
                        results = list(pool.map(lambda i: self._utterance_step(student, i, lam_ctl), batch))
                    else:
                        results = [self._utterance_step(student, i, lam_ctl) for i in batch]
                    record = self._apply(step, lam, results, optimizer)
                except OfaNonFiniteError as e:
                    self._logger.error("training diverged at step %d (lambda %.6f): %s", step, lam, e)
                    raise OfaDivergenceError(f"non-finite values: {e.message}", step, lam) from e
                trace.append(record)
                self._logger.verbose(
                    "step %d lambda %.4f distill %.6f guidance %.6f quantity %.6f total %.6f",
                    step,
                    lam,
                    record.distill,
                    record.guidance,
                    record.quantity,
                    record.total,
                )

        self._logger.notice("pre-training finished after %d steps", cfg.steps)
        self._logger.debug("OfaPretrainer.run LEAVE")
        return PretrainResult(student, trace)

    @staticmethod
    def _apply(step: int, lam: float, results: Sequence[_UtteranceStep], optimizer: SGD) -> StepRecord:
        n = len(results)
        record = StepRecord(
            step=step,
            lam=lam,
            distill=sum(r.distill for r in results) / n,
            guidance=sum(r.guidance for r in results) / n,
            quantity=sum(r.quantity for r in results) / n,
            total=sum(r.total for r in results) / n,
        )
        if not np.isfinite(record.total):
            raise OfaNonFiniteError(f"loss is {record.total}")
        grads: Dict[str, np.ndarray] = {}
        for r in results:
            for name, g in r.grads.items():
                grads[name] = grads[name] + g if name in grads else g.copy()
        optimizer.step({name: g / n for name, g in grads.items()})
        return record


def ofa_pretrain(
    config: TrainConfig,
    corpus: Corpus,
    student: StudentModel,
    teacher: TeacherModel,
    sampler: Optional[LambdaSampler] = None,
    verbose: Optional[int] = None,
) -> PretrainResult:
    """Once-for-all pre-training: λ drawn uniformly from ``config.lambda_range`` each step."""
    return OfaPretrainer(config, corpus, teacher, sampler, verbose).run(student)


def fixed_lambda_pretrain(
    config: TrainConfig,
    lam: float,
    corpus: Corpus,
    student: StudentModel,
    teacher: TeacherModel,
    verbose: Optional[int] = None,
) -> PretrainResult:
    """Specialist pre-training at one constant λ."""
    return OfaPretrainer(config, corpus, teacher, FixedLambdaSampler(lam), verbose).run(student)


def evaluate_distill(
    student: StudentModel,
    teacher: TeacherModel,
    corpus: Corpus,
    lam: float,
    cosine_weight: float = 1.0,
) -> EvalResult:
    """Mean distillation loss over ``corpus`` at a fixed λ; no gradients are recorded."""
    lam_ctl = LambdaControl.fixed(lam)
    losses, fires, frames = [], [], []
    for utt in corpus:
        out = student.forward(utt.features, lam_ctl)
        pooled = pool_teacher(teacher.forward(utt.features), out.alpha_mod, out.segmentation)
        losses.append(distill_loss(out.head_outputs, pooled, cosine_weight).item())
        fires.append(out.num_fires)
        frames.append(utt.num_frames)
    return EvalResult(lam, float(np.mean(losses)), float(np.mean(fires)), fires, frames)


def compare_with_specialists(
    config: TrainConfig,
    corpus: Corpus,
    student: StudentModel,
    teacher: TeacherModel,
    eval_lambdas: Sequence[float] = (0.0, 0.5, 1.0, 1.5),
    verbose: Optional[int] = None,
) -> List[SpecialistComparison]:
    """
    Train one OFA model and one specialist per λ with the same budget, then
    compare their distillation losses at each λ.
    """
    logger = verboselogs.component_logger(__name__, verbose)
    logger.debug("compare_with_specialists ENTER")
    ofa = ofa_pretrain(config, corpus, student, teacher, verbose=verbose).student
    rows = []
    for lam in eval_lambdas:
        specialist = fixed_lambda_pretrain(config, lam, corpus, student, teacher, verbose).student
        row = SpecialistComparison(
            lam,
            evaluate_distill(ofa, teacher, corpus, lam, config.cosine_weight).loss,
            evaluate_distill(specialist, teacher, corpus, lam, config.cosine_weight).loss,
        )
        logger.notice(
            "lambda %.2f: OFA %.6f specialist %.6f ratio %.3f", lam, row.ofa_loss, row.specialist_loss, row.ratio
        )
        rows.append(row)
    logger.debug("compare_with_specialists LEAVE")
    return rows
