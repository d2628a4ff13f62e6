# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Adaptive compression rate: λ becomes a downstream parameter.

λ = lambda_max * sigmoid(θ) is trained jointly with a downstream classifier on
top of a frozen pre-trained student; θ uses gradient descent with momentum.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from dataclasses_json import dataclass_json

from ..alphamod import LAMBDA_CEILING, LambdaControl, theta_from_lambda
from ..diffmath import Tape
from ..errors import OfaConfigError
from ..model import StudentModel
from ..utils import verboselogs
from .optim import SGD
from .options import AdaptConfig
from .tasks import DownstreamHead, DownstreamTask, evaluate_task, task_loss


@dataclass_json
@dataclass
class GridPoint:
    """Downstream result with λ held fixed."""

    lam: float
    metric: float
    accuracy: float


@dataclass_json
@dataclass
class AdaptReport:
    """
    Outcome of adaptive-λ fine-tuning.

    ``metric`` is the mean downstream cross-entropy (lower is better); the
    trajectory holds λ after every update.
    """

    level: str = ""
    lambda_max: float = LAMBDA_CEILING
    theta_lr: float = 0.0
    initial_lambda: float = 0.0
    final_lambda: float = 0.0
    final_metric: float = 0.0
    final_accuracy: float = 0.0
    mean_fires: float = 0.0
    lambda_trajectory: List[float] = field(default_factory=list)
    loss_trajectory: List[float] = field(default_factory=list)
    grid: List[GridPoint] = field(default_factory=list)
    best_grid_lambda: Optional[float] = None
    best_grid_metric: Optional[float] = None

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json(indent=2) + "\n", encoding="utf-8")  # type: ignore[attr-defined]


def _resolve_lambda_max(config: AdaptConfig, lambda_max: Optional[float]) -> float:
    value = config.lambda_max if config.lambda_max is not None else lambda_max
    if value is None:
        value = LAMBDA_CEILING
    return min(float(value), LAMBDA_CEILING)


def _initial_lambda(config: AdaptConfig, lambda_max: float, rng: np.random.Generator) -> float:
    if config.lambda_init is None:
        return float(rng.uniform(0.05, 0.95) * lambda_max)
    if not 0.0 < config.lambda_init < lambda_max:
        raise OfaConfigError(f"lambda_init must lie in (0, {lambda_max}), got {config.lambda_init}")
    return float(config.lambda_init)


class LambdaAdapter:
    """
    Joint training of a downstream head and θ.

    With ``train_theta=False`` λ stays at its initial value, which is how grid
    search points are trained.
    """

    _logger: verboselogs.VerboseLogger

    def __init__(
        self,
        student: StudentModel,
        task: DownstreamTask,
        config: AdaptConfig,
        lambda_max: Optional[float] = None,
        verbose: Optional[int] = None,
    ):
        self._logger = verboselogs.component_logger(__name__, verbose)
        config.check()
        self.student = student.frozen()
        self.task = task
        self.config = config
        self.lambda_max = _resolve_lambda_max(config, lambda_max)

    def train(self, lam0: float, train_theta: bool = True, seed_offset: int = 0):
        """Returns (control, head, λ trajectory, loss trajectory)."""
        cfg = self.config
        lam_ctl = LambdaControl.trainable(theta_from_lambda(lam0, self.lambda_max), self.lambda_max)
        head = DownstreamHead(self.student.config.model_dim, self.task.num_classes, cfg.seed + seed_offset)
        head_opt = SGD(head.parameters(), cfg.head_lr)
        theta_opt = SGD({"theta": lam_ctl.theta}, cfg.theta_lr, cfg.theta_momentum) if train_theta else None
        order_rng = np.random.default_rng(cfg.seed + seed_offset)

        lam_traj: List[float] = []
        loss_traj: List[float] = []
        n = len(self.task.utterances)
        for epoch in range(cfg.epochs):
            theta_grad_mass = 0.0
            order = order_rng.permutation(n)
            for start in range(0, n, cfg.batch_size):
                batch = order[start : start + cfg.batch_size]
                grads: Dict[str, np.ndarray] = {}
                batch_loss = 0.0
                for i in batch:
                    with Tape() as tape:
                        res = task_loss(
                            self.student, head, self.task, self.task.utterances[int(i)], lam_ctl, cfg.rate_weight
                        )
                    g = tape.backward(res.loss)
                    batch_loss += res.loss.item()
                    for name, p in head.parameters().items():
                        grads[name] = grads.get(name, 0.0) + g[p]
                    grads["theta"] = grads.get("theta", 0.0) + g[lam_ctl.theta]
                scale = 1.0 / len(batch)
                grads = {k: v * scale for k, v in grads.items()}
                head_opt.step(grads)
                if theta_opt is not None:
                    theta_grad_mass += float(np.abs(grads["theta"]).sum())
                    theta_opt.step(grads)
                    lam_ctl.refresh()
                lam_traj.append(lam_ctl.value)
                loss_traj.append(batch_loss * scale)
            if theta_opt is not None and theta_grad_mass == 0.0:
                self._logger.warning(
                    "theta gradient was zero for all of epoch %d; lambda %.6f may be stuck at saturation",
                    epoch,
                    lam_ctl.value,
                )
            self._logger.verbose("epoch %d lambda %.6f loss %.6f", epoch, lam_ctl.value, loss_traj[-1] if loss_traj else 0.0)
        return lam_ctl, head, lam_traj, loss_traj


def grid_search_lambda(
    student: StudentModel,
    task: DownstreamTask,
    lambdas: Sequence[float],
    config: AdaptConfig,
    lambda_max: Optional[float] = None,
    verbose: Optional[int] = None,
) -> List[GridPoint]:
    """Train the downstream head at each fixed λ and report its metric."""
    adapter = LambdaAdapter(student, task, config, lambda_max, verbose)
    points = []
    for lam in lambdas:
        lam = min(max(float(lam), 1e-6), adapter.lambda_max * (1 - 1e-9))
        lam_ctl, head, _, _ = adapter.train(lam, train_theta=False)
        metric, acc = evaluate_task(adapter.student, head, task, lam_ctl.value)
        points.append(GridPoint(lam_ctl.value, metric, acc))
    return points


def adapt_lambda(
    student: StudentModel,
    task: DownstreamTask,
    config: AdaptConfig,
    lambda_max: Optional[float] = None,
    verbose: Optional[int] = None,
) -> AdaptReport:
    """
    Learn λ for a downstream task on a frozen student.

    The learned λ always lies in (0, lambda_max) through the sigmoid mapping. With
    ``config.grid_points`` set, a grid search over [0, lambda_max) is added to the
    report for comparison.
    """
    logger = verboselogs.component_logger(__name__, verbose)
    logger.debug("adapt_lambda ENTER")
    adapter = LambdaAdapter(student, task, config, lambda_max, verbose)
    lam0 = _initial_lambda(config, adapter.lambda_max, np.random.default_rng(config.seed))
    lam_ctl, head, lam_traj, loss_traj = adapter.train(lam0)
    metric, acc = evaluate_task(adapter.student, head, task, lam_ctl.value)

    fires = [adapter.student.compress(u.features, LambdaControl.fixed(lam_ctl.value)).num_fires for u in task.utterances]
    report = AdaptReport(
        level=str(task.level),
        lambda_max=adapter.lambda_max,
        theta_lr=config.theta_lr,
        initial_lambda=lam0,
        final_lambda=lam_ctl.value,
        final_metric=metric,
        final_accuracy=acc,
        mean_fires=float(np.mean(fires)),
        lambda_trajectory=lam_traj,
        loss_trajectory=loss_traj,
    )
    if config.grid_points:
        grid = np.arange(config.grid_points) * (adapter.lambda_max / config.grid_points)
        report.grid = grid_search_lambda(student, task, grid.tolist(), config, adapter.lambda_max, verbose)
        best = min(report.grid, key=lambda p: p.metric)
        report.best_grid_lambda, report.best_grid_metric = best.lam, best.metric
    logger.notice("learned lambda %.4f (from %.4f), metric %.6f", report.final_lambda, lam0, metric)
    logger.debug("adapt_lambda LEAVE")
    return report
