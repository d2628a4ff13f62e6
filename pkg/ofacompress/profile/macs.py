# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Analytic multiply-accumulate counts for the transformer layers plus the α module.

Per layer on n frames: ``4nd²`` for the four projections, ``2n²d`` for the
attention scores and the attention-weighted mix, ``2ndf`` for the feed-forward
layer. The α module precedes subsampling and always runs on the full input.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

import numpy as np
from dataclasses_json import dataclass_json

from ..diffmath import Matrix, count_macs
from ..errors import OfaConfigError
from ..model import ModelConfig, StudentModel
from .options import MacsConfig

PROFILE_COLUMNS = ("period_ms", "frames", "total_macs", "macs_reduction")


@dataclass_json
@dataclass
class MacsReport:
    """MACs per component for one sequence length; the components add up to ``total``."""

    frames: int
    alpha_frames: int
    attention_linear: int
    attention_quadratic: int
    ffn: int
    alpha_module: int
    total: int
    reduction: float = 0.0


@dataclass
class ProfileRow:
    period_ms: float
    frames: int
    total_macs: int
    macs_reduction: float


def transformer_macs(n: int, cfg: MacsConfig, alpha_frames: Optional[int] = None) -> MacsReport:
    """
    MACs of ``cfg.num_layers`` layers on ``n`` frames plus the α module on
    ``alpha_frames`` frames (``n`` when unset).
    """
    if n < 1:
        raise OfaConfigError(f"sequence length must be >= 1, got {n}")
    alpha_frames = n if alpha_frames is None else alpha_frames
    d, f, layers = cfg.model_dim, cfg.ffn_dim, cfg.num_layers
    linear = layers * 4 * n * d * d
    quadratic = layers * 2 * n * n * d
    ffn = layers * 2 * n * d * f
    alpha = alpha_frames * cfg.alpha_cost
    return MacsReport(n, alpha_frames, linear, quadratic, ffn, alpha, linear + quadratic + ffn + alpha)


def macs_reduction(n_base: int, n_comp: int, cfg: MacsConfig) -> float:
    """``1 - total(n_comp) / total(n_base)`` with the α module charged at ``n_base`` both times."""
    if not 1 <= n_comp <= n_base:
        raise OfaConfigError(f"need 1 <= n_comp <= n_base, got {n_comp} and {n_base}")
    base = transformer_macs(n_base, cfg).total
    comp = transformer_macs(n_comp, cfg, alpha_frames=n_base).total
    return 1.0 - comp / base


def frame_period(input_frames: int, fires: int, base_period_ms: float) -> float:
    """Milliseconds of input per output frame."""
    if fires < 1:
        raise OfaConfigError(f"fires must be >= 1, got {fires}")
    return base_period_ms * input_frames / fires


def compressed_frames(period_ms: float, cfg: MacsConfig) -> int:
    """Output frames of a ``cfg.base_frames`` utterance compressed to ``period_ms``."""
    if period_ms < cfg.base_frame_period_ms:
        raise OfaConfigError(f"period {period_ms} ms is shorter than the base {cfg.base_frame_period_ms} ms")
    return max(1, int(round(cfg.base_frames * cfg.base_frame_period_ms / period_ms)))


def reduction_at_period(period_ms: float, cfg: MacsConfig) -> float:
    return macs_reduction(cfg.base_frames, compressed_frames(period_ms, cfg), cfg)


def profile_periods(cfg: MacsConfig, periods: Iterable[float]) -> List[ProfileRow]:
    """One row per frame period, in ascending period order."""
    cfg.check()
    rows = []
    for period in sorted(float(p) for p in periods):
        n = compressed_frames(period, cfg)
        report = transformer_macs(n, cfg, alpha_frames=cfg.base_frames)
        rows.append(ProfileRow(period, n, report.total, macs_reduction(cfg.base_frames, n, cfg)))
    return rows


def write_profile(path: Union[str, Path], rows: Iterable[ProfileRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(PROFILE_COLUMNS)
        for row in rows:
            writer.writerow([repr(float(row.period_ms)), row.frames, row.total_macs, repr(float(row.macs_reduction))])


def macs_config_for(model: ModelConfig) -> MacsConfig:
    """The analytic config matching a toy student: its mixer plus a linear α module over D channels."""
    return MacsConfig(
        model_dim=model.model_dim,
        ffn_dim=model.ffn_dim,
        num_layers=model.num_blocks,
        alpha_macs_per_frame=model.encoder_dim,
    )


def count_model_macs(student: StudentModel, n: int, alpha_frames: Optional[int] = None, seed: int = 0) -> int:
    """
    Multiply-accumulates actually executed by the student's mixer blocks on
    ``n`` frames plus its α module on ``alpha_frames`` frames.

    The input projection and the prediction heads are not counted.
    """
    alpha_frames = n if alpha_frames is None else alpha_frames
    rng = np.random.default_rng(seed)
    cfg = student.config
    h = student.projection(Matrix(rng.normal(size=(n, cfg.encoder_dim))))
    enc = Matrix(rng.normal(size=(alpha_frames, cfg.encoder_dim)))
    with count_macs() as counter:
        for block in student.blocks:
            h, _ = block(h)
        student.alpha_module(enc)
    return counter.total
