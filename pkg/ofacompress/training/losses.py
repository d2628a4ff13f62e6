# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from typing import Sequence, Union

import numpy as np

from ..cif import AlphaLike, CompressedSequence, alpha_values
from ..data_io.types import GuidanceTargets
from ..diffmath import Matrix, ops
from ..errors import OfaShapeError
from .enums import GuidanceMode

BCE_CLAMP = 1e-7

PooledLike = Union[CompressedSequence, Matrix]


def _frames(x: PooledLike) -> Matrix:
    return x.frames if isinstance(x, CompressedSequence) else x


def _alpha_column(alpha: AlphaLike) -> Matrix:
    return alpha if isinstance(alpha, Matrix) else Matrix.column(alpha_values(alpha))


def distill_loss(
    heads: Sequence[PooledLike], pooled_teacher: Sequence[PooledLike], cosine_weight: float = 1.0
) -> Matrix:
    """
    Mean over heads of ``L1(ŷ, y) - cosine_weight * mean_frames(log σ(cos(ŷ, y)))``.

    Raises:
        OfaShapeError: different numbers of heads and targets, or a head whose
            shape differs from its target (the teacher was pooled differently).
    """
    if len(heads) != len(pooled_teacher) or not heads:
        raise OfaShapeError(f"{len(heads)} heads for {len(pooled_teacher)} teacher layers")
    total = None
    for k, (head, target) in enumerate(zip(heads, pooled_teacher)):
        y_hat, y = _frames(head), _frames(target)
        if y_hat.shape != y.shape:
            raise OfaShapeError(f"head {k} is {y_hat.shape}, pooled teacher layer is {y.shape}")
        term = ops.l1(y_hat, y)
        if cosine_weight != 0.0:
            cos_term = ops.mean(ops.log_sigmoid(ops.cosine_similarity(y_hat, y)))
            term = ops.sub(term, ops.scale(cos_term, cosine_weight))
        total = term if total is None else ops.add(total, term)
    return ops.scale(total, 1.0 / len(heads))


def boundary_bce(alpha_raw: AlphaLike, targets: GuidanceTargets) -> Matrix:
    """Mean binary cross-entropy between α (clamped to [1e-7, 1 - 1e-7]) and the boundary bits."""
    alpha = _alpha_column(alpha_raw)
    if alpha.rows != len(targets):
        raise OfaShapeError(f"alpha has {alpha.rows} frames, targets have {len(targets)}")
    y = targets.boundaries.astype(np.float64).reshape(-1, 1)
    p = ops.clip(alpha, BCE_CLAMP, 1.0 - BCE_CLAMP)
    log_p = ops.log(p)
    log_q = ops.log(ops.shift(ops.scale(p, -1.0), 1.0))
    ll = ops.add(ops.mul(log_p, Matrix.wrap(y)), ops.mul(log_q, Matrix.wrap(1.0 - y)))
    return ops.scale(ops.mean(ll), -1.0)


def quantity_loss(alpha_raw: AlphaLike, num_segments: int) -> Matrix:
    """``|Σα - num_segments|``."""
    return ops.abs_(ops.shift(ops.sum_(_alpha_column(alpha_raw)), -float(num_segments)))


def guidance_loss(
    alpha_raw: AlphaLike,
    targets: GuidanceTargets,
    mode: GuidanceMode = GuidanceMode.Both,
    bce_weight: float = 1.0,
    quantity_weight: float = 0.5,
) -> Matrix:
    """
    Guidance on the raw α: boundary cross-entropy, quantity loss, or their weighted sum.

    The weights only apply in ``both`` mode.
    """
    mode = GuidanceMode(mode)
    if mode == GuidanceMode.BoundaryBce:
        return boundary_bce(alpha_raw, targets)
    if mode == GuidanceMode.Quantity:
        return quantity_loss(alpha_raw, targets.num_segments)
    return ops.add(
        ops.scale(boundary_bce(alpha_raw, targets), bce_weight),
        ops.scale(quantity_loss(alpha_raw, targets.num_segments), quantity_weight),
    )


def total_loss(
    distill: Matrix,
    bce: Matrix,
    quantity: Matrix,
    mode: GuidanceMode,
    distill_weight: float = 1.0,
    guidance_weight: float = 1.0,
    quantity_weight: float = 0.5,
) -> Matrix:
    """``w_d * distill + w_g * bce + w_q * quantity`` with the terms ``mode`` disables dropped."""
    mode = GuidanceMode(mode)
    total = ops.scale(distill, distill_weight)
    if mode in (GuidanceMode.BoundaryBce, GuidanceMode.Both):
        total = ops.add(total, ops.scale(bce, guidance_weight))
    if mode in (GuidanceMode.Quantity, GuidanceMode.Both):
        total = ops.add(total, ops.scale(quantity, quantity_weight))
    return total
