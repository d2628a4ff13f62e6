# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
The piecewise α modification F(α, λ).

For λ in [0, 1) α is interpolated towards all-ones, which raises the fire
count up to one per frame at λ = 0. For λ in [1, 2) α is scaled down by
(2 - λ), with the scale capped so the total mass never drops below
``min(Σα, 1)``; that keeps at least one boundary and, as λ approaches 2,
leaves a single output frame. λ = 1 leaves α unchanged.
"""

from typing import Union

import numpy as np
from scipy import special

from ..cif.types import AlphaLike, alpha_values
from ..diffmath import Matrix, ops
from .options import check_lambda

LambdaLike = Union[float, Matrix]


def _column(alpha: AlphaLike) -> Matrix:
    if isinstance(alpha, Matrix):
        alpha_values(alpha)
        return alpha
    return Matrix.column(alpha_values(alpha))


def modify_alpha(alpha: AlphaLike, lam: LambdaLike) -> Matrix:
    """
    Return F(α, λ) as a T x 1 matrix, differentiable w.r.t. α and a matrix λ.

    Case 1, λ < 1: ``λα + (1 - λ)``.
    Case 2, λ >= 1: ``(2 - λ)α / min((2 - λ)Σα / m, 1)`` with ``m = min(Σα, 1)``;
    identical to ``(2 - λ)α / min((2 - λ)Σα, 1)`` whenever Σα >= 1. An all-zero
    α is returned as is.

    Raises:
        OfaLambdaRangeError: λ outside [0, 2).
    """
    alpha_m = _column(alpha)
    lam_m = lam if isinstance(lam, Matrix) else Matrix.scalar(lam)
    value = check_lambda(lam_m.item())

    if value < 1.0:
        return ops.clip(ops.add(ops.mul(alpha_m, lam_m), ops.shift(ops.scale(lam_m, -1.0), 1.0)), 0.0, 1.0)

    total = ops.sum_(alpha_m)
    if total.item() == 0.0:
        return alpha_m
    shrink = ops.shift(ops.scale(lam_m, -1.0), 2.0)
    # below unit mass m = Σα and the ratio reduces to 2 - λ
    ratio = ops.mul(shrink, total) if total.item() >= 1.0 else shrink
    gain = ops.div(shrink, ops.clamp_max(ratio, 1.0))
    return ops.clip(ops.mul(alpha_m, gain), 0.0, 1.0)


def lambda_from_theta(theta: Union[float, Matrix], lambda_max: float) -> Union[float, Matrix]:
    """``lambda_max * sigmoid(theta)``; a matrix theta gives a differentiable 1x1 matrix."""
    if isinstance(theta, Matrix):
        return ops.scale(ops.sigmoid(theta), lambda_max)
    return float(lambda_max * special.expit(theta))


def theta_from_lambda(lam: float, lambda_max: float) -> float:
    """Inverse of :func:`lambda_from_theta` for 0 < λ < lambda_max."""
    return float(special.logit(lam / lambda_max))


def switch_margin(alpha: AlphaLike, lam: float) -> float:
    """
    Distance from the nearest kink of F: λ against the case join at 1 and,
    in Case 2, Σα and the capped ratio against 1.
    """
    margin = abs(lam - 1.0)
    if lam < 1.0:
        return margin
    total = float(np.sum(alpha_values(alpha)))
    if total == 0.0:
        return margin
    ratio = (2.0 - lam) * total / min(total, 1.0)
    return min(margin, abs(total - 1.0), abs(ratio - 1.0))
