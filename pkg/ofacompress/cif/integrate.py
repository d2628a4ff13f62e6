# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Continuous integrate-and-fire over an α sequence.
"""

from typing import List

from ..errors import OfaCifError
from .types import AlphaLike, FireEvent, Segmentation, alpha_values

DEFAULT_THRESHOLD = 1.0
DEFAULT_TAIL_THRESHOLD = 0.5
DEFAULT_EPS = 1e-9


def integrate_and_fire(
    alpha: AlphaLike,
    threshold: float = DEFAULT_THRESHOLD,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
    eps: float = DEFAULT_EPS,
) -> Segmentation:
    """
    Scan α left to right, firing whenever the accumulator reaches the threshold.

    At a fire frame t the weight needed to complete the segment
    (``threshold - accumulator``) goes to the current segment and the rest of
    α_t is carried into the next. A leftover of at least ``tail_threshold``
    after the scan fires a tail frame at T; an utterance with no fire at all
    gets one forced event over every frame.

    Raises:
        OfaCifError: empty α, non-finite α, α outside [0, threshold], or threshold <= 0.
    """
    if threshold <= 0:
        raise OfaCifError(f"threshold must be positive, got {threshold}")
    values = alpha_values(alpha)
    if values.min() < 0.0 or values.max() > threshold + eps:
        raise OfaCifError(
            f"alpha must lie in [0, {threshold}], got [{values.min():.6g}, {values.max():.6g}]"
        )

    events: List[FireEvent] = []
    acc = 0.0
    for t, a in enumerate(values.tolist()):
        if acc + a >= threshold - eps:
            left = min(threshold - acc, a)
            residual = a - left
            events.append(FireEvent(t, left, residual))
            acc = residual
        else:
            acc += a

    last = len(values) - 1
    if acc >= tail_threshold:
        events.append(FireEvent(last, acc, 0.0, is_tail=True))
    elif not events:
        events.append(FireEvent(last, acc, 0.0, is_tail=True, forced=True))
    return Segmentation(events, len(values))


def fire_count(alpha: AlphaLike) -> int:
    """Number of output frames :func:`integrate_and_fire` emits with default thresholds."""
    return integrate_and_fire(alpha).num_fires


def boundary_margin(
    alpha: AlphaLike,
    threshold: float = DEFAULT_THRESHOLD,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
) -> float:
    """
    Distance of the nearest fire decision from flipping.

    The minimum over frames of ``|accumulator + α_t - threshold|`` and of the
    final leftover's distance to ``tail_threshold``. Small margins mean a tiny
    change of α can change the segmentation.
    """
    values = alpha_values(alpha)
    margin = float("inf")
    acc = 0.0
    for a in values.tolist():
        margin = min(margin, abs(acc + a - threshold))
        if acc + a >= threshold - DEFAULT_EPS:
            acc = a - min(threshold - acc, a)
        else:
            acc += a
    return min(margin, abs(acc - tail_threshold))
