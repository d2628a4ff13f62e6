# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .types import AlphaLike, CompressedSequence, FireEvent, Segmentation, Span, alpha_values
from .integrate import (
    DEFAULT_EPS,
    DEFAULT_TAIL_THRESHOLD,
    DEFAULT_THRESHOLD,
    boundary_margin,
    fire_count,
    integrate_and_fire,
)
from .pooling import pool_segments, pool_teacher, segment_weights, upsample_matrix, upsample_weights

__all__ = [
    "AlphaLike",
    "CompressedSequence",
    "FireEvent",
    "Segmentation",
    "Span",
    "alpha_values",
    "DEFAULT_EPS",
    "DEFAULT_TAIL_THRESHOLD",
    "DEFAULT_THRESHOLD",
    "boundary_margin",
    "fire_count",
    "integrate_and_fire",
    "pool_segments",
    "pool_teacher",
    "segment_weights",
    "upsample_matrix",
    "upsample_weights",
]
