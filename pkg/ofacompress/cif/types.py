# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..diffmath import Matrix
from ..errors import OfaCifError

AlphaLike = Union[Matrix, np.ndarray, Sequence[float]]


def alpha_values(alpha: AlphaLike) -> np.ndarray:
    """
    Flatten an α vector (T x 1 matrix, array or list) into a float64 array.

    Raises:
        OfaCifError: empty or non-finite α.
    """
    if isinstance(alpha, Matrix):
        if alpha.cols != 1:
            raise OfaCifError(f"alpha must be a T x 1 column, got {alpha.shape}")
        values = alpha.data[:, 0]
    else:
        values = np.asarray(alpha, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise OfaCifError("alpha must have at least one frame")
    if not np.all(np.isfinite(values)):
        raise OfaCifError("alpha contains non-finite values")
    return values


@dataclass(frozen=True)
class FireEvent:
    """
    One emitted output frame.

    ``left_weight`` is the part of α at ``fire_frame`` that completes this
    segment; ``residual`` is the rest, carried into the next segment. Tail and
    forced events close the utterance and carry nothing.
    """

    fire_frame: int
    left_weight: float
    residual: float = 0.0
    is_tail: bool = False
    forced: bool = False


@dataclass(frozen=True)
class Span:
    """Input frames ``start..end`` (inclusive) pooled into one output frame."""

    start: int
    end: int
    weights: Tuple[float, ...]


@dataclass
class Segmentation:
    """Ordered fire events over an utterance of ``source_length`` frames."""

    events: List[FireEvent]
    source_length: int

    @property
    def num_fires(self) -> int:
        return len(self.events)

    def starts(self) -> List[int]:
        """First frame of each segment; a segment after a regular fire starts on that fire frame."""
        out = []
        for k in range(len(self.events)):
            out.append(0 if k == 0 else self.events[k - 1].fire_frame)
        return out


@dataclass
class CompressedSequence:
    """N pooled frames plus the span each one was pooled from."""

    frames: Matrix
    spans: List[Span] = field(default_factory=list)

    @property
    def num_frames(self) -> int:
        return self.frames.rows
