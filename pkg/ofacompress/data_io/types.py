# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from ..diffmath import Matrix
from ..errors import OfaDataError

DEFAULT_FRAME_PERIOD_MS = 20.0


@dataclass
class FeatureSequence:
    """
    T x D real features with the frame period they were sampled at.

    Values live in memory as float64; files store them as float32.
    """

    values: np.ndarray
    frame_period_ms: float = DEFAULT_FRAME_PERIOD_MS

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise OfaDataError(f"features must be a non-empty T x D array, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise OfaDataError("features contain non-finite values")

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def matrix(self) -> Matrix:
        """The features as a constant matrix."""
        return Matrix(self.values)


@dataclass
class GuidanceTargets:
    """
    Segment boundary supervision for one utterance.

    A 1 marks the last frame of a segment, so the segment count is the number of ones.
    """

    boundaries: np.ndarray

    def __post_init__(self):
        self.boundaries = np.asarray(self.boundaries, dtype=np.uint8)
        if self.boundaries.ndim != 1 or self.boundaries.size < 1:
            raise OfaDataError("boundaries must be a non-empty vector")
        if np.any(self.boundaries > 1):
            raise OfaDataError("boundaries must be 0/1")

    @property
    def num_segments(self) -> int:
        return int(self.boundaries.sum())

    def __len__(self) -> int:
        return int(self.boundaries.size)


@dataclass
class Utterance:
    """One corpus entry: features, guidance and the synthetic downstream labels."""

    features: FeatureSequence
    targets: GuidanceTargets
    utterance_label: int = 0
    frame_labels: List[int] = field(default_factory=list)
    segment_lengths: List[int] = field(default_factory=list)
    name: Optional[str] = None

    @property
    def num_frames(self) -> int:
        return self.features.num_frames


@dataclass
class Corpus:
    """
    An ordered collection of utterances sharing one feature dimension and frame period.

    ``num_utterance_classes`` and ``vocab_size`` size the synthetic downstream tasks.
    """

    utterances: List[Utterance]
    num_utterance_classes: int = 1
    vocab_size: int = 1

    def __post_init__(self):
        if not self.utterances:
            raise OfaDataError("corpus has no utterances")
        dims = {u.features.dim for u in self.utterances}
        if len(dims) != 1:
            raise OfaDataError(f"utterances disagree on feature dim: {sorted(dims)}")

    @property
    def feature_dim(self) -> int:
        return self.utterances[0].features.dim

    @property
    def frame_period_ms(self) -> float:
        return self.utterances[0].features.frame_period_ms

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    def __getitem__(self, index: int) -> Utterance:
        return self.utterances[index]
