# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass

from dataclasses_json import dataclass_json

from ..errors import OfaConfigError
from .types import DEFAULT_FRAME_PERIOD_MS


@dataclass_json
@dataclass
class SyntheticSpec:
    """
    Options for generating a segment-structured synthetic corpus.

    Attributes:
        num_utterances: Number of utterances to generate
        min_frames: Shortest utterance, in frames
        max_frames: Longest utterance, in frames
        feature_dim: Feature dimension D
        min_segment_frames: Shortest latent segment, in frames
        max_segment_frames: Longest latent segment, in frames
        vocab_size: Number of latent segment embeddings
        noise: Standard deviation of the per-frame Gaussian noise
        num_utterance_classes: Number of utterance-level classes (an additive offset per class)
        utterance_scale: Standard deviation of the class offsets
        frame_period_ms: Frame period stamped on every utterance
        seed: Seed of the generator stream
    """

    num_utterances: int = 100
    min_frames: int = 16
    max_frames: int = 64
    feature_dim: int = 8
    min_segment_frames: int = 2
    max_segment_frames: int = 6
    vocab_size: int = 10
    noise: float = 0.1
    num_utterance_classes: int = 2
    utterance_scale: float = 1.0
    frame_period_ms: float = DEFAULT_FRAME_PERIOD_MS
    seed: int = 0

    def check(self) -> bool:
        """Validate options, raising OfaConfigError on the first problem."""
        if self.num_utterances < 1:
            raise OfaConfigError("num_utterances must be >= 1")
        if not 1 <= self.min_frames <= self.max_frames:
            raise OfaConfigError("need 1 <= min_frames <= max_frames")
        if self.feature_dim < 1:
            raise OfaConfigError("feature_dim must be >= 1")
        if not 1 <= self.min_segment_frames <= self.max_segment_frames:
            raise OfaConfigError("need 1 <= min_segment_frames <= max_segment_frames")
        if self.vocab_size < 1 or self.num_utterance_classes < 1:
            raise OfaConfigError("vocab_size and num_utterance_classes must be >= 1")
        if self.noise < 0 or self.utterance_scale < 0:
            raise OfaConfigError("noise and utterance_scale must be >= 0")
        if self.frame_period_ms <= 0:
            raise OfaConfigError("frame_period_ms must be positive")
        return True
