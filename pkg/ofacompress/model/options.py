# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass

from dataclasses_json import dataclass_json

from ..cif import DEFAULT_TAIL_THRESHOLD, DEFAULT_THRESHOLD
from ..errors import OfaConfigError


@dataclass_json
@dataclass
class ModelConfig:
    """
    Dimensions of the toy student and teacher.

    Attributes:
        input_dim: Feature dimension of the corpus
        encoder_dim: Student encoder output dimension D (pooled by CIF)
        model_dim: Mixer width d
        ffn_dim: Mixer feed-forward width f
        num_blocks: Mixer blocks
        teacher_layers: Teacher layers distilled, one prediction head each
        teacher_dim: Teacher layer width
        alpha_bias: Initial bias of the α module
        threshold: CIF fire threshold
        tail_threshold: Leftover mass that still fires a tail frame
        seed: Seed for parameter initialization
    """

    input_dim: int = 8
    encoder_dim: int = 8
    model_dim: int = 16
    ffn_dim: int = 32
    num_blocks: int = 2
    teacher_layers: int = 2
    teacher_dim: int = 8
    alpha_bias: float = 0.0
    threshold: float = DEFAULT_THRESHOLD
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD
    seed: int = 0

    def check(self) -> bool:
        """Validate options, raising OfaConfigError on the first problem."""
        dims = {
            "input_dim": self.input_dim,
            "encoder_dim": self.encoder_dim,
            "model_dim": self.model_dim,
            "ffn_dim": self.ffn_dim,
            "teacher_layers": self.teacher_layers,
            "teacher_dim": self.teacher_dim,
        }
        for key, value in dims.items():
            if value < 1:
                raise OfaConfigError(f"{key} must be >= 1, got {value}")
        if self.num_blocks < 0:
            raise OfaConfigError(f"num_blocks must be >= 0, got {self.num_blocks}")
        # α lies in [0, 1], so a lower threshold would need several fires per frame
        if self.threshold < 1.0:
            raise OfaConfigError(f"threshold must be >= 1, got {self.threshold}")
        if not 0 < self.tail_threshold <= self.threshold:
            raise OfaConfigError("need 0 < tail_threshold <= threshold")
        return True
