# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass
from typing import Optional

from dataclasses_json import dataclass_json

from ..data_io.types import DEFAULT_FRAME_PERIOD_MS
from ..errors import OfaConfigError


@dataclass_json
@dataclass
class MacsConfig:
    """
    Architecture dimensions for the analytic MACs model.

    The defaults are the reference configuration: a two-layer 768/3072 encoder,
    an α module costing a kernel-3 convolution over 768 channels per frame, and
    10 s utterances (500 frames at 20 ms).

    Attributes:
        model_dim: Hidden size d
        ffn_dim: Feed-forward size f
        num_layers: Transformer layers L
        alpha_macs_per_frame: α module MACs per input frame; 3 * d * d when unset
        base_frame_period_ms: Frame period before compression
        base_frames: Utterance length in base frames used for reduction tables
    """

    model_dim: int = 768
    ffn_dim: int = 3072
    num_layers: int = 2
    alpha_macs_per_frame: Optional[int] = None
    base_frame_period_ms: float = DEFAULT_FRAME_PERIOD_MS
    base_frames: int = 500

    @property
    def alpha_cost(self) -> int:
        if self.alpha_macs_per_frame is None:
            return 3 * self.model_dim * self.model_dim
        return self.alpha_macs_per_frame

    def check(self) -> bool:
        """Validate options, raising OfaConfigError on the first problem."""
        if self.model_dim < 1 or self.ffn_dim < 1 or self.num_layers < 0:
            raise OfaConfigError("need model_dim >= 1, ffn_dim >= 1 and num_layers >= 0")
        if self.alpha_macs_per_frame is not None and self.alpha_macs_per_frame < 0:
            raise OfaConfigError("alpha_macs_per_frame must be >= 0")
        if self.base_frame_period_ms <= 0 or self.base_frames < 1:
            raise OfaConfigError("need base_frame_period_ms > 0 and base_frames >= 1")
        return True
