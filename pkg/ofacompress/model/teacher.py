# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from typing import Dict, List, Optional, Union

import numpy as np

from ..data_io.types import DEFAULT_FRAME_PERIOD_MS, FeatureSequence
from ..diffmath import Matrix, ops
from ..errors import OfaShapeError
from .layers import Linear, named_parameters
from .options import ModelConfig

# keeps teacher initialization independent of the student's stream
_TEACHER_SEED_OFFSET = 7919


class TeacherModel:
    """
    Frozen, randomly initialized frame-wise encoder.

    Layer i is ``tanh(h_{i-1} W_i + b_i)`` with ``h_0`` the input features; every
    layer keeps the input length T.
    """

    def __init__(self, config: Optional[ModelConfig] = None, seed: Optional[int] = None):
        self.config = config or ModelConfig()
        self.config.check()
        cfg = self.config
        rng = np.random.default_rng(cfg.seed + _TEACHER_SEED_OFFSET if seed is None else seed)
        self.layers: List[Linear] = []
        fan_in = cfg.input_dim
        for i in range(cfg.teacher_layers):
            self.layers.append(Linear(fan_in, cfg.teacher_dim, rng, f"teacher.layer{i}"))
            fan_in = cfg.teacher_dim
        for param in self.parameters().values():
            param.requires_grad = False

    def parameters(self) -> Dict[str, Matrix]:
        return named_parameters(*self.layers)

    def load_parameters(self, values: Dict[str, np.ndarray]) -> None:
        for name, param in self.parameters().items():
            if name not in values:
                raise OfaShapeError(f"no value for parameter {name}")
            arr = np.asarray(values[name], dtype=np.float64)
            if arr.shape != param.shape:
                raise OfaShapeError(f"{name}: expected {param.shape}, got {arr.shape}")
            param.data = arr.copy()

    def forward(self, features: Union[FeatureSequence, Matrix]) -> List[FeatureSequence]:
        """All layer representations, each T x teacher_dim; nothing is recorded for gradients."""
        if isinstance(features, FeatureSequence):
            x, period = features.values, features.frame_period_ms
        else:
            x, period = features.data, DEFAULT_FRAME_PERIOD_MS
        if x.shape[1] != self.config.input_dim:
            raise OfaShapeError(f"teacher expects {self.config.input_dim}-dim features, got {x.shape[1]}")
        h = Matrix(x)
        out = []
        for layer in self.layers:
            h = ops.detach(ops.tanh(layer(h)))
            out.append(FeatureSequence(h.data.copy(), period))
        return out


def teacher_forward(teacher: TeacherModel, features: Union[FeatureSequence, Matrix]) -> List[FeatureSequence]:
    return teacher.forward(features)
