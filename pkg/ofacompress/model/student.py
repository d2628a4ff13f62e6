# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
The student: encoder -> α module -> α modification -> integrate-and-fire ->
pooling -> mixer -> one prediction head per distilled teacher layer.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..alphamod import LambdaControl, modify_alpha
from ..cif import CompressedSequence, Segmentation, integrate_and_fire, pool_segments
from ..data_io.types import FeatureSequence
from ..diffmath import Matrix, ops
from ..errors import OfaShapeError
from .layers import Linear, MixerBlock, named_parameters
from .options import ModelConfig

FeaturesLike = Union[FeatureSequence, Matrix]


def _as_matrix(features: FeaturesLike) -> Matrix:
    return features.matrix() if isinstance(features, FeatureSequence) else features


@dataclass
class StudentOutput:
    """
    Everything one student forward pass produces.

    ``alpha_raw`` is the α module output before modification, the input of the
    guidance losses; ``alpha_mod`` is what integrate-and-fire consumed.
    ``relu_margin`` is the smallest |ReLU pre-activation| in the mixer.
    """

    alpha_raw: Matrix
    alpha_mod: Matrix
    segmentation: Segmentation
    compressed: CompressedSequence
    hidden: Matrix
    head_outputs: List[CompressedSequence] = field(default_factory=list)
    lam: float = 1.0
    relu_margin: float = float("inf")

    @property
    def num_fires(self) -> int:
        return self.segmentation.num_fires


class StudentModel:
    """
    Toy once-for-all student.

    All parameters are trainable leaves unless the model is :meth:`frozen`.
    """

    def __init__(self, config: Optional[ModelConfig] = None):
        self.config = config or ModelConfig()
        self.config.check()
        cfg = self.config
        rng = np.random.default_rng(cfg.seed)
        self.encoder = Linear(cfg.input_dim, cfg.encoder_dim, rng, "encoder")
        self.alpha = Linear(cfg.encoder_dim, 1, rng, "alpha", bias=cfg.alpha_bias)
        self.projection = Linear(cfg.encoder_dim, cfg.model_dim, rng, "projection")
        self.blocks = [MixerBlock(cfg.model_dim, cfg.ffn_dim, rng, f"block{i}") for i in range(cfg.num_blocks)]
        self.heads = [Linear(cfg.model_dim, cfg.teacher_dim, rng, f"head{k}") for k in range(cfg.teacher_layers)]

    def parameters(self) -> Dict[str, Matrix]:
        """Named parameters in a fixed order."""
        return named_parameters(self.encoder, self.alpha, self.projection, *self.blocks, *self.heads)

    def encode_frames(self, features: FeaturesLike) -> Matrix:
        x = _as_matrix(features)
        if x.cols != self.config.input_dim:
            raise OfaShapeError(f"student expects {self.config.input_dim}-dim features, got {x.cols}")
        return ops.tanh(self.encoder(x))

    def alpha_module(self, encoder_out: Matrix) -> Matrix:
        """One weight per frame: sigmoid of a frame-wise linear map, T x 1."""
        return ops.sigmoid(self.alpha(encoder_out))

    def mix(self, compressed: Matrix) -> Tuple[Matrix, float]:
        h = self.projection(compressed)
        margin = float("inf")
        for block in self.blocks:
            h, block_margin = block(h)
            margin = min(margin, block_margin)
        return h, margin

    def compress(self, features: FeaturesLike, lambda_ctl: LambdaControl) -> StudentOutput:
        """Everything up to the mixer output; ``head_outputs`` is left empty."""
        cfg = self.config
        enc = self.encode_frames(features)
        alpha_raw = self.alpha_module(enc)
        alpha_mod = modify_alpha(alpha_raw, lambda_ctl.as_matrix())
        seg = integrate_and_fire(alpha_mod, cfg.threshold, cfg.tail_threshold)
        compressed = pool_segments(enc, alpha_mod, seg)
        hidden, margin = self.mix(compressed.frames)
        return StudentOutput(
            alpha_raw=alpha_raw,
            alpha_mod=alpha_mod,
            segmentation=seg,
            compressed=compressed,
            hidden=hidden,
            lam=lambda_ctl.value,
            relu_margin=margin,
        )

    def forward(self, features: FeaturesLike, lambda_ctl: LambdaControl) -> StudentOutput:
        """
        Run the full distillation pipeline at the λ in ``lambda_ctl``.

        Every head output has one row per fire event.
        """
        out = self.compress(features, lambda_ctl)
        out.head_outputs = [CompressedSequence(head(out.hidden), out.compressed.spans) for head in self.heads]
        return out

    def encode(self, features: FeaturesLike, lambda_ctl: LambdaControl) -> CompressedSequence:
        """Inference path with the prediction heads discarded: the mixer output, N x d."""
        out = self.compress(features, lambda_ctl)
        return CompressedSequence(out.hidden, out.compressed.spans)

    def clone(self) -> "StudentModel":
        """An independent copy with equal parameter values."""
        twin = StudentModel(self.config)
        twin.load_parameters({name: p.data for name, p in self.parameters().items()})
        mine = self.parameters()
        for name, param in twin.parameters().items():
            param.requires_grad = mine[name].requires_grad
        return twin

    def frozen(self) -> "StudentModel":
        """A copy whose parameters are constants."""
        twin = self.clone()
        for param in twin.parameters().values():
            param.requires_grad = False
        return twin

    def load_parameters(self, values: Dict[str, np.ndarray]) -> None:
        """
        Overwrite parameters in place from ``name -> array``.

        Raises:
            OfaShapeError: a name is missing or a shape differs.
        """
        for name, param in self.parameters().items():
            if name not in values:
                raise OfaShapeError(f"no value for parameter {name}")
            arr = np.asarray(values[name], dtype=np.float64)
            if arr.shape != param.shape:
                raise OfaShapeError(f"{name}: expected {param.shape}, got {arr.shape}")
            param.data = arr.copy()


def alpha_module(student: StudentModel, encoder_out: FeaturesLike) -> Matrix:
    """α for an encoder output sequence."""
    return student.alpha_module(_as_matrix(encoder_out))


def student_forward(
    student: StudentModel, features: FeaturesLike, lambda_ctl: LambdaControl
) -> StudentOutput:
    return student.forward(features, lambda_ctl)
