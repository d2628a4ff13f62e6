# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import math
from typing import Dict, Iterator, Tuple

import numpy as np

from ..diffmath import Matrix, ops


class Linear:
    """``x W + b`` with ``W`` in x out and a 1 x out bias broadcast down the rows."""

    def __init__(self, fan_in: int, fan_out: int, rng: np.random.Generator, name: str, bias: float = 0.0):
        self.name = name
        self.weight = Matrix(
            rng.normal(size=(fan_in, fan_out)) / math.sqrt(fan_in),
            requires_grad=True,
            name=f"{name}.weight",
        )
        self.bias = Matrix(np.full((1, fan_out), bias), requires_grad=True, name=f"{name}.bias")

    def __call__(self, x: Matrix) -> Matrix:
        return ops.add(ops.matmul(x, self.weight), self.bias)

    def parameters(self) -> Iterator[Tuple[str, Matrix]]:
        yield f"{self.name}.weight", self.weight
        yield f"{self.name}.bias", self.bias


class MixerBlock:
    """
    One post-residual transformer block: single-head softmax self-attention,
    then a ReLU feed-forward layer.

    The only matrix products are the four d x d projections, the two n x n
    attention products and the two feed-forward layers, so the MACs counted
    for a call are exactly ``4nd² + 2n²d + 2ndf``.
    """

    def __init__(self, dim: int, ffn_dim: int, rng: np.random.Generator, name: str):
        self.name = name
        self.dim = dim
        self.query = Linear(dim, dim, rng, f"{name}.query")
        self.key = Linear(dim, dim, rng, f"{name}.key")
        self.value = Linear(dim, dim, rng, f"{name}.value")
        self.out = Linear(dim, dim, rng, f"{name}.out")
        self.ffn_in = Linear(dim, ffn_dim, rng, f"{name}.ffn_in")
        self.ffn_out = Linear(ffn_dim, dim, rng, f"{name}.ffn_out")

    def __call__(self, h: Matrix) -> Tuple[Matrix, float]:
        """Returns the block output and the smallest |pre-activation| of the ReLU."""
        q, k, v = self.query(h), self.key(h), self.value(h)
        scores = ops.scale(ops.matmul(q, ops.transpose(k)), 1.0 / math.sqrt(self.dim))
        mixed = ops.matmul(ops.softmax_rows(scores), v)
        h = ops.add(h, self.out(mixed))

        pre = self.ffn_in(h)
        margin = float(np.min(np.abs(pre.data)))
        h = ops.add(h, self.ffn_out(ops.relu(pre)))
        return h, margin

    def parameters(self) -> Iterator[Tuple[str, Matrix]]:
        for layer in (self.query, self.key, self.value, self.out, self.ffn_in, self.ffn_out):
            yield from layer.parameters()


def named_parameters(*modules) -> Dict[str, Matrix]:
    params: Dict[str, Matrix] = {}
    for module in modules:
        for name, param in module.parameters():
            params[name] = param
    return params
