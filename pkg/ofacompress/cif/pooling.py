# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
α-weighted pooling of frame features along a fixed segmentation.

The segmentation is held constant for differentiation: gradients reach α
through the pooling weights, never through where events fired.
"""

from typing import List, Sequence, Tuple, Union

import numpy as np

from ..data_io.types import FeatureSequence
from ..diffmath import Matrix, ops
from ..errors import OfaCifError
from .types import AlphaLike, CompressedSequence, Segmentation, Span, alpha_values

FeaturesLike = Union[Matrix, FeatureSequence]

# how each pooling weight depends on α
_ALPHA, _CARRY, _LEFT, _CONST = range(4)


def _as_matrix(features: FeaturesLike) -> Matrix:
    if isinstance(features, FeatureSequence):
        return features.matrix()
    return features


def _weight_table(values: np.ndarray, seg: Segmentation) -> Tuple[np.ndarray, List[List[Tuple[int, int]]]]:
    """Pooling weights N x T and, per segment, (frame, dependency kind) pairs."""
    n, t_len = seg.num_fires, seg.source_length
    weights = np.zeros((n, t_len))
    kinds: List[List[Tuple[int, int]]] = []
    for k, (ev, start) in enumerate(zip(seg.events, seg.starts())):
        row: List[Tuple[int, int]] = []
        for t in range(start, ev.fire_frame + 1):
            if k > 0 and t == start:
                weights[k, t] = seg.events[k - 1].residual
                row.append((t, _CARRY))
            elif t == ev.fire_frame and not ev.is_tail:
                weights[k, t] = ev.left_weight
                row.append((t, _LEFT))
            else:
                weights[k, t] = values[t]
                row.append((t, _ALPHA))
        if weights[k].sum() == 0.0:
            # zero mass: plain mean over the span
            span_len = ev.fire_frame - start + 1
            weights[k, start : ev.fire_frame + 1] = 1.0 / span_len
            row = [(t, _CONST) for t, _ in row]
        kinds.append(row)
    return weights, kinds


def segment_weights(alpha: Matrix, seg: Segmentation) -> Matrix:
    """
    The N x T pooling matrix for ``seg`` as a differentiable function of α.

    Interior frames weigh α_t. A fire frame weighs ``k*threshold - cumsum(α)``
    up to the previous frame, and the carried residual on the next segment's
    first frame is ``cumsum(α) - k*threshold`` through that frame; both
    telescope, which gives the backward pass below.
    """
    values = alpha_values(alpha)
    if len(values) != seg.source_length:
        raise OfaCifError(f"alpha has {len(values)} frames, segmentation covers {seg.source_length}")
    weights, kinds = _weight_table(values, seg)
    t_len = seg.source_length

    def backward_fn(g):
        galpha = np.zeros(t_len)
        for k, row in enumerate(kinds):
            for t, kind in row:
                gk = g[k, t]
                if kind == _ALPHA:
                    galpha[t] += gk
                elif kind == _CARRY:
                    galpha[: t + 1] += gk
                elif kind == _LEFT:
                    galpha[:t] -= gk
        return (galpha.reshape(-1, 1),)

    column = alpha if isinstance(alpha, Matrix) else Matrix.column(values)
    return ops.apply(weights, (column,), backward_fn)


def spans_of(weights: np.ndarray, seg: Segmentation) -> List[Span]:
    spans = []
    for k, (ev, start) in enumerate(zip(seg.events, seg.starts())):
        spans.append(Span(start, ev.fire_frame, tuple(weights[k, start : ev.fire_frame + 1].tolist())))
    return spans


def pool_segments(features: FeaturesLike, alpha: AlphaLike, seg: Segmentation) -> CompressedSequence:
    """
    Pool T input frames into N output frames, one per fire event.

    Output row k is the weighted sum of the frames in segment k with the
    boundary frames split between neighbouring segments. Weights are not
    normalized; a full segment's weights add up to the threshold.

    Raises:
        OfaCifError: features, α and segmentation disagree on T.
    """
    feats = _as_matrix(features)
    if feats.rows != seg.source_length:
        raise OfaCifError(f"features have {feats.rows} frames, segmentation covers {seg.source_length}")
    alpha_m = alpha if isinstance(alpha, Matrix) else Matrix.column(alpha_values(alpha))
    w = segment_weights(alpha_m, seg)
    return CompressedSequence(ops.matmul(w, feats), spans_of(w.data, seg))


def pool_teacher(
    teacher_layers: Sequence[FeaturesLike], alpha: AlphaLike, seg: Segmentation
) -> List[CompressedSequence]:
    """
    Apply the student's segmentation and weights to every teacher layer.

    Teacher features are constants and receive no gradient. A tracked α keeps
    its path through the pooling weights, as in :func:`pool_segments`.
    """
    alpha_m = alpha if isinstance(alpha, Matrix) else Matrix.column(alpha_values(alpha))
    pooled = []
    for i, layer in enumerate(teacher_layers):
        feats = ops.detach(_as_matrix(layer))
        if feats.rows != seg.source_length:
            raise OfaCifError(
                f"teacher layer {i} has {feats.rows} frames, segmentation covers {seg.source_length}"
            )
        pooled.append(pool_segments(feats, alpha_m, seg))
    return pooled


def upsample_matrix(seg: Segmentation, alpha: AlphaLike) -> np.ndarray:
    """
    T x N 0/1 matrix sending each input frame to the output frame that owns it.

    A boundary frame belongs to whichever neighbouring segment holds more of its
    weight (the earlier one on ties); frames after the last event go to the last one.
    """
    values = alpha_values(alpha)
    weights, _ = _weight_table(values, seg)
    n, t_len = weights.shape
    owner = np.full(t_len, n - 1, dtype=np.int64)
    for t in range(t_len):
        covering = [k for k, (ev, start) in enumerate(zip(seg.events, seg.starts())) if start <= t <= ev.fire_frame]
        if covering:
            owner[t] = max(covering, key=lambda k: (weights[k, t], -k))
    up = np.zeros((t_len, n))
    up[np.arange(t_len), owner] = 1.0
    return up


def upsample_weights(alpha: AlphaLike, seg: Segmentation) -> Matrix:
    """
    T x N soft upsampling matrix, differentiable w.r.t. α.

    Row t spreads input frame t over the output frames that pooled it, in
    proportion to its pooling weights, so a boundary frame blends its two
    neighbouring segments. Frames that no segment weighs (zero α, or mass
    after the last event) fall back to the owner from :func:`upsample_matrix`.
    """
    alpha_m = alpha if isinstance(alpha, Matrix) else Matrix.column(alpha_values(alpha))
    w = segment_weights(alpha_m, seg)
    weights = w.data
    mass = weights.sum(axis=0)
    live = mass > 0.0
    up = upsample_matrix(seg, alpha_m)
    up[live] = (weights[:, live] / mass[live]).T

    def backward_fn(g):
        gw = np.zeros_like(weights)
        dot = (g * up).sum(axis=1, keepdims=True)
        gw[:, live] = ((g[live] - dot[live]) / mass[live, None]).T
        return (gw,)

    return ops.apply(up, (w,), backward_fn)
