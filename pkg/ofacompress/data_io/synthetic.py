# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from typing import List, Tuple

import numpy as np

from .options import SyntheticSpec
from .types import Corpus, FeatureSequence, GuidanceTargets, Utterance


def _segment_lengths(rng: np.random.Generator, spec: SyntheticSpec, num_frames: int) -> List[int]:
    lengths: List[int] = []
    remaining = num_frames
    while remaining > 0:
        n = int(rng.integers(spec.min_segment_frames, spec.max_segment_frames + 1))
        n = min(n, remaining)
        lengths.append(n)
        remaining -= n
    return lengths


def _utterance(
    rng: np.random.Generator,
    spec: SyntheticSpec,
    embeddings: np.ndarray,
    offsets: np.ndarray,
    index: int,
) -> Utterance:
    num_frames = int(rng.integers(spec.min_frames, spec.max_frames + 1))
    label = int(rng.integers(spec.num_utterance_classes))
    lengths = _segment_lengths(rng, spec, num_frames)
    tokens = rng.integers(spec.vocab_size, size=len(lengths))

    frame_tokens = np.repeat(tokens, lengths)
    boundaries = np.zeros(num_frames, dtype=np.uint8)
    boundaries[np.cumsum(lengths) - 1] = 1

    noise = rng.normal(size=(num_frames, spec.feature_dim)) * spec.noise
    values = embeddings[frame_tokens] + offsets[label] + noise
    # float32 precision so files round-trip bit-exactly
    values = values.astype(np.float32).astype(np.float64)

    return Utterance(
        features=FeatureSequence(values, spec.frame_period_ms),
        targets=GuidanceTargets(boundaries),
        utterance_label=label,
        frame_labels=[int(t) for t in frame_tokens],
        segment_lengths=lengths,
        name=f"utt{index:05d}",
    )


def _tables(rng: np.random.Generator, spec: SyntheticSpec) -> Tuple[np.ndarray, np.ndarray]:
    embeddings = rng.normal(size=(spec.vocab_size, spec.feature_dim))
    offsets = rng.normal(size=(spec.num_utterance_classes, spec.feature_dim)) * spec.utterance_scale
    if spec.num_utterance_classes == 1:
        offsets[:] = 0.0
    return embeddings, offsets


def generate_corpus(spec: SyntheticSpec) -> Corpus:
    """
    Generate utterances with latent segment structure, fully determined by ``spec.seed``.

    Each utterance is cut into segments of ``min_segment_frames..max_segment_frames``
    frames (the last one truncated to fit); every segment repeats one vocabulary
    embedding, the utterance's class offset is added to all frames, and Gaussian
    noise is added per frame. The boundary bit is set on each segment's last frame.
    """
    spec.check()
    rng = np.random.default_rng(spec.seed)
    embeddings, offsets = _tables(rng, spec)
    utterances = [_utterance(rng, spec, embeddings, offsets, i) for i in range(spec.num_utterances)]
    return Corpus(utterances, spec.num_utterance_classes, spec.vocab_size)
