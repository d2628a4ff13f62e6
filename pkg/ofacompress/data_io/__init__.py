# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .types import (
    DEFAULT_FRAME_PERIOD_MS,
    Corpus,
    FeatureSequence,
    GuidanceTargets,
    Utterance,
)
from .options import SyntheticSpec
from .synthetic import generate_corpus
from .features import (
    BOUNDARY_MARKER,
    MAGIC,
    VERSION,
    decode_features,
    encode_features,
    read_features,
    write_features,
)
from .manifest import (
    MANIFEST_NAME,
    CorpusManifest,
    ManifestEntry,
    load_corpus,
    load_manifest,
    save_corpus,
)

__all__ = [
    "DEFAULT_FRAME_PERIOD_MS",
    "Corpus",
    "FeatureSequence",
    "GuidanceTargets",
    "Utterance",
    "SyntheticSpec",
    "generate_corpus",
    "BOUNDARY_MARKER",
    "MAGIC",
    "VERSION",
    "decode_features",
    "encode_features",
    "read_features",
    "write_features",
    "MANIFEST_NAME",
    "CorpusManifest",
    "ManifestEntry",
    "load_corpus",
    "load_manifest",
    "save_corpus",
]
