# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from dataclasses_json import dataclass_json

from ..errors import OfaDataError
from ..utils import verboselogs
from .features import read_features, write_features
from .options import SyntheticSpec
from .types import Corpus, Utterance

MANIFEST_NAME = "manifest.json"

PathLike = Union[str, Path]


@dataclass_json
@dataclass
class ManifestEntry:
    """One utterance file and the labels that do not fit in it."""

    file: str = ""
    name: str = ""
    num_frames: int = 0
    num_segments: int = 0
    utterance_label: int = 0
    frame_labels: List[int] = field(default_factory=list)
    segment_lengths: List[int] = field(default_factory=list)


@dataclass_json
@dataclass
class CorpusManifest:
    """Index of a corpus directory, stored as ``manifest.json``."""

    feature_dim: int = 0
    frame_period_ms: float = 0.0
    num_utterance_classes: int = 1
    vocab_size: int = 1
    entries: List[ManifestEntry] = field(default_factory=list)
    spec: Optional[SyntheticSpec] = None


def save_corpus(
    corpus: Corpus,
    out_dir: PathLike,
    spec: Optional[SyntheticSpec] = None,
    verbose: Optional[int] = None,
) -> CorpusManifest:
    """
    Write one FeatureFile per utterance (with its boundary block) plus ``manifest.json``.
    """
    logger = verboselogs.component_logger(__name__, verbose)
    logger.debug("save_corpus ENTER")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = CorpusManifest(
        feature_dim=corpus.feature_dim,
        frame_period_ms=corpus.frame_period_ms,
        num_utterance_classes=corpus.num_utterance_classes,
        vocab_size=corpus.vocab_size,
        spec=spec,
    )
    for i, utt in enumerate(corpus):
        name = utt.name or f"utt{i:05d}"
        file_name = f"{name}.ofaf"
        write_features(out / file_name, utt.features, utt.targets)
        manifest.entries.append(
            ManifestEntry(
                file=file_name,
                name=name,
                num_frames=utt.num_frames,
                num_segments=utt.targets.num_segments,
                utterance_label=utt.utterance_label,
                frame_labels=list(utt.frame_labels),
                segment_lengths=list(utt.segment_lengths),
            )
        )
    (out / MANIFEST_NAME).write_text(manifest.to_json(indent=2) + "\n", encoding="utf-8")

    logger.notice("wrote %d utterances to %s", len(manifest.entries), out)
    logger.debug("save_corpus LEAVE")
    return manifest


def load_manifest(data_dir: PathLike) -> CorpusManifest:
    path = Path(data_dir) / MANIFEST_NAME
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise OfaDataError(f"cannot read manifest {path}: {e}") from e
    try:
        return CorpusManifest.from_dict(doc)  # type: ignore[attr-defined]
    except (KeyError, TypeError, ValueError) as e:
        raise OfaDataError(f"malformed manifest {path}: {e}") from e


def load_corpus(data_dir: PathLike) -> Corpus:
    """
    Read a corpus directory written by :func:`save_corpus`.

    Raises:
        OfaDataError: missing manifest, unreadable files, or a file disagreeing with its entry.
    """
    manifest = load_manifest(data_dir)
    if not manifest.entries:
        raise OfaDataError(f"manifest in {data_dir} lists no utterances")
    utterances = []
    for entry in manifest.entries:
        seq, targets = read_features(Path(data_dir) / entry.file)
        if targets is None:
            raise OfaDataError(f"{entry.file} has no boundary block")
        if seq.num_frames != entry.num_frames:
            raise OfaDataError(
                f"{entry.file} holds {seq.num_frames} frames, manifest says {entry.num_frames}"
            )
        utterances.append(
            Utterance(
                features=seq,
                targets=targets,
                utterance_label=entry.utterance_label,
                frame_labels=list(entry.frame_labels),
                segment_lengths=list(entry.segment_lengths),
                name=entry.name,
            )
        )
    return Corpus(utterances, manifest.num_utterance_classes, manifest.vocab_size)
