# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import json
import struct

import numpy as np
import pytest

from ofacompress.data_io import (
    MANIFEST_NAME,
    FeatureSequence,
    GuidanceTargets,
    SyntheticSpec,
    decode_features,
    encode_features,
    generate_corpus,
    load_corpus,
    read_features,
    save_corpus,
    write_features,
)
from ofacompress.errors import (
    FeatureFileErrorCode,
    OfaBadMagicError,
    OfaConfigError,
    OfaDataError,
    OfaTruncatedFileError,
    OfaUnsupportedVersionError,
)
from ofacompress.utils.jsonconfig import config_from_json, load_config, save_config


class TestSynthetic:
    def test_deterministic(self, small_spec):
        a, b = generate_corpus(small_spec), generate_corpus(small_spec)
        for x, y in zip(a, b):
            assert encode_features(x.features, x.targets) == encode_features(y.features, y.targets)
            assert x.frame_labels == y.frame_labels

    def test_seed_changes_corpus(self, small_spec):
        other = SyntheticSpec(**{**small_spec.to_dict(), "seed": 1})
        assert not np.array_equal(generate_corpus(small_spec)[0].features.values, generate_corpus(other)[0].features.values)

    def test_structure(self, small_spec):
        corpus = generate_corpus(small_spec)
        assert len(corpus) == small_spec.num_utterances
        assert corpus.feature_dim == small_spec.feature_dim
        for utt in corpus:
            assert small_spec.min_frames <= utt.num_frames <= small_spec.max_frames
            assert sum(utt.segment_lengths) == utt.num_frames
            assert utt.targets.num_segments == len(utt.segment_lengths)
            assert utt.targets.boundaries[-1] == 1
            assert len(utt.frame_labels) == utt.num_frames
            assert 0 <= utt.utterance_label < small_spec.num_utterance_classes

    def test_degenerate_spec(self):
        spec = SyntheticSpec(num_utterances=3, noise=0.0, vocab_size=1, num_utterance_classes=1)
        for utt in generate_corpus(spec):
            assert np.all(utt.features.values == utt.features.values[0])
            assert utt.targets.num_segments >= 1

    def test_rejects_bad_spec(self):
        with pytest.raises(OfaConfigError):
            generate_corpus(SyntheticSpec(min_frames=10, max_frames=5))


class TestFeatureFile:
    def test_round_trip(self, tmp_path, small_corpus):
        utt = small_corpus[0]
        path = tmp_path / "a.ofaf"
        write_features(path, utt.features, utt.targets)
        seq, targets = read_features(path)
        np.testing.assert_array_equal(seq.values, utt.features.values)
        assert seq.frame_period_ms == utt.features.frame_period_ms
        assert len(targets) == utt.num_frames
        np.testing.assert_array_equal(targets.boundaries, utt.targets.boundaries)

    def test_without_boundaries(self):
        seq, targets = decode_features(encode_features(FeatureSequence(np.ones((3, 2)))))
        assert targets is None
        assert seq.values.shape == (3, 2)

    def test_bad_magic(self):
        blob = b"NOPE" + encode_features(FeatureSequence(np.ones((2, 2))))[4:]
        with pytest.raises(OfaBadMagicError) as exc:
            decode_features(blob)
        assert exc.value.code == FeatureFileErrorCode.BAD_MAGIC
        assert "bad magic" in exc.value.message

    def test_truncated_payload(self):
        blob = encode_features(FeatureSequence(np.ones((4, 2))))
        with pytest.raises(OfaTruncatedFileError) as exc:
            decode_features(blob[:-3])
        assert exc.value.code == FeatureFileErrorCode.TRUNCATED

    def test_truncated_header(self):
        with pytest.raises(OfaTruncatedFileError):
            decode_features(b"OFAF\x01\x00")

    def test_unsupported_version(self):
        blob = bytearray(encode_features(FeatureSequence(np.ones((2, 2)))))
        struct.pack_into("<I", blob, 4, 2)
        with pytest.raises(OfaUnsupportedVersionError) as exc:
            decode_features(bytes(blob))
        assert exc.value.code == FeatureFileErrorCode.UNSUPPORTED_VERSION

    def test_codes_are_distinct(self):
        assert len({c.value for c in FeatureFileErrorCode}) == 3

    def test_wrong_marker(self):
        blob = encode_features(FeatureSequence(np.ones((2, 2)))) + struct.pack("<I", 7) + b"\x00\x01"
        with pytest.raises(OfaDataError):
            decode_features(blob)

    def test_trailing_bytes(self):
        seq = FeatureSequence(np.ones((2, 2)))
        blob = encode_features(seq, GuidanceTargets([0, 1])) + b"\x00"
        with pytest.raises(OfaDataError):
            decode_features(blob)

    def test_boundary_length_mismatch(self):
        with pytest.raises(OfaDataError):
            encode_features(FeatureSequence(np.ones((3, 2))), GuidanceTargets([0, 1]))


class TestCorpusDirectory:
    def test_count_and_manifest(self, tmp_path):
        spec = SyntheticSpec(num_utterances=10, min_frames=4, max_frames=8, seed=3)
        manifest = save_corpus(generate_corpus(spec), tmp_path, spec)
        files = sorted(p.name for p in tmp_path.glob("*.ofaf"))
        assert len(files) == 10
        assert sorted(e.file for e in manifest.entries) == files
        doc = json.loads((tmp_path / MANIFEST_NAME).read_text())
        assert doc["spec"]["seed"] == 3

    def test_same_spec_same_bytes(self, tmp_path, small_spec):
        save_corpus(generate_corpus(small_spec), tmp_path / "a", small_spec)
        save_corpus(generate_corpus(small_spec), tmp_path / "b", small_spec)
        for path in sorted((tmp_path / "a").iterdir()):
            assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()

    def test_load_round_trip(self, tmp_path, small_corpus):
        save_corpus(small_corpus, tmp_path)
        loaded = load_corpus(tmp_path)
        assert len(loaded) == len(small_corpus)
        assert loaded.num_utterance_classes == small_corpus.num_utterance_classes
        for a, b in zip(loaded, small_corpus):
            np.testing.assert_array_equal(a.features.values, b.features.values)
            assert a.frame_labels == b.frame_labels
            assert a.segment_lengths == b.segment_lengths
            assert a.utterance_label == b.utterance_label

    def test_frame_count_mismatch(self, tmp_path, small_corpus):
        save_corpus(small_corpus, tmp_path)
        doc = json.loads((tmp_path / MANIFEST_NAME).read_text())
        doc["entries"][0]["num_frames"] += 1
        (tmp_path / MANIFEST_NAME).write_text(json.dumps(doc))
        with pytest.raises(OfaDataError):
            load_corpus(tmp_path)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(OfaDataError):
            load_corpus(tmp_path)


class TestJsonConfig:
    def test_load_and_save(self, tmp_path):
        path = tmp_path / "spec.json"
        save_config(SyntheticSpec(num_utterances=4), path)
        assert load_config(SyntheticSpec, path).num_utterances == 4

    def test_partial_document_uses_defaults(self):
        spec = config_from_json(SyntheticSpec, '{"noise": 0.5}')
        assert spec.noise == 0.5 and spec.num_utterances == 100

    @pytest.mark.parametrize("text", ["{", "[1, 2]", '{"num_utterances": 0}'])
    def test_rejects(self, text):
        with pytest.raises(OfaConfigError):
            config_from_json(SyntheticSpec, text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OfaConfigError):
            load_config(SyntheticSpec, tmp_path / "none.json")
