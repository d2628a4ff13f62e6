# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import pytest

from ofacompress.data_io import SyntheticSpec, generate_corpus
from ofacompress.model import ModelConfig, StudentModel, TeacherModel
from ofacompress.training import TrainConfig


@pytest.fixture
def small_spec():
    return SyntheticSpec(
        num_utterances=6,
        min_frames=8,
        max_frames=16,
        feature_dim=4,
        vocab_size=5,
        num_utterance_classes=2,
        seed=0,
    )


@pytest.fixture
def small_corpus(small_spec):
    return generate_corpus(small_spec)


@pytest.fixture
def small_model_config():
    return ModelConfig(
        input_dim=4,
        encoder_dim=4,
        model_dim=8,
        ffn_dim=8,
        num_blocks=1,
        teacher_layers=2,
        teacher_dim=4,
        seed=0,
    )


@pytest.fixture
def student(small_model_config):
    return StudentModel(small_model_config)


@pytest.fixture
def teacher(small_model_config):
    return TeacherModel(small_model_config)


@pytest.fixture
def train_config(small_model_config):
    return TrainConfig(model=small_model_config, steps=3, batch_size=2, learning_rate=0.05, seed=0)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for var in ("OFA_SEED", "OFA_WORKERS", "OFA_LOGGING"):
        monkeypatch.delenv(var, raising=False)
