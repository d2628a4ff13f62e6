# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .options import ModelConfig
from .layers import Linear, MixerBlock
from .student import StudentModel, StudentOutput, alpha_module, student_forward
from .teacher import TeacherModel, teacher_forward
from .checkpoint import (
    Checkpoint,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)

__all__ = [
    "ModelConfig",
    "Linear",
    "MixerBlock",
    "StudentModel",
    "StudentOutput",
    "alpha_module",
    "student_forward",
    "TeacherModel",
    "teacher_forward",
    "Checkpoint",
    "decode_checkpoint",
    "encode_checkpoint",
    "load_checkpoint",
    "save_checkpoint",
]
