# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Versioned binary checkpoints.

Little-endian: magic ``OFAC``, u32 format version, then named blocks until end
of file, each ``u16 name length, name (UTF-8), u32 rows, u32 cols, rows*cols f64``.
Besides the student parameters a checkpoint carries the teacher (``teacher.*``),
the model dimensions (``meta.model``) and the pre-training λ range
(``meta.lambda_range``).
"""

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from ..alphamod import SampleRange
from ..errors import FeatureFileErrorCode, OfaCheckpointError, OfaCompressError
from .options import ModelConfig
from .student import StudentModel
from .teacher import TeacherModel

MAGIC = b"OFAC"
VERSION = 1

_PREAMBLE = struct.Struct("<4sI")
_NAME_LEN = struct.Struct("<H")
_SHAPE = struct.Struct("<II")

META_MODEL = "meta.model"
META_LAMBDA_RANGE = "meta.lambda_range"

_MODEL_FIELDS = (
    "input_dim",
    "encoder_dim",
    "model_dim",
    "ffn_dim",
    "num_blocks",
    "teacher_layers",
    "teacher_dim",
    "alpha_bias",
    "threshold",
    "tail_threshold",
    "seed",
)
_INT_FIELDS = {"input_dim", "encoder_dim", "model_dim", "ffn_dim", "num_blocks", "teacher_layers", "teacher_dim", "seed"}

PathLike = Union[str, Path]


@dataclass
class Checkpoint:
    """A student with the teacher it was distilled from and its λ range."""

    student: StudentModel
    teacher: Optional[TeacherModel] = None
    lambda_range: Optional[SampleRange] = None


def _block(name: str, values: np.ndarray) -> bytes:
    raw = name.encode("utf-8")
    arr = np.ascontiguousarray(values, dtype="<f8")
    rows, cols = arr.shape
    return _NAME_LEN.pack(len(raw)) + raw + _SHAPE.pack(rows, cols) + arr.tobytes()


def encode_checkpoint(ckpt: Checkpoint) -> bytes:
    cfg = ckpt.student.config
    parts = [_PREAMBLE.pack(MAGIC, VERSION)]
    parts.append(_block(META_MODEL, np.array([[float(getattr(cfg, f)) for f in _MODEL_FIELDS]])))
    if ckpt.lambda_range is not None:
        parts.append(_block(META_LAMBDA_RANGE, np.array([[ckpt.lambda_range.low, ckpt.lambda_range.high]])))
    for name, param in ckpt.student.parameters().items():
        parts.append(_block(name, param.data))
    if ckpt.teacher is not None:
        for name, param in ckpt.teacher.parameters().items():
            parts.append(_block(name, param.data))
    return b"".join(parts)


def _read_blocks(blob: bytes) -> Dict[str, np.ndarray]:
    if len(blob) < _PREAMBLE.size or blob[:4] != MAGIC:
        raise OfaCheckpointError(f"not a checkpoint: magic {blob[:4]!r}", FeatureFileErrorCode.BAD_MAGIC)
    _, version = _PREAMBLE.unpack_from(blob, 0)
    if version != VERSION:
        raise OfaCheckpointError(
            f"checkpoint version {version}, this build reads {VERSION}",
            FeatureFileErrorCode.UNSUPPORTED_VERSION,
        )
    blocks: Dict[str, np.ndarray] = {}
    offset = _PREAMBLE.size
    while offset < len(blob):
        try:
            (name_len,) = _NAME_LEN.unpack_from(blob, offset)
            offset += _NAME_LEN.size
            name = blob[offset : offset + name_len].decode("utf-8")
            offset += name_len
            rows, cols = _SHAPE.unpack_from(blob, offset)
            offset += _SHAPE.size
        except (struct.error, UnicodeDecodeError) as e:
            raise OfaCheckpointError(f"corrupt block header at byte {offset}", FeatureFileErrorCode.TRUNCATED) from e
        size = 8 * rows * cols
        if offset + size > len(blob):
            raise OfaCheckpointError(f"block {name} cut short", FeatureFileErrorCode.TRUNCATED)
        blocks[name] = np.frombuffer(blob, dtype="<f8", count=rows * cols, offset=offset).reshape(rows, cols).astype(np.float64)
        offset += size
    return blocks


def decode_checkpoint(blob: bytes) -> Checkpoint:
    """
    Rebuild a checkpoint from bytes.

    Raises:
        OfaCheckpointError: bad magic, unsupported version, truncated blocks, or missing parameters.
    """
    blocks = _read_blocks(blob)
    if META_MODEL not in blocks:
        raise OfaCheckpointError(f"checkpoint has no {META_MODEL} block")
    row = blocks.pop(META_MODEL).reshape(-1)
    if row.size != len(_MODEL_FIELDS):
        raise OfaCheckpointError(f"{META_MODEL} has {row.size} values, expected {len(_MODEL_FIELDS)}")
    kwargs = {f: int(v) if f in _INT_FIELDS else float(v) for f, v in zip(_MODEL_FIELDS, row)}
    config = ModelConfig(**kwargs)
    range_block = blocks.pop(META_LAMBDA_RANGE, None)

    teacher_values = {k: v for k, v in blocks.items() if k.startswith("teacher.")}
    student_values = {k: v for k, v in blocks.items() if not k.startswith("teacher.")}
    try:
        lambda_range = None
        if range_block is not None:
            if range_block.size != 2:
                raise OfaCheckpointError(f"{META_LAMBDA_RANGE} has {range_block.size} values, expected 2")
            low, high = range_block.reshape(-1)
            lambda_range = SampleRange(float(low), float(high))
        student = StudentModel(config)
        student.load_parameters(student_values)
        teacher = None
        if teacher_values:
            teacher = TeacherModel(config)
            teacher.load_parameters(teacher_values)
    except OfaCompressError as e:
        raise OfaCheckpointError(f"inconsistent checkpoint: {e.message}") from e
    return Checkpoint(student, teacher, lambda_range)


def save_checkpoint(
    path: PathLike,
    student: StudentModel,
    teacher: Optional[TeacherModel] = None,
    lambda_range: Optional[SampleRange] = None,
) -> None:
    Path(path).write_bytes(encode_checkpoint(Checkpoint(student, teacher, lambda_range)))


def load_checkpoint(path: PathLike) -> Checkpoint:
    try:
        blob = Path(path).read_bytes()
    except OSError as e:
        raise OfaCheckpointError(f"cannot read checkpoint {path}: {e}") from e
    return decode_checkpoint(blob)
