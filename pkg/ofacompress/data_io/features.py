# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
The FeatureFile binary format.

Little-endian throughout::

    magic     4 bytes  b"OFAF"
    version   u32      1
    T         u32      frames
    D         u32      feature dim
    period    f32      frame period in ms
    payload   T*D f32  row-major
    [marker   u32      0x0B00DA11
     bounds   T bytes  0/1 boundary bits]
"""

import struct
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import (
    OfaBadMagicError,
    OfaDataError,
    OfaTruncatedFileError,
    OfaUnsupportedVersionError,
)
from .types import FeatureSequence, GuidanceTargets

MAGIC = b"OFAF"
VERSION = 1
BOUNDARY_MARKER = 0xB00DA11

_HEADER = struct.Struct("<4sIIIf")
_MARKER = struct.Struct("<I")

PathLike = Union[str, Path]


def encode_features(seq: FeatureSequence, targets: Optional[GuidanceTargets] = None) -> bytes:
    """Serialize one utterance to FeatureFile bytes."""
    t_len, dim = seq.values.shape
    if targets is not None and len(targets) != t_len:
        raise OfaDataError(f"boundary block has {len(targets)} entries for {t_len} frames")
    parts = [
        _HEADER.pack(MAGIC, VERSION, t_len, dim, seq.frame_period_ms),
        seq.values.astype("<f4").tobytes(order="C"),
    ]
    if targets is not None:
        parts.append(_MARKER.pack(BOUNDARY_MARKER))
        parts.append(targets.boundaries.astype(np.uint8).tobytes())
    return b"".join(parts)


def decode_features(blob: bytes) -> Tuple[FeatureSequence, Optional[GuidanceTargets]]:
    """
    Parse FeatureFile bytes.

    Raises:
        OfaBadMagicError: the blob does not start with ``OFAF``.
        OfaUnsupportedVersionError: the version field is not 1.
        OfaTruncatedFileError: header, payload or boundary block cut short.
        OfaDataError: trailing bytes that are not a boundary block.
    """
    if len(blob) < 4 or blob[:4] != MAGIC:
        raise OfaBadMagicError(f"expected magic {MAGIC!r}, got {blob[:4]!r}")
    if len(blob) < _HEADER.size:
        raise OfaTruncatedFileError(f"header needs {_HEADER.size} bytes, file has {len(blob)}")
    _, version, t_len, dim, period = _HEADER.unpack_from(blob, 0)
    if version != VERSION:
        raise OfaUnsupportedVersionError(f"feature file version {version}, this build reads {VERSION}")

    offset = _HEADER.size
    payload_size = 4 * t_len * dim
    if len(blob) < offset + payload_size:
        raise OfaTruncatedFileError(
            f"payload needs {payload_size} bytes, file has {len(blob) - offset}"
        )
    values = np.frombuffer(blob, dtype="<f4", count=t_len * dim, offset=offset)
    seq = FeatureSequence(values.astype(np.float64).reshape(t_len, dim), float(period))
    offset += payload_size

    if offset == len(blob):
        return seq, None
    if len(blob) < offset + _MARKER.size:
        raise OfaTruncatedFileError("boundary marker cut short")
    (marker,) = _MARKER.unpack_from(blob, offset)
    if marker != BOUNDARY_MARKER:
        raise OfaDataError(f"unexpected block marker 0x{marker:08X} after payload")
    offset += _MARKER.size
    if len(blob) < offset + t_len:
        raise OfaTruncatedFileError(f"boundary block needs {t_len} bytes, file has {len(blob) - offset}")
    if len(blob) > offset + t_len:
        raise OfaDataError(f"{len(blob) - offset - t_len} trailing bytes after boundary block")
    bounds = np.frombuffer(blob, dtype=np.uint8, count=t_len, offset=offset).copy()
    return seq, GuidanceTargets(bounds)


def write_features(
    path: PathLike, seq: FeatureSequence, targets: Optional[GuidanceTargets] = None
) -> None:
    """Write one utterance as a FeatureFile."""
    Path(path).write_bytes(encode_features(seq, targets))


def read_features(path: PathLike) -> Tuple[FeatureSequence, Optional[GuidanceTargets]]:
    """Read a FeatureFile written by :func:`write_features`."""
    try:
        blob = Path(path).read_bytes()
    except OSError as e:
        raise OfaDataError(f"cannot read feature file {path}: {e}") from e
    return decode_features(blob)
