# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .options import MacsConfig
from .macs import (
    PROFILE_COLUMNS,
    MacsReport,
    ProfileRow,
    compressed_frames,
    count_model_macs,
    frame_period,
    macs_config_for,
    macs_reduction,
    profile_periods,
    reduction_at_period,
    transformer_macs,
    write_profile,
)
from .sweep import SWEEP_COLUMNS, SweepRow, sweep, write_sweep

__all__ = [
    "MacsConfig",
    "PROFILE_COLUMNS",
    "MacsReport",
    "ProfileRow",
    "compressed_frames",
    "count_model_macs",
    "frame_period",
    "macs_config_for",
    "macs_reduction",
    "profile_periods",
    "reduction_at_period",
    "transformer_macs",
    "write_profile",
    "SWEEP_COLUMNS",
    "SweepRow",
    "sweep",
    "write_sweep",
]
