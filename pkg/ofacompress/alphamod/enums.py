# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from aenum import StrEnum


class LambdaMode(StrEnum):
    """
    How λ is chosen for a forward pass.
    """

    Fixed: str = "fixed"
    Sampled: str = "sampled"
    Trainable: str = "trainable"
