# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from aenum import StrEnum


class GuidanceMode(StrEnum):
    """
    Which guidance terms steer the raw α.
    """

    BoundaryBce: str = "boundary_bce"
    Quantity: str = "quantity"
    Both: str = "both"


class TaskLevel(StrEnum):
    """
    Granularity of a synthetic downstream task.
    """

    Utterance: str = "utterance"
    Frame: str = "frame"
