# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""Dense float64 matrices with a reverse-mode tape."""

from .matrix import Matrix
from .tape import Tape, Gradients, backward, current_tape
from .counting import MacCounter, count_macs
from .gradcheck import GradCheckEntry, GradCheckReport, check_gradients
from . import ops

# GradientContext is the name the rest of the docs use for a tape
GradientContext = Tape

__all__ = [
    "Matrix",
    "Tape",
    "GradientContext",
    "Gradients",
    "backward",
    "current_tape",
    "MacCounter",
    "count_macs",
    "GradCheckEntry",
    "GradCheckReport",
    "check_gradients",
    "ops",
]
