# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from aenum import StrEnum


class Command(StrEnum):
    """
    Subcommands of the ``ofacompress`` command line.
    """

    GenData: str = "gen-data"
    Pretrain: str = "pretrain"
    PretrainFixed: str = "pretrain-fixed"
    Sweep: str = "sweep"
    Adapt: str = "adapt"
    Profile: str = "profile"
    Selftest: str = "selftest"


# commands that draw random numbers and therefore need --seed or OFA_SEED
STOCHASTIC = frozenset({Command.GenData, Command.Pretrain, Command.PretrainFixed, Command.Adapt})
