# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .enums import Command
from .main import build_parser, main
from .selftest import SelftestReport, run_selftest

__all__ = ["Command", "build_parser", "main", "SelftestReport", "run_selftest"]
