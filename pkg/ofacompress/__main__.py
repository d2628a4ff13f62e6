# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import sys

from .cli.main import main

sys.exit(main())
