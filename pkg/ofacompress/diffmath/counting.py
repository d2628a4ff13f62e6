# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import threading
from contextlib import contextmanager
from typing import Iterator, List


class MacCounter:
    """Running total of multiply-accumulates executed by :func:`~ofacompress.diffmath.ops.matmul`."""

    def __init__(self):
        self.total = 0

    def add(self, macs: int) -> None:
        self.total += macs


_state = threading.local()


def _counters() -> List[MacCounter]:
    if not hasattr(_state, "counters"):
        _state.counters = []
    return _state.counters


def record_macs(macs: int) -> None:
    for counter in _counters():
        counter.add(macs)


@contextmanager
def count_macs() -> Iterator[MacCounter]:
    """Count matmul MACs executed on this thread inside the block."""
    counter = MacCounter()
    _counters().append(counter)
    try:
        yield counter
    finally:
        _counters().remove(counter)
