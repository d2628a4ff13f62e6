# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Union

from dataclasses_json import dataclass_json

from ..errors import OfaDataError

TRACE_COLUMNS = ("step", "lambda", "distill", "guidance", "quantity", "total")


@dataclass_json
@dataclass
class StepRecord:
    """Batch-mean losses of one optimization step and the λ drawn for it."""

    step: int
    lam: float
    distill: float
    guidance: float
    quantity: float
    total: float

    def row(self) -> List[str]:
        return [str(self.step)] + [repr(float(v)) for v in (self.lam, self.distill, self.guidance, self.quantity, self.total)]


def write_trace(path: Union[str, Path], records: Iterable[StepRecord]) -> None:
    """Write the loss trace as CSV: step, lambda, distill, guidance, quantity, total."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(TRACE_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


def read_trace(path: Union[str, Path]) -> List[StepRecord]:
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            return [
                StepRecord(
                    int(r["step"]),
                    float(r["lambda"]),
                    float(r["distill"]),
                    float(r["guidance"]),
                    float(r["quantity"]),
                    float(r["total"]),
                )
                for r in reader
            ]
    except (OSError, KeyError, ValueError) as e:
        raise OfaDataError(f"cannot read loss trace {path}: {e}") from e
