# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Tuple

import numpy as np

from .matrix import Matrix
from .tape import Tape


@dataclass
class GradCheckEntry:
    """One compared coordinate."""

    name: str
    index: Tuple[int, int]
    analytic: float
    numeric: float
    rel_error: float


@dataclass
class GradCheckReport:
    """Analytic vs central-difference gradients for a set of parameter entries."""

    entries: List[GradCheckEntry] = field(default_factory=list)

    @property
    def max_rel_error(self) -> float:
        return max((e.rel_error for e in self.entries), default=0.0)

    def worst(self) -> Optional[GradCheckEntry]:
        return max(self.entries, key=lambda e: e.rel_error, default=None)

    def passed(self, tol: float = 1e-3) -> bool:
        return self.max_rel_error <= tol


def check_gradients(
    loss_fn: Callable[[], Matrix],
    params: Mapping[str, Matrix],
    step: float = 1e-5,
    floor: float = 1e-8,
    max_entries: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradCheckReport:
    """
    Compare tape gradients of ``loss_fn()`` against central finite differences.

    ``loss_fn`` must rebuild the loss from the current values of ``params``
    each call. The relative error of an entry is
    ``|analytic - numeric| / max(|analytic|, floor)``. With ``max_entries``,
    that many coordinates per parameter are sampled with ``rng``.
    """
    with Tape() as tape:
        loss = loss_fn()
    grads = tape.backward(loss)

    if rng is None:
        rng = np.random.default_rng(0)

    report = GradCheckReport()
    for name, param in params.items():
        analytic = grads[param]
        indices = list(np.ndindex(*param.shape))
        if max_entries is not None and len(indices) > max_entries:
            picked = rng.choice(len(indices), size=max_entries, replace=False)
            indices = [indices[i] for i in sorted(picked)]
        for idx in indices:
            original = param.data[idx]
            param.data[idx] = original + step
            f_plus = loss_fn().item()
            param.data[idx] = original - step
            f_minus = loss_fn().item()
            param.data[idx] = original
            numeric = (f_plus - f_minus) / (2.0 * step)
            a = float(analytic[idx])
            rel = abs(a - numeric) / max(abs(a), floor)
            report.entries.append(GradCheckEntry(name, tuple(idx), a, numeric, rel))
    return report
