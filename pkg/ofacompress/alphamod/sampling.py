# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from abc import ABC, abstractmethod
from typing import Iterable, List, Optional, Union

import numpy as np

from ..errors import OfaLambdaRangeError
from ..utils import verboselogs
from .options import SampleRange, check_lambda


def sample_lambda(rng: np.random.Generator, sample_range: SampleRange) -> float:
    """One uniform draw of λ from ``sample_range``."""
    return float(rng.uniform(sample_range.low, sample_range.high))


class LambdaSampler(ABC):
    """
    Source of the per-step λ for a pre-training run; one draw per optimization step.
    """

    @abstractmethod
    def draw(self) -> float:
        """The λ for the next step."""

    @property
    @abstractmethod
    def lambda_max(self) -> float:
        """Largest λ this sampler can return."""


class UniformLambdaSampler(LambdaSampler):
    """Uniform draws from a :class:`SampleRange` on a private seeded stream."""

    def __init__(
        self,
        sample_range: SampleRange,
        seed: Union[int, np.random.SeedSequence],
        verbose: Optional[int] = None,
    ):
        self._logger = verboselogs.component_logger(__name__, verbose)
        self._range = sample_range
        self._rng = np.random.default_rng(seed)

    def draw(self) -> float:
        lam = sample_lambda(self._rng, self._range)
        self._logger.spam("drew lambda %.6f", lam)
        return lam

    @property
    def lambda_max(self) -> float:
        return self._range.high


class FixedLambdaSampler(LambdaSampler):
    """Always the same λ: the specialist baseline."""

    def __init__(self, value: float):
        self._value = check_lambda(value)

    def draw(self) -> float:
        return self._value

    @property
    def lambda_max(self) -> float:
        return self._value


class ReplayLambdaSampler(LambdaSampler):
    """Replays a recorded sequence of draws, e.g. from a loss trace."""

    def __init__(self, values: Iterable[float]):
        self._values: List[float] = [check_lambda(v) for v in values]
        self._next = 0

    def draw(self) -> float:
        if self._next >= len(self._values):
            raise OfaLambdaRangeError("replay sampler ran out of recorded lambdas")
        lam = self._values[self._next]
        self._next += 1
        return lam

    @property
    def lambda_max(self) -> float:
        return max(self._values, default=0.0)
