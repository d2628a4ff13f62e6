# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from dataclasses import dataclass
from typing import Optional

from scipy import special
from typing_extensions import Self

from ..diffmath import Matrix
from ..errors import OfaLambdaRangeError
from .enums import LambdaMode

LAMBDA_EPS = 1e-6
# the [0, 2) regime stops just short of 2, where Case 2 would zero every α
LAMBDA_CEILING = 2.0 - LAMBDA_EPS


@dataclass(frozen=True)
class SampleRange:
    """
    The interval λ is drawn from during pre-training.

    The three documented regimes are ``0:1``, ``0:1.5`` and ``0:2``; an upper
    bound of 2 is stored as 2 - 1e-6.
    """

    low: float = 0.0
    high: float = LAMBDA_CEILING

    def __post_init__(self):
        if self.high >= 2.0:
            object.__setattr__(self, "high", LAMBDA_CEILING)
        if not 0.0 <= self.low < self.high:
            raise OfaLambdaRangeError(f"sample range needs 0 <= low < high, got {self.low}:{self.high}")

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse ``low:high``, e.g. ``0:1.5``."""
        parts = text.split(":")
        if len(parts) != 2:
            raise OfaLambdaRangeError(f"lambda range must look like low:high, got {text!r}")
        try:
            low, high = float(parts[0]), float(parts[1])
        except ValueError as e:
            raise OfaLambdaRangeError(f"lambda range must be numeric, got {text!r}") from e
        if high > 2.0:
            raise OfaLambdaRangeError(f"lambda range cannot exceed 2, got {text!r}")
        return cls(low, high)

    def contains(self, lam: float) -> bool:
        return self.low <= lam <= self.high

    def __str__(self) -> str:
        high = 2.0 if self.high == LAMBDA_CEILING else self.high
        return f"{self.low:g}:{high:g}"


def check_lambda(value: float) -> float:
    """Validate a λ value, returning it as a float."""
    value = float(value)
    if not 0.0 <= value < 2.0:
        raise OfaLambdaRangeError(f"lambda must lie in [0, 2), got {value}")
    return value


@dataclass
class LambdaControl:
    """
    The compression control λ for one forward pass.

    In trainable mode λ is ``lambda_max * sigmoid(theta)`` and ``theta`` is a
    1x1 trainable matrix; :meth:`as_matrix` then carries the gradient to it.
    """

    value: float
    lambda_max: float = LAMBDA_CEILING
    mode: LambdaMode = LambdaMode.Fixed
    theta: Optional[Matrix] = None

    def __post_init__(self):
        if not 0.0 < self.lambda_max <= 2.0:
            raise OfaLambdaRangeError(f"lambda_max must lie in (0, 2], got {self.lambda_max}")
        if self.lambda_max == 2.0:
            self.lambda_max = LAMBDA_CEILING
        if self.mode == LambdaMode.Trainable:
            if self.theta is None:
                raise OfaLambdaRangeError("trainable lambda needs theta")
            self.refresh()
        check_lambda(self.value)
        if self.value > self.lambda_max:
            raise OfaLambdaRangeError(f"lambda {self.value} exceeds lambda_max {self.lambda_max}")

    @classmethod
    def fixed(cls, value: float) -> "LambdaControl":
        return cls(check_lambda(value), LAMBDA_CEILING, LambdaMode.Fixed)

    @classmethod
    def sampled(cls, value: float, lambda_max: float) -> "LambdaControl":
        return cls(check_lambda(value), lambda_max, LambdaMode.Sampled)

    @classmethod
    def trainable(cls, theta: float, lambda_max: float) -> "LambdaControl":
        param = Matrix.scalar(theta, requires_grad=True, name="theta")
        return cls(0.0, lambda_max, LambdaMode.Trainable, param)

    def refresh(self) -> float:
        """Recompute ``value`` from ``theta`` after an update."""
        if self.theta is not None:
            self.value = float(self.lambda_max * special.expit(self.theta.item()))
        return self.value

    def as_matrix(self) -> Matrix:
        """λ as a 1x1 matrix; differentiable w.r.t. theta in trainable mode."""
        if self.mode == LambdaMode.Trainable and self.theta is not None:
            from .modify import lambda_from_theta  # pylint: disable=import-outside-toplevel

            return lambda_from_theta(self.theta, self.lambda_max)
        return Matrix.scalar(self.value)
