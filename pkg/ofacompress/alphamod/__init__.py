# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from .enums import LambdaMode
from .options import LAMBDA_CEILING, LAMBDA_EPS, LambdaControl, SampleRange, check_lambda
from .modify import lambda_from_theta, modify_alpha, switch_margin, theta_from_lambda
from .sampling import (
    FixedLambdaSampler,
    LambdaSampler,
    ReplayLambdaSampler,
    UniformLambdaSampler,
    sample_lambda,
)

__all__ = [
    "LambdaMode",
    "LAMBDA_CEILING",
    "LAMBDA_EPS",
    "LambdaControl",
    "SampleRange",
    "check_lambda",
    "lambda_from_theta",
    "modify_alpha",
    "switch_margin",
    "theta_from_lambda",
    "FixedLambdaSampler",
    "LambdaSampler",
    "ReplayLambdaSampler",
    "UniformLambdaSampler",
    "sample_lambda",
]
