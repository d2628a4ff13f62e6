# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
ofacompress Errors Module

This module contains all custom exceptions used throughout ofacompress, plus the
process exit codes the command line maps them to.
"""

from enum import IntEnum
from typing import Optional


class ExitCode(IntEnum):
    """
    Process exit codes returned by the ``ofacompress`` command line.
    """

    OK = 0               # Command completed
    INTERNAL = 1         # Unexpected failure
    USAGE = 2            # Bad flags (argparse convention)
    CONFIG_ERROR = 3     # Config document missing, malformed or invalid
    DATA_ERROR = 4       # Feature file, manifest or checkpoint unreadable
    DIVERGENCE = 5       # Training produced a non-finite loss

    @classmethod
    def get_description(cls, code: int) -> str:
        """Get human-readable description for an exit code."""
        descriptions = {
            0: "OK",
            1: "Internal error",
            2: "Usage error",
            3: "Configuration error",
            4: "Data error",
            5: "Training diverged",
        }
        return descriptions.get(code, f"Unknown exit code: {code}")


class FeatureFileErrorCode(IntEnum):
    """
    Distinct failure codes for reading FeatureFile documents.
    """

    BAD_MAGIC = 1
    TRUNCATED = 2
    UNSUPPORTED_VERSION = 3

    @classmethod
    def get_description(cls, code: int) -> str:
        """Get human-readable description for a feature file error code."""
        descriptions = {
            1: "bad magic",
            2: "truncated payload",
            3: "unsupported version",
        }
        return descriptions.get(code, f"Unknown feature file error: {code}")


class OfaCompressError(Exception):
    """
    Base exception for all ofacompress errors.
    """

    exit_code: ExitCode = ExitCode.INTERNAL

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class OfaConfigError(OfaCompressError):
    """
    Exception raised when a configuration document or argument is invalid.
    """

    exit_code = ExitCode.CONFIG_ERROR


class OfaLambdaRangeError(OfaConfigError):
    """
    Exception raised when λ or a λ range falls outside [0, 2).
    """


class OfaDataError(OfaCompressError):
    """
    Exception raised when input data cannot be read or does not match expectations.
    """

    exit_code = ExitCode.DATA_ERROR

    def __init__(self, message: str, code: Optional[int] = None):
        super().__init__(message)
        self.code = code
        if code:
            description = FeatureFileErrorCode.get_description(code)
            self.message = f"{message} (Code {code}: {description})"


class OfaBadMagicError(OfaDataError):
    """
    Exception raised when a file does not start with the expected magic bytes.
    """

    def __init__(self, message: str = "bad magic"):
        super().__init__(message, FeatureFileErrorCode.BAD_MAGIC)


class OfaTruncatedFileError(OfaDataError):
    """
    Exception raised when a file ends before its header says it should.
    """

    def __init__(self, message: str = "truncated payload"):
        super().__init__(message, FeatureFileErrorCode.TRUNCATED)


class OfaUnsupportedVersionError(OfaDataError):
    """
    Exception raised when a file carries a format version this build cannot read.
    """

    def __init__(self, message: str = "version unsupported"):
        super().__init__(message, FeatureFileErrorCode.UNSUPPORTED_VERSION)


class OfaCheckpointError(OfaDataError):
    """
    Exception raised for malformed or incomplete model checkpoints.
    """


class OfaShapeError(OfaCompressError):
    """
    Exception raised when matrix operands have incompatible shapes.
    """


class OfaNonFiniteError(OfaCompressError):
    """
    Exception raised when a computation produces NaN or infinite values.
    """


class OfaUnrecordedNodeError(OfaCompressError):
    """
    Exception raised when backward is requested for a value no tape recorded.
    """


class OfaCifError(OfaCompressError):
    """
    Exception raised for invalid integrate-and-fire inputs.
    """


class OfaDivergenceError(OfaCompressError):
    """
    Exception raised when a training loop produces a non-finite loss.

    Attributes:
        step (int): The optimization step at which the loss diverged
        lam (float): The λ drawn for that step
    """

    exit_code = ExitCode.DIVERGENCE

    def __init__(self, message: str, step: int = -1, lam: float = float("nan")):
        super().__init__(message)
        self.step = step
        self.lam = lam
        self.message = f"{message} (step {step}, lambda {lam:.6f})"
