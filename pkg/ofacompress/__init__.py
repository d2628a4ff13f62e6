# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
ofacompress

Once-for-all sequence compression: a CIF-based subsampler whose compressing
rate is set at inference time by a single control λ.
"""

__version__ = "0.1.0"

# Options
from .options import RunOptions

# Errors
from .errors import (
    ExitCode,
    FeatureFileErrorCode,
    OfaCompressError,
    OfaConfigError,
    OfaLambdaRangeError,
    OfaDataError,
    OfaBadMagicError,
    OfaTruncatedFileError,
    OfaUnsupportedVersionError,
    OfaCheckpointError,
    OfaShapeError,
    OfaNonFiniteError,
    OfaUnrecordedNodeError,
    OfaCifError,
    OfaDivergenceError,
)

# Differentiable math
from .diffmath import Matrix, Tape, GradientContext, backward, check_gradients, count_macs

# Integrate-and-fire
from .cif import CompressedSequence, FireEvent, Segmentation, integrate_and_fire, pool_segments

# λ control
from .alphamod import LambdaControl, LambdaMode, SampleRange, modify_alpha

# Data
from .data_io import Corpus, FeatureSequence, SyntheticSpec, generate_corpus, load_corpus, save_corpus

# Models
from .model import ModelConfig, StudentModel, TeacherModel, load_checkpoint, save_checkpoint

# Training
from .training import AdaptConfig, TrainConfig, adapt_lambda, fixed_lambda_pretrain, ofa_pretrain

# Profiling
from .profile import MacsConfig, macs_reduction, sweep, transformer_macs

# Logging
from .utils import (
    VerboseLogger,
    NOTICE,
    SPAM,
    SUCCESS,
    VERBOSE,
    WARNING,
    ERROR,
    FATAL,
    CRITICAL,
    INFO,
    DEBUG,
    NOTSET,
)

__all__ = [
    # Version
    "__version__",
    # Options
    "RunOptions",
    # Errors
    "ExitCode",
    "FeatureFileErrorCode",
    "OfaCompressError",
    "OfaConfigError",
    "OfaLambdaRangeError",
    "OfaDataError",
    "OfaBadMagicError",
    "OfaTruncatedFileError",
    "OfaUnsupportedVersionError",
    "OfaCheckpointError",
    "OfaShapeError",
    "OfaNonFiniteError",
    "OfaUnrecordedNodeError",
    "OfaCifError",
    "OfaDivergenceError",
    # Math
    "Matrix",
    "Tape",
    "GradientContext",
    "backward",
    "check_gradients",
    "count_macs",
    # CIF
    "CompressedSequence",
    "FireEvent",
    "Segmentation",
    "integrate_and_fire",
    "pool_segments",
    # λ
    "LambdaControl",
    "LambdaMode",
    "SampleRange",
    "modify_alpha",
    # Data
    "Corpus",
    "FeatureSequence",
    "SyntheticSpec",
    "generate_corpus",
    "load_corpus",
    "save_corpus",
    # Models
    "ModelConfig",
    "StudentModel",
    "TeacherModel",
    "load_checkpoint",
    "save_checkpoint",
    # Training
    "AdaptConfig",
    "TrainConfig",
    "adapt_lambda",
    "fixed_lambda_pretrain",
    "ofa_pretrain",
    # Profiling
    "MacsConfig",
    "macs_reduction",
    "sweep",
    "transformer_macs",
    # Logging
    "VerboseLogger",
    "NOTICE",
    "SPAM",
    "SUCCESS",
    "VERBOSE",
    "WARNING",
    "ERROR",
    "FATAL",
    "CRITICAL",
    "INFO",
    "DEBUG",
    "NOTSET",
]
