# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import os
from typing import Optional

from .utils import verboselogs
from .errors import OfaConfigError


class RunOptions:  # pylint: disable=too-few-public-methods
    """
    Represents process-wide settings for one ofacompress run.

    Each setting is taken from the argument when given, else from the environment.

    Attributes:
        seed: (Optional) Seed for every stochastic stream of the run. Defaults to the `OFA_SEED` environment variable.
        verbose: (Optional) The logging level. Defaults to the `OFA_LOGGING` environment variable, else `verboselogs.WARNING`.
        workers: (Optional) Threads used by sweeps. Defaults to the `OFA_WORKERS` environment variable, else 1.
    """

    _logger: verboselogs.VerboseLogger

    def __init__(
        self,
        seed: Optional[int] = None,
        verbose: Optional[int] = None,
        workers: Optional[int] = None,
    ):
        if verbose is None:
            verbose = verboselogs.default_level()
        self.verbose = verbose
        self._logger = verboselogs.component_logger(__name__, verbose)

        if seed is None:
            env_seed = os.getenv("OFA_SEED", "")
            if env_seed != "":
                try:
                    seed = int(env_seed)
                except ValueError as e:
                    raise OfaConfigError(f"OFA_SEED is not an integer: {env_seed!r}") from e
                self._logger.verbose("seed taken from OFA_SEED: %d", seed)
        self.seed = seed

        if workers is None:
            env_workers = os.getenv("OFA_WORKERS", "") or "1"
            try:
                workers = int(env_workers)
            except ValueError as e:
                raise OfaConfigError(f"OFA_WORKERS is not an integer: {env_workers!r}") from e
        if workers < 1:
            raise OfaConfigError(f"workers must be >= 1, got {workers}")
        self.workers = workers

    def require_seed(self, command: str) -> int:
        """
        require_seed: Returns the seed, raising if a stochastic command has none.

        Args:
            command: The command name, used in the error message.
        """
        if self.seed is None:
            raise OfaConfigError(f"{command} is stochastic: pass --seed or set OFA_SEED")
        return self.seed
