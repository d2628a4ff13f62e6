# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from typing import Dict, Mapping

import numpy as np

from ..diffmath import Matrix
from ..errors import OfaNonFiniteError


class SGD:
    """
    Gradient descent with optional heavy-ball momentum: ``v = m*v + g; p -= lr*v``.

    Gradients are passed by parameter name; missing names count as zero.
    """

    def __init__(self, params: Mapping[str, Matrix], lr: float, momentum: float = 0.0):
        self.params = dict(params)
        self.lr = lr
        self.momentum = momentum
        self._velocity: Dict[str, np.ndarray] = {}

    def step(self, grads: Mapping[str, np.ndarray]) -> None:
        """
        Update every parameter in place.

        Raises:
            OfaNonFiniteError: an update produced NaN or infinity.
        """
        for name, param in self.params.items():
            g = grads.get(name)
            if g is None:
                g = np.zeros_like(param.data)
            if self.momentum:
                v = self.momentum * self._velocity.get(name, 0.0) + g
                self._velocity[name] = v
            else:
                v = g
            updated = param.data - self.lr * v
            if not np.all(np.isfinite(updated)):
                raise OfaNonFiniteError(f"update of {name} is not finite")
            param.data = updated
